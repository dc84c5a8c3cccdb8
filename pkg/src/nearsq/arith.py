"""Exact integer arithmetic: prime tables, factor signatures, sawtooth helpers.

Everything here is exact.  Counting decisions are never made in floating
point; the float-facing helpers (sawtooth, nearest integer) exist for the
analytic side, while ``near_square_roots`` is the integer predicate that the
enumeration modules fall back to near decision boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CoverageError, InvalidArgumentError

SPF_LIMIT_DEFAULT = 10**7
_SEGMENT = 1 << 20


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string, or float.

    Floats are converted through their exact binary value, so a float
    standing in for an irrational number is snapped to a rational with
    relative error below 2**-52.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidArgumentError("cannot convert non-finite float to a rational")
        return Fraction(*x.as_integer_ratio())
    raise InvalidArgumentError(f"cannot interpret {x!r} as a rational number")


@dataclass(frozen=True)
class FactorSignature:
    """Exact multiplicative profile of a natural number."""

    n: int
    Omega: int  # prime factors counted with multiplicity
    nu: int  # distinct prime factors
    mu: int  # Moebius value in {-1, 0, 1}
    tau: int  # divisor count


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, plus a smallest-prime-factor array when it fits.

    The table is immutable after construction and safe to share across
    workers.  ``spf[n]`` is the smallest prime factor of n for 2 <= n <=
    limit; it is only materialized when the limit fits the memory budget.
    """

    limit: int
    primes: np.ndarray
    spf: np.ndarray | None

    def __len__(self) -> int:
        return len(self.primes)

    def covers(self, n: int) -> bool:
        """True when factor_signature(n) can run against this table."""
        if n < 1:
            return False
        if self.spf is not None and n <= self.limit:
            return True
        return self.limit * self.limit >= n

    def smallest_prime_factor(self, n: int) -> int:
        if n < 2:
            raise InvalidArgumentError("smallest prime factor needs n >= 2")
        if self.spf is not None and n <= self.limit:
            return int(self.spf[n])
        if not self.covers(n):
            raise CoverageError(f"table limit {self.limit} cannot factor {n}")
        for p in self.primes:
            p = int(p)
            if p * p > n:
                break
            if n % p == 0:
                return p
        return n


def _dense_table(limit: int) -> PrimeTable:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    unmarked = (spf == 0) & (idx >= 2)
    spf[unmarked] = idx[unmarked]
    primes = idx[2:][spf[2:] == idx[2:]]
    return PrimeTable(limit=limit, primes=primes, spf=spf)


def _segmented_primes(limit: int) -> np.ndarray:
    base = _dense_table(math.isqrt(limit))
    chunks = [base.primes]
    lo = int(base.limit) + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base.primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            seg[start - lo :: p] = False
        chunks.append(np.nonzero(seg)[0].astype(np.int64) + lo)
        lo = hi
    return np.concatenate(chunks)


def build_prime_table(limit: int, spf_budget: int = SPF_LIMIT_DEFAULT) -> PrimeTable:
    """Generate all primes up to ``limit``.

    Below ``spf_budget`` a smallest-prime-factor array is kept for O(log n)
    factorization; above it the primes are produced segment by segment and
    factorization falls back to trial division by table primes.
    """
    if limit < 2:
        raise InvalidArgumentError("prime table limit must be at least 2")
    if limit <= spf_budget:
        return _dense_table(limit)
    return PrimeTable(limit=limit, primes=_segmented_primes(limit), spf=None)


def factor_signature(n: int, table: PrimeTable) -> FactorSignature:
    """Exact Omega, nu, mu, tau of n computed against ``table``."""
    if n < 1:
        raise InvalidArgumentError("factor_signature needs n >= 1")
    if n == 1:
        return FactorSignature(n=1, Omega=0, nu=0, mu=1, tau=1)
    if not table.covers(n):
        raise CoverageError(
            f"prime table limit {table.limit} does not cover factorization of {n}"
        )

    exponents: list[int] = []
    m = n
    if table.spf is not None and n <= table.limit:
        while m > 1:
            p = int(table.spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            exponents.append(e)
    else:
        for p in table.primes:
            p = int(p)
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                exponents.append(e)
        if m > 1:
            exponents.append(1)

    omega_total = sum(exponents)
    nu = len(exponents)
    mu = 0 if any(e > 1 for e in exponents) else (-1) ** nu
    tau = math.prod(e + 1 for e in exponents)
    return FactorSignature(n=n, Omega=omega_total, nu=nu, mu=mu, tau=tau)


def is_almost_prime(n: int, k: int, table: PrimeTable) -> bool:
    """True when n has at most k prime factors counted with multiplicity."""
    if k < 0:
        raise InvalidArgumentError("almost-prime order k must be nonnegative")
    return factor_signature(n, table).Omega <= k


def sawtooth_psi(t: float) -> float:
    """t - floor(t) - 1/2, the 1-periodic sawtooth with values in [-1/2, 1/2)."""
    frac = t - math.floor(t)
    if frac >= 1.0:  # rounding at tiny negative t; keep the half-open range
        frac = math.nextafter(1.0, 0.0)
    return frac - 0.5


def nearest_integer(t: float) -> int:
    """Closest integer to t; exact half-integers round up."""
    return math.floor(t + 0.5)


def distance_to_nearest(t: float) -> float:
    """Distance from t to the nearest integer, in [0, 1/2]."""
    return abs(t - nearest_integer(t))


def near_square_roots(m: int, num: int, den: int) -> list[int]:
    """Integers l with |sqrt(m) - l| < num/den, decided in exact integer arithmetic.

    Both inequalities are strict, so an m whose square root sits exactly at
    distance num/den from an integer is excluded.
    """
    if m < 0:
        raise InvalidArgumentError("m must be nonnegative")
    if num <= 0 or den <= 0:
        raise InvalidArgumentError("window num/den must be positive")
    c = den * den * m
    r = math.isqrt(c)
    lo = max((r - num) // den + 1, 0)
    hi = (r + num) // den
    out = []
    for l in range(lo, hi + 1):
        up = den * l + num
        if c >= up * up:
            continue
        dn = den * l - num
        if dn < 0 or dn * dn < c:
            out.append(l)
    return out
