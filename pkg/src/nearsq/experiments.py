"""Brute-force counting experiments on subsets of (N, 2N].

The central object is the multiset of integers l sitting within a window
delta of the square root of a product a*b, enumerated exactly: a certified
floating-point filter decides the overwhelming majority of pairs, and any
pair whose distance falls within the filter's provable error margin of the
window edge is resolved in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import PrimeTable, as_fraction, factor_signature, near_square_roots
from .errors import BudgetError, CoverageError, InvalidArgumentError

PAIR_BUDGET_DEFAULT = 10**9
_PROVENANCES = ("full", "bernoulli", "explicit", "adversarial-spread")


@dataclass(frozen=True)
class IntervalSubset:
    """Finite subset of (N, 2N] with its generation provenance."""

    base_N: int
    elements: np.ndarray
    provenance: str
    seed: int | None = None
    density: float | None = None

    def __post_init__(self):
        els = np.asarray(self.elements, dtype=np.int64)
        object.__setattr__(self, "elements", els)
        if self.base_N < 2:
            raise InvalidArgumentError("base_N must be at least 2")
        if self.provenance not in _PROVENANCES:
            raise InvalidArgumentError(f"unknown provenance {self.provenance!r}")
        if len(els) == 0:
            return
        if els[0] <= self.base_N or els[-1] > 2 * self.base_N:
            raise InvalidArgumentError("elements must lie in (N, 2N]")
        if not np.all(np.diff(els) > 0):
            raise InvalidArgumentError("elements must be sorted and distinct")

    def __len__(self) -> int:
        return len(self.elements)


def generate_subset(
    base_N: int,
    kind: str = "full",
    *,
    density: float | None = None,
    seed: int = 0,
    elements=None,
) -> IntervalSubset:
    """Deterministically generate a subset of (N, 2N] of the requested kind.

    ``bernoulli`` keeps each element independently with probability
    ``density`` using a PCG64 stream seeded by ``seed``.  The adversarial
    spread keeps exactly the n whose square root stays at least 1/4 away
    from every integer, the classical obstruction set for single subsets.
    """
    if base_N < 2:
        raise InvalidArgumentError("base_N must be at least 2")
    window = np.arange(base_N + 1, 2 * base_N + 1, dtype=np.int64)
    if kind == "full":
        return IntervalSubset(base_N, window, "full")
    if kind == "bernoulli":
        if density is None or not 0.0 < density <= 1.0:
            raise InvalidArgumentError("bernoulli density must lie in (0, 1]")
        rng = np.random.default_rng(seed)
        mask = rng.random(len(window)) < density
        return IntervalSubset(base_N, window[mask], "bernoulli", seed=seed, density=density)
    if kind == "adversarial-spread":
        roots = np.sqrt(window.astype(np.float64))
        l = np.rint(roots).astype(np.int64)
        keep = (16 * window <= (4 * l - 1) ** 2) | (16 * window >= (4 * l + 1) ** 2)
        return IntervalSubset(base_N, window[keep], "adversarial-spread")
    if kind == "explicit":
        if elements is None:
            raise InvalidArgumentError("explicit subsets need an element list")
        els = np.unique(np.asarray(sorted(elements), dtype=np.int64))
        return IntervalSubset(base_N, els, "explicit")
    raise InvalidArgumentError(f"unknown subset kind {kind!r}")


@dataclass
class NearSquareCount:
    """Exact near-square pair count and the multiset of rounded roots.

    ``multiplicities[l - l_offset]`` is the number of (a, b, l) incidences
    with |sqrt(a*b) - l| < delta; for delta <= 1/2 each pair contributes at
    most one l, so H_count is the number of qualifying pairs.
    ``boundary_margin`` is the smallest float distance observed between a
    pair and the window edge, which gates comparisons against naive
    floating-point recounts.
    """

    delta: Fraction
    base_N: int
    A_size: int
    B_size: int
    H_count: int
    multiplicities: np.ndarray
    l_offset: int
    distinct_count: int
    boundary_margin: float
    exact_fallbacks: int

    @property
    def delta_float(self) -> float:
        return float(self.delta)

    @property
    def pair_total(self) -> int:
        return self.A_size * self.B_size

    def rounded_values(self) -> list[tuple[int, int]]:
        idx = np.nonzero(self.multiplicities)[0]
        return [(int(i) + self.l_offset, int(self.multiplicities[i])) for i in idx]


def _empty_count(delta: Fraction, base_N: int, a_size: int, b_size: int) -> NearSquareCount:
    size = base_N + 4
    return NearSquareCount(
        delta=delta,
        base_N=base_N,
        A_size=a_size,
        B_size=b_size,
        H_count=0,
        multiplicities=np.zeros(size, dtype=np.int64),
        l_offset=base_N - 1,
        distinct_count=0,
        boundary_margin=math.inf,
        exact_fallbacks=0,
    )


def count_near_squares(
    A: IntervalSubset,
    B: IntervalSubset,
    delta,
    max_pairs: int = PAIR_BUDGET_DEFAULT,
) -> NearSquareCount:
    """Exact count of pairs (a, b) with sqrt(a*b) within delta of an integer.

    ``delta`` is snapped to an exact rational (floats through their binary
    value, relative error < 2**-52) and every counting decision is an exact
    integer comparison: the float path only decides pairs whose margin
    provably exceeds the square-root rounding error, the rest fall back to
    integer arithmetic.  Values 1/2 < delta < 1 are supported; a pair may
    then contribute two rounded values, and H_count counts incidences.
    """
    if A.base_N != B.base_N:
        raise InvalidArgumentError("both subsets must share the same base N")
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise InvalidArgumentError("window delta must lie in (0, 1)")
    n_pairs = len(A) * len(B)
    if n_pairs > max_pairs:
        raise BudgetError(f"{n_pairs} pairs exceed the budget of {max_pairs}")

    N = A.base_N
    if 4 * N * N > 2**53:
        raise BudgetError("products exceed the exact float-filter range")
    out = _empty_count(delta, N, len(A), len(B))
    if n_pairs == 0:
        return out

    df = float(delta)
    num, den = delta.numerator, delta.denominator
    margin = 2.0 * np.spacing(2.0 * (N + 1)) + 1e-15
    counts = out.multiplicities
    off = out.l_offset
    b_arr = B.elements
    min_margin = math.inf
    fallbacks = 0
    half_window = df <= 0.5

    for a in A.elements:
        prod = int(a) * b_arr
        t = np.sqrt(prod.astype(np.float64))
        if half_window:
            l = np.rint(t)
            gap = np.abs(t - l) - df
            row_min = float(np.min(np.abs(gap)))
            if row_min < min_margin:
                min_margin = row_min
            unsure = np.abs(gap) <= margin
            sure_in = gap < -margin
            lv = l[sure_in].astype(np.int64)
            if lv.size:
                lmin, lmax = int(lv[0]), int(lv[-1])
                counts[lmin - off : lmax - off + 1] += np.bincount(
                    lv - lmin, minlength=lmax - lmin + 1
                )
        else:
            fl = np.floor(t)
            frac = t - fl
            gap_low = frac - df
            gap_high = (1.0 - frac) - df
            row_min = float(min(np.min(np.abs(gap_low)), np.min(np.abs(gap_high))))
            if row_min < min_margin:
                min_margin = row_min
            unsure = (
                (frac <= margin)
                | (frac >= 1.0 - margin)
                | (np.abs(gap_low) <= margin)
                | (np.abs(gap_high) <= margin)
            )
            for mask, cand in ((gap_low < -margin, fl), (gap_high < -margin, fl + 1.0)):
                lv = cand[mask & ~unsure].astype(np.int64)
                if lv.size:
                    lmin, lmax = int(lv[0]), int(lv[-1])
                    counts[lmin - off : lmax - off + 1] += np.bincount(
                        lv - lmin, minlength=lmax - lmin + 1
                    )
        if np.any(unsure):
            for b in b_arr[unsure]:
                fallbacks += 1
                for l in near_square_roots(int(a) * int(b), num, den):
                    counts[l - off] += 1

    out.H_count = int(counts.sum())
    out.distinct_count = int(np.count_nonzero(counts))
    out.boundary_margin = min_margin
    out.exact_fallbacks = fallbacks
    return out


def recount_float(A: IntervalSubset, B: IntervalSubset, delta) -> int:
    """Naive floating-point recount, the cross-check for well-separated instances."""
    df = float(as_fraction(delta))
    total = 0
    for a in A.elements:
        t = np.sqrt((int(a) * B.elements).astype(np.float64))
        if df <= 0.5:
            total += int(np.count_nonzero(np.abs(t - np.rint(t)) < df))
        else:
            frac = t - np.floor(t)
            total += int(np.count_nonzero(frac < df))
            total += int(np.count_nonzero(1.0 - frac < df))
    return total


@dataclass(frozen=True)
class SieveDecomposition:
    """Divisibility counts |A_d| = X/d + r(d) with the remainders forced exactly."""

    X: Fraction
    counts: dict[int, int]
    remainders: dict[int, Fraction]

    def scaled_remainder_max(self, d_max: int | None = None) -> float:
        ds = [d for d in self.counts if d_max is None or d <= d_max]
        return max(float(abs(d * self.remainders[d] / self.X)) for d in ds)


def sieve_decomposition(
    nsc: NearSquareCount, A_size: int, B_size: int, d_max: int
) -> SieveDecomposition:
    """Bucket the rounded-value multiset by divisibility for every d <= d_max."""
    if d_max < 1:
        raise InvalidArgumentError("d_max must be at least 1")
    X = 2 * nsc.delta * A_size * B_size
    counts: dict[int, int] = {}
    remainders: dict[int, Fraction] = {}
    mult = nsc.multiplicities
    off = nsc.l_offset
    top = off + len(mult) - 1
    for d in range(1, d_max + 1):
        first = ((off + d - 1) // d) * d
        if first > top:
            counts[d] = 0
        else:
            counts[d] = int(mult[first - off :: d].sum())
        remainders[d] = counts[d] - X / d
    return SieveDecomposition(X=X, counts=counts, remainders=remainders)


def _distinct_values(nsc: NearSquareCount) -> tuple[np.ndarray, np.ndarray]:
    idx = np.nonzero(nsc.multiplicities)[0]
    return idx + nsc.l_offset, nsc.multiplicities[idx]


def sifting_function(nsc: NearSquareCount, z: float, table: PrimeTable) -> int:
    """Number of multiset entries with no prime factor below z."""
    if z < 2:
        raise InvalidArgumentError("sifting level z must be at least 2")
    values, mults = _distinct_values(nsc)
    if len(values) == 0:
        return 0
    top = int(values[-1])
    if table.spf is not None and top <= table.limit:
        spf = table.spf[values]
        survive = spf >= z
        survive |= values == 1
        return int(mults[survive].sum())
    total = 0
    for l, m in zip(values, mults):
        l = int(l)
        if l == 1 or table.smallest_prime_factor(l) >= z:
            total += int(m)
    return total


@dataclass(frozen=True)
class AlmostPrimeCounts:
    """Entries whose rounded value has at most k prime factors (with multiplicity)."""

    k: int
    multiset_count: int
    distinct_count: int


def almost_prime_count(nsc: NearSquareCount, k: int, table: PrimeTable) -> AlmostPrimeCounts:
    """Count multiset entries (and distinct rounded values) with Omega(l) <= k."""
    if k < 0:
        raise InvalidArgumentError("almost-prime order k must be nonnegative")
    values, mults = _distinct_values(nsc)
    total = 0
    distinct = 0
    for l, m in zip(values, mults):
        if factor_signature(int(l), table).Omega <= k:
            total += int(m)
            distinct += 1
    return AlmostPrimeCounts(k=k, multiset_count=total, distinct_count=distinct)


def weighted_sum(
    nsc: NearSquareCount,
    k: int,
    table: PrimeTable,
    squarefree_only: bool = False,
) -> Fraction:
    """Weighted count over entries coprime to all primes below N^(1/15).

    Each qualifying entry contributes 1 minus half the number of its
    distinct prime factors p with N^(1/15) <= p < N^(1/k); the prime-range
    comparisons are done exactly through p**15 >= N and p**k < N.  The
    result is an exact half-integer rational.
    """
    if not 4 <= k <= 14:
        raise InvalidArgumentError("weighted sum order k must lie in 4..14")
    N = nsc.base_N
    values, mults = _distinct_values(nsc)
    doubled = 0
    for l, m in zip(values, mults):
        l = int(l)
        if l == 1:
            doubled += 2 * int(m)
            continue
        if not table.covers(l):
            raise CoverageError(f"prime table cannot factor rounded value {l}")
        primes = []
        squarefree = True
        rest = l
        while rest > 1:
            p = table.smallest_prime_factor(rest)
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            if e > 1:
                squarefree = False
            primes.append(p)
        if primes[0] ** 15 < N:
            continue  # shares a factor with the small-prime product
        if squarefree_only and not squarefree:
            continue
        mid = sum(1 for p in primes if p**15 >= N and p**k < N)
        doubled += int(m) * (2 - mid)
    return Fraction(doubled, 2)


def normalized_residual(
    A: IntervalSubset,
    B: IntervalSubset,
    delta,
    nsc: NearSquareCount | None = None,
    max_pairs: int = PAIR_BUDGET_DEFAULT,
) -> float:
    """(H - 2*delta*|A|*|B|) / (N * (|A||B|)^(1/4) * log(N)^(3/2)).

    The numerator is exact; the asymptotic main-term statement asserts this
    ratio stays bounded once |A||B| clears N^(4/3).
    """
    if nsc is None:
        nsc = count_near_squares(A, B, delta, max_pairs=max_pairs)
    X = 2 * nsc.delta * len(A) * len(B)
    numer = float(Fraction(nsc.H_count) - X)
    N = A.base_N
    denom = N * (len(A) * len(B)) ** 0.25 * math.log(N) ** 1.5
    return numer / denom


def main_term_dominant(A: IntervalSubset, B: IntervalSubset) -> bool:
    """Whether |A||B| clears the N^(4/3) threshold where the main term dominates."""
    N = A.base_N
    return len(A) * len(B) >= N ** (4.0 / 3.0)
