"""Sawtooth trigonometric approximation and brute-force checks of oscillation bounds.

The sawtooth approximation realizes the classical construction: a degree-H
trigonometric polynomial whose pointwise error is dominated by a nonnegative
Fejer-type kernel with coefficients of size 1/H.  The bound checkers
enumerate the counting quantities behind the bilinear dispersion argument
exactly and record measured/bound ratios for regression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, InvalidArgumentError
from .experiments import IntervalSubset

TERM_BUDGET = 10**8


@dataclass(frozen=True)
class SawtoothApproximation:
    """Finite trig approximation of the sawtooth with a nonnegative error envelope.

    main coefficients: u(h) = i * phi(h/(H+1)) / (2 pi h) for 1 <= h <= H,
    with u(-h) the conjugate, where phi(x) = pi x (1-x) cot(pi x) + x.
    envelope coefficients: v(|h|) = (1 - |h|/(H+1)) / (2H + 2), whose cosine
    sum is (1/(2H+2)) times the Fejer kernel, hence nonnegative, and for
    every t:   |sawtooth(t) - main_term(t)| <= error_kernel(t).
    """

    H: int
    u_coeffs: np.ndarray  # complex u(h) for h = 1..H
    v_coeffs: np.ndarray  # real v(|h|) for |h| = 0..H
    c1: float  # measured sup over h of |h * u(h)|
    c2: float  # measured sup over h of H * v(h)

    def main_term(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        h = np.arange(1, self.H + 1, dtype=np.float64)
        weights = 2.0 * np.imag(self.u_coeffs)  # u(h) e(ht) + conj gives -w sin
        vals = -np.sin(2.0 * math.pi * np.outer(t_arr, h)) @ weights
        return float(vals[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else vals

    def error_kernel(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        h = np.arange(1, self.H + 1, dtype=np.float64)
        vals = self.v_coeffs[0] + 2.0 * (
            np.cos(2.0 * math.pi * np.outer(t_arr, h)) @ self.v_coeffs[1:]
        )
        return float(vals[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else vals


def build_sawtooth_approximation(H: int) -> SawtoothApproximation:
    """Degree-H sawtooth approximation satisfying the pointwise envelope contract."""
    if H < 2:
        raise InvalidArgumentError("frequency cutoff H must be at least 2")
    h = np.arange(1, H + 1, dtype=np.float64)
    x = h / (H + 1.0)
    phi = math.pi * x * (1.0 - x) / np.tan(math.pi * x) + x
    u = 1j * phi / (2.0 * math.pi * h)
    v = (1.0 - np.arange(0, H + 1, dtype=np.float64) / (H + 1.0)) / (2.0 * H + 2.0)
    return SawtoothApproximation(
        H=H,
        u_coeffs=u,
        v_coeffs=v,
        c1=float(np.max(np.abs(u) * h)),
        c2=float(np.max(v) * H),
    )


@dataclass(frozen=True)
class BoundCheckRecord:
    """One measured-versus-bound instance of an oscillation-count inequality."""

    check: str
    params: dict
    measured_value: float
    bound_value: float

    @property
    def ratio(self) -> float:
        return self.measured_value / self.bound_value


def quadruple_count(
    M: int,
    N: int,
    theta: float,
    alpha_exp: float,
    beta_exp: float,
    budget: int = TERM_BUDGET,
) -> BoundCheckRecord:
    """Exact count of quadruples with |(m'/m)^alpha - (n'/n)^beta| < theta.

    m, m' range over [M, 2M) and n, n' over [N, 2N); the reference bound is
    M*N*log(2MN) + theta*M^2*N^2.
    """
    if M < 1 or N < 1:
        raise InvalidArgumentError("ranges must satisfy M, N >= 1")
    if theta <= 0:
        raise InvalidArgumentError("window theta must be positive")
    if alpha_exp == 0 or beta_exp == 0:
        raise InvalidArgumentError("exponents must be nonzero")
    if M * M * N * N > budget:
        raise BudgetError(f"{M * M * N * N} quadruples exceed the budget of {budget}")

    m = np.arange(M, 2 * M, dtype=np.float64)
    n = np.arange(N, 2 * N, dtype=np.float64)
    xs = ((m[None, :] / m[:, None]) ** alpha_exp).ravel()
    ys = np.sort(((n[None, :] / n[:, None]) ** beta_exp).ravel())
    lo = np.searchsorted(ys, xs - theta, side="right")
    hi = np.searchsorted(ys, xs + theta, side="left")
    count = int(np.sum(hi - lo))
    bound = M * N * math.log(2 * M * N) + theta * (M * N) ** 2
    return BoundCheckRecord(
        check="quadruples",
        params={"M": M, "N": N, "theta": theta, "alpha": alpha_exp, "beta": beta_exp},
        measured_value=float(count),
        bound_value=bound,
    )


def pair_count(B: IntervalSubset, X: float) -> BoundCheckRecord:
    """Ordered pairs (b, b') in B^2 with |sqrt(b) - sqrt(b')| < 1/(2X).

    The reference bound (1 + 2*sqrt(2N)/X)*|B| holds with constant exactly
    1, so the recorded ratio never exceeds 1.
    """
    if X < 1:
        raise InvalidArgumentError("spacing parameter X must be at least 1")
    if len(B) == 0:
        raise InvalidArgumentError("subset must be nonempty")
    roots = np.sqrt(B.elements.astype(np.float64))
    w = 1.0 / (2.0 * X)
    lo = np.searchsorted(roots, roots - w, side="right")
    hi = np.searchsorted(roots, roots + w, side="left")
    count = int(np.sum(hi - lo))
    bound = (1.0 + 2.0 * math.sqrt(2.0 * B.base_N) / X) * len(B)
    return BoundCheckRecord(
        check="root-pairs",
        params={"N": B.base_N, "size": len(B), "X": X},
        measured_value=float(count),
        bound_value=bound,
    )


def bilinear_sum_check(
    H0: int,
    A: IntervalSubset,
    B: IntervalSubset,
    d: int = 1,
    weights: str = "unit",
    budget: int = TERM_BUDGET,
) -> BoundCheckRecord:
    """|sum over h ~ H0, a, b of e(h sqrt(ab)/d)| against the dispersion bound.

    The dyadic block is h in (H0, 2*H0].  With ``weights="unit"`` all outer
    coefficients are 1; ``weights="adversarial"`` aligns each h-block's
    phase, the worst case the bound must absorb.  Phases are reduced mod 1
    before exponentiation and partial sums accumulate through compensated
    summation in a fixed order.
    """
    if H0 < 1 or d < 1:
        raise InvalidArgumentError("H0 and d must be at least 1")
    if weights not in ("unit", "adversarial"):
        raise InvalidArgumentError("weights must be 'unit' or 'adversarial'")
    if A.base_N != B.base_N:
        raise InvalidArgumentError("both subsets must share the same base N")
    terms = H0 * len(A) * len(B)
    if terms > budget:
        raise BudgetError(f"{terms} terms exceed the budget of {budget}")

    N = A.base_N
    b_arr = B.elements.astype(np.float64)
    block_sums = []
    for h in range(H0 + 1, 2 * H0 + 1):
        res, ims = [], []
        for a in A.elements:
            t = np.sqrt(float(a) * b_arr)
            frac = np.mod(h * t / d, 1.0)
            z = np.exp(2j * math.pi * frac)
            res.append(float(np.sum(z.real)))
            ims.append(float(np.sum(z.imag)))
        block_sums.append(complex(math.fsum(res), math.fsum(ims)))

    if weights == "unit":
        measured = abs(complex(math.fsum(s.real for s in block_sums),
                               math.fsum(s.imag for s in block_sums)))
    else:
        measured = math.fsum(abs(s) for s in block_sums)

    h1 = float(H0)
    bound = (
        N
        * h1
        * (len(A) * len(B)) ** 0.25
        * (1.0 + math.sqrt(d / h1))
        * math.sqrt(math.log(2 * N * h1))
    )
    return BoundCheckRecord(
        check="bilinear",
        params={
            "N": N,
            "H0": H0,
            "size_A": len(A),
            "size_B": len(B),
            "d": d,
            "weights": weights,
        },
        measured_value=measured,
        bound_value=bound,
    )
