"""Explicit thresholds and constants of the almost-prime near-square bounds.

Covers the minimal almost-prime order k for given size exponents, the level
of distribution exponent alpha, the admissible closeness-exponent interval
for each k, the reconstructed lower-bound constant of the plain sieve route,
and the weighted-sieve constant C(delta, k) for k in {4, 5} together with
its independently evaluated unsimplified form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import as_fraction
from .errors import InvalidArgumentError, RegimeError
from .quadrature import gauss_legendre, integrate
from .sievefn import EULER_GAMMA, lower_closed

DISCREPANCY_TOL = 1e-6
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RegimeParams:
    """Size and closeness exponents: |A| ~ N^eta, |B| ~ N^beta, window N^-delta.

    ``eps`` is the explicit slack standing in for every "arbitrarily small"
    margin; it defaults to 0 for pure formula evaluation and should be set
    to a small positive value for regime checks.
    """

    eta: Fraction
    beta: Fraction
    delta: Fraction = Fraction(0)
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("eta", "beta", "delta", "eps"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not 0 < self.eta <= 1 or not 0 < self.beta <= 1:
            raise InvalidArgumentError("size exponents must lie in (0, 1]")
        if not 0 <= self.delta < _HALF:
            raise InvalidArgumentError("closeness exponent delta must lie in [0, 1/2)")
        if self.eps < 0:
            raise InvalidArgumentError("slack eps must be nonnegative")

    @property
    def size_exponent(self) -> Fraction:
        return self.eta + self.beta

    def hypothesis_satisfied(self) -> bool:
        """Size hypothesis eta + beta >= 4(1 + delta)/3 + eps."""
        return self.size_exponent >= Fraction(4, 3) * (1 + self.delta) + self.eps


def _order_denominator(params: RegimeParams) -> Fraction:
    return params.size_exponent / 2 - Fraction(2, 3) - Fraction(2, 3) * params.delta


def k_min(params: RegimeParams) -> int:
    """Minimal almost-prime order floor(2 / ((eta+beta)/2 - 2/3 - 2*delta/3))."""
    d = _order_denominator(params)
    if d <= 0:
        raise RegimeError(
            "size hypothesis fails: (eta+beta)/2 - 2/3 - 2*delta/3 must be positive"
        )
    return math.floor(Fraction(2) / d)


def alpha_level(params: RegimeParams) -> Fraction:
    """Level-of-distribution exponent ((eta+beta)/2 - 2/3 - 2*delta/3)/(eta+beta-delta) - eps."""
    d = _order_denominator(params)
    scale = params.size_exponent - params.delta
    if scale <= 0:
        raise RegimeError("eta + beta - delta must be positive")
    alpha = d / scale - params.eps
    if alpha <= 0:
        raise RegimeError("level exponent is nonpositive in this regime")
    return alpha


@dataclass(frozen=True)
class DeltaRange:
    """Half-open admissible interval for the closeness exponent, clipped to (0, 1/2).

    ``raw_lo``/``raw_hi`` keep the unclipped bounds; consecutive orders tile
    the raw axis exactly (raw_hi of order k equals raw_lo of order k+1).
    """

    lo: Fraction
    hi: Fraction
    lo_inclusive: bool
    raw_lo: Fraction
    raw_hi: Fraction

    @property
    def is_empty(self) -> bool:
        return self.hi <= self.lo  # half-open on the right

    def contains(self, delta) -> bool:
        delta = as_fraction(delta)
        if self.is_empty:
            return False
        if delta < self.lo or (delta == self.lo and not self.lo_inclusive):
            return False
        return delta < self.hi


def delta_range(k: int, eta, beta) -> DeltaRange:
    """Admissible delta interval [3(eta+beta)/4 - 1 - 3/k, same - 3/(k+1)) for order k."""
    if k < 1:
        raise InvalidArgumentError("order k must be at least 1")
    eta, beta = as_fraction(eta), as_fraction(beta)
    base = Fraction(3, 4) * (eta + beta) - 1
    raw_lo = base - Fraction(3, k)
    raw_hi = base - Fraction(3, k + 1)
    return DeltaRange(
        lo=max(raw_lo, Fraction(0)),
        hi=min(raw_hi, _HALF),
        lo_inclusive=raw_lo > 0,
        raw_lo=raw_lo,
        raw_hi=raw_hi,
    )


@dataclass(frozen=True)
class ConstantReport:
    """Lower-bound constant 2(k+1) e^{-gamma} f(alpha (k+1)(eta+beta-delta)).

    ``reconstructed`` records that the closed expression is assembled from
    the sieve lower bound and the normalization X = 2 Delta |A||B|, not
    stated directly anywhere.
    """

    k: int
    alpha: float
    sieve_argument: float
    f_at_argument: float
    constant_value: float
    quadrature_error: float
    reconstructed: bool = True


def sieve_lower_constant(params: RegimeParams) -> ConstantReport:
    """Leading constant of the plain-sieve lower bound for the almost-prime count."""
    k = k_min(params)
    alpha = alpha_level(params)
    argument = alpha * (k + 1) * (params.size_exponent - params.delta)
    if argument <= 2:
        raise RegimeError(
            f"sieve argument {float(argument):.6g} is not above 2; lower density vanishes"
        )
    arg_f = float(argument)
    f_val = lower_closed(arg_f)
    quad_err = 0.0 if arg_f <= 4.0 else 1e-10  # elementary branch below 4
    constant = 2.0 * (k + 1) * math.exp(-EULER_GAMMA) * f_val
    return ConstantReport(
        k=k,
        alpha=float(alpha),
        sieve_argument=arg_f,
        f_at_argument=f_val,
        constant_value=constant,
        quadrature_error=quad_err,
    )


@dataclass(frozen=True)
class WeightedConstantReport:
    """Weighted-sieve constant C(delta, k), printed form and unsimplified form.

    ``value`` evaluates the single-integral closed formula;
    ``value_unsimplified`` re-derives the same quantity through the double
    integrals it came from.  When the two disagree beyond DISCREPANCY_TOL
    the unsimplified value is authoritative.
    """

    delta: float
    k: int
    value: float
    value_unsimplified: float
    discrepancy: float
    quad_error: float

    @property
    def flagged(self) -> bool:
        return abs(self.discrepancy) > DISCREPANCY_TOL


def _quad(fn, a, b, tol, rule):
    if rule == "adaptive-simpson":
        res = integrate(fn, a, b, tol=tol, endpoint_shift=1e-12)
        return res.value, res.error_estimate
    if rule == "gauss-legendre-64":
        return gauss_legendre(fn, a, b, nodes=64), 0.0
    raise InvalidArgumentError(f"unknown quadrature rule {rule!r}")


def _check_weighted_regime(delta: float, k: int, orders=(4, 5)) -> None:
    if k not in orders:
        raise InvalidArgumentError(f"order k must be one of {sorted(orders)}, got {k}")
    if not 0.0 < delta < 0.1:
        raise RegimeError("closeness exponent delta must lie in (0, 1/10)")


def weighted_sieve_budget(
    delta: float, k: int, tol: float = 1e-9, rule: str = "adaptive-simpson"
) -> tuple[float, float]:
    """Lower-term and upper-term coefficients of the weighted sum bound.

    Returns (lower_coeff, upper_coeff) with C(delta, k) = lower_coeff -
    upper_coeff / 2.  The upper coefficient integrates the upper density
    over the mid-range prime scale and is evaluated from its double-integral
    form; at k = 15 the prime range is empty and it vanishes.
    """
    if not 4 <= k <= 15:
        raise InvalidArgumentError("upper-term coefficient is defined for 4 <= k <= 15")
    if not 0.0 < delta < 0.1:
        raise RegimeError("closeness exponent delta must lie in (0, 1/10)")
    c = 5.0 - 10.0 * delta
    top = 4.0 - 10.0 * delta
    s_hi = 3.0 - 10.0 * delta
    pref = 6.0 / (1.0 - 2.0 * delta)

    def g(s):
        return math.log(s - 1.0) / s

    def inner(t):
        return integrate(g, 2.0, t - 1.0, tol=tol * 1e-2).value

    j1, _ = _quad(lambda s: g(s) * math.log(top / (s + 1.0)), 2.0, s_hi, tol, rule)
    lower = pref * (math.log(top) + j1)

    t_lo = c - 15.0 / k
    u1, _ = _quad(lambda t: 1.0 / (t * (c - t)), t_lo, top, tol, rule)
    u2, _ = _quad(lambda t: inner(t) / (t * (c - t)), max(3.0, t_lo), top, tol, rule)
    upper = 30.0 * (u1 + u2)
    return lower, upper


def weighted_sieve_constant(
    delta: float, k: int, tol: float = 1e-9, rule: str = "adaptive-simpson"
) -> WeightedConstantReport:
    """C(delta, k) for k in {4, 5} and 0 < delta < 1/10, both printed and re-derived."""
    _check_weighted_regime(delta, k)
    c = 5.0 - 10.0 * delta
    top = 4.0 - 10.0 * delta
    s_hi = 3.0 - 10.0 * delta
    pref = 6.0 / (1.0 - 2.0 * delta)
    ratio = top / (c - 15.0 / k) * (15.0 / k)

    def g(s):
        return math.log(s - 1.0) / s

    j1, e1 = _quad(lambda s: g(s) * math.log(top / (s + 1.0)), 2.0, s_hi, tol, rule)
    j2, e2 = _quad(
        lambda s: g(s) * math.log(top * c / (s + 1.0) - 1.0), 2.0, s_hi, tol, rule
    )
    value = pref * (math.log(top) + j1 - 0.5 * math.log(ratio) - 0.5 * j2)

    # independent route: the lower term through its nested double integral,
    # the upper term through weighted_sieve_budget's double-integral form
    def inner(t):
        return integrate(g, 2.0, t - 1.0, tol=tol * 1e-2).value

    d1, e3 = _quad(lambda t: inner(t) / t, 3.0, top, tol, rule)
    lower_unsimplified = pref * (math.log(top) + d1)
    _, upper = weighted_sieve_budget(delta, k, tol=tol, rule=rule)
    value_unsimplified = lower_unsimplified - 0.5 * upper

    return WeightedConstantReport(
        delta=float(delta),
        k=k,
        value=value,
        value_unsimplified=value_unsimplified,
        discrepancy=value_unsimplified - value,
        quad_error=e1 + e2 + e3,
    )
