import math

import pytest

from nearsq.errors import AccuracyError, InvalidArgumentError
from nearsq.quadrature import gauss_legendre, integrate

from conftest import midpoint_rule


def test_linear_exact():
    res = integrate(lambda t: t, 0.0, 1.0, tol=1e-9)
    assert res.value == pytest.approx(0.5, abs=1e-12)
    assert res.error_estimate <= 1e-9


def test_empty_interval():
    res = integrate(lambda t: 1.0 / t, 2.0, 2.0)
    assert (res.value, res.error_estimate, res.subdivisions) == (0.0, 0.0, 0)


def test_reversed_bounds_rejected():
    with pytest.raises(InvalidArgumentError):
        integrate(lambda t: t, 1.0, 0.0)


def test_log_ratio_against_midpoint_oracle():
    import numpy as np

    def fn(t):
        return math.log(t - 1.0) / t

    def fn_vec(t):
        return np.log(t - 1.0) / t

    res = integrate(fn, 2.0, 3.0, tol=1e-9)
    oracle = midpoint_rule(fn_vec, 2.0, 3.0, n=10**6)
    assert res.value == pytest.approx(oracle, abs=1e-6)
    assert res.error_estimate <= 1e-9


def test_oscillatory_accuracy():
    res = integrate(math.sin, 0.0, 2 * math.pi, tol=1e-10)
    assert res.value == pytest.approx(0.0, abs=1e-9)


def test_subdivision_budget_error():
    with pytest.raises(AccuracyError):
        integrate(lambda t: math.sin(1.0 / (t + 1e-12)), 0.0, 1.0, tol=1e-14, max_intervals=8)


def test_gauss_legendre_matches_adaptive():
    def fn(t):
        return math.exp(-t) * math.cos(3 * t)

    adaptive = integrate(fn, 0.0, 2.0, tol=1e-11).value
    gauss = gauss_legendre(fn, 0.0, 2.0, nodes=64)
    assert gauss == pytest.approx(adaptive, abs=1e-10)


def test_gauss_legendre_empty():
    assert gauss_legendre(lambda t: t, 1.0, 1.0) == 0.0
