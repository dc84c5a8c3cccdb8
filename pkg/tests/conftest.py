import math

import pytest

from nearsq.arith import build_prime_table
from nearsq.sievefn import build_sieve_table


@pytest.fixture(scope="session")
def table_100k():
    return build_prime_table(100_000)


@pytest.fixture(scope="session")
def table_22k():
    # covers factorization of rounded values for experiments up to N = 10^4
    return build_prime_table(22_000)


@pytest.fixture(scope="session")
def sieve_table_10():
    return build_sieve_table(10.0, step=1e-3, tol=1e-6)


def midpoint_rule(fn, a, b, n=10**6):
    """Plain midpoint rule, the independent quadrature oracle."""
    import numpy as np

    h = (b - a) / n
    xs = a + (np.arange(n) + 0.5) * h
    return float(np.sum(fn(xs)) * h)


def exact_window_count(A, B, delta):
    """Independent exact oracle for the near-square pair count.

    Pure python, Fraction-free: decides |sqrt(ab) - l| < num/den by squaring
    with cleared denominators, scanning every integer candidate near sqrt(ab).
    """
    from nearsq.arith import as_fraction

    fr = as_fraction(delta)
    num, den = fr.numerator, fr.denominator
    total = 0
    mult: dict[int, int] = {}
    for a in A.elements:
        for b in B.elements:
            m = int(a) * int(b)
            c = den * den * m
            r = math.isqrt(c)
            for l in range(max((r - num) // den, 0), (r + num) // den + 2):
                dn = den * l - num
                up = den * l + num
                if (dn < 0 or dn * dn < c) and c < up * up:
                    total += 1
                    mult[l] = mult.get(l, 0) + 1
    return total, mult
