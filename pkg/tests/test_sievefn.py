import math
from fractions import Fraction

import numpy as np
import pytest

from nearsq.arith import build_prime_table
from nearsq.errors import AccuracyError, CoverageError, InvalidArgumentError, RangeError
from nearsq.sievefn import (
    EULER_GAMMA,
    EXP_GAMMA,
    build_sieve_table,
    lower_closed,
    mertens_product,
    upper_closed,
)

from conftest import midpoint_rule


class TestClosedForms:
    def test_upper_at_2(self):
        assert upper_closed(2.0) == pytest.approx(EXP_GAMMA, abs=1e-12)

    def test_upper_at_3_branch_agreement(self):
        # elementary branch just below 3, integral branch just above
        below = upper_closed(3.0 - 1e-9)
        above = upper_closed(3.0 + 1e-9)
        assert abs(below - above) <= 1e-6
        assert upper_closed(3.0) == pytest.approx(2 * EXP_GAMMA / 3, abs=1e-12)

    def test_upper_at_4_against_midpoint_oracle(self):
        oracle = midpoint_rule(lambda t: np.log(t - 1.0) / t, 2.0, 3.0, n=10**6)
        assert upper_closed(4.0) == pytest.approx(EXP_GAMMA / 2 * (1 + oracle), abs=1e-6)

    def test_upper_range_errors(self):
        for bad in (0.0, -1.0, 5.1):
            with pytest.raises(RangeError):
                upper_closed(bad)

    def test_lower_zero_region(self):
        assert lower_closed(1.0) == 0.0
        assert lower_closed(2.0) == 0.0

    def test_lower_at_3_against_rk4_oracle(self):
        # independent oracle: classical RK4 on y' = 2 e^gamma/(u-1), y(2) = 0,
        # where y = u * lower(u)
        h = 1e-3

        def rhs(u):
            return 2 * EXP_GAMMA / (u - 1.0)

        y, u = 0.0, 2.0
        for _ in range(1000):
            k1 = rhs(u)
            k2 = rhs(u + h / 2)
            k4 = rhs(u + h)
            y += h / 6 * (k1 + 4 * k2 + k4)
            u += h
        assert lower_closed(3.0) == pytest.approx(y / 3.0, abs=1e-9)
        assert lower_closed(3.0) == pytest.approx(2 * EXP_GAMMA * math.log(2) / 3, abs=1e-12)

    def test_lower_at_4_branch_agreement(self):
        below = lower_closed(4.0 - 1e-9)
        above = lower_closed(4.0 + 1e-9)
        assert abs(below - above) <= 1e-6
        assert lower_closed(4.0) == pytest.approx(EXP_GAMMA / 2 * math.log(3), abs=1e-12)

    def test_lower_continuous_at_2(self):
        assert lower_closed(2.0 + 1e-9) == pytest.approx(0.0, abs=1e-8)

    def test_lower_range_error(self):
        with pytest.raises(RangeError):
            lower_closed(6.5)


class TestTable:
    def test_overlap_consistency(self, sieve_table_10):
        t = sieve_table_10
        i5 = round(3.0 / t.grid_step)
        i6 = round(4.0 / t.grid_step)
        assert t.upper_values[i5] == pytest.approx(upper_closed(5.0), abs=1e-9)
        assert t.lower_values[i6] == pytest.approx(lower_closed(6.0), abs=1e-6)

    def test_closed_region_query(self, sieve_table_10):
        assert sieve_table_10.upper(2.5) == pytest.approx(2 * EXP_GAMMA / 2.5, abs=1e-12)

    def test_minimal_horizon_build(self):
        table = build_sieve_table(6.0, step=1e-3, tol=1e-6)
        i5 = round(3.0 / table.grid_step)
        assert table.upper_values[i5] == pytest.approx(upper_closed(5.0), abs=1e-9)
        assert table.lower_values[-1] == pytest.approx(lower_closed(6.0), abs=1e-6)

    def test_limits_at_10(self, sieve_table_10):
        assert abs(sieve_table_10.upper_values[-1] - 1.0) < 1e-3
        assert abs(sieve_table_10.lower_values[-1] - 1.0) < 1e-3

    def test_monotonicity_and_gap(self, sieve_table_10):
        up = sieve_table_10.upper_values
        lo = sieve_table_10.lower_values
        assert np.all(np.diff(up) < 0)
        assert np.all(np.diff(lo) >= 0)
        assert np.all(up - lo > 0)

    def test_limit_deviation_shrinks_from_8_to_12(self):
        table = build_sieve_table(12.0, step=1e-3, tol=1e-6)
        devs = []
        for u in (8.0, 10.0, 12.0):
            i = round((u - 2.0) / table.grid_step)
            devs.append(
                max(abs(table.upper_values[i] - 1.0), abs(table.lower_values[i] - 1.0))
            )
        assert devs[0] > devs[1] > devs[2]

    def test_interpolation_consistent_across_steps(self):
        t1 = build_sieve_table(8.0, step=1e-3, tol=1e-6)
        t2 = build_sieve_table(8.0, step=2e-3, tol=1e-6)
        for u in (5.5, 6.283, 7.123):
            assert t1.upper(u) == pytest.approx(t2.upper(u), abs=1e-6)
            assert t1.lower(u) == pytest.approx(t2.lower(u), abs=1e-6)

    def test_step_too_coarse(self):
        with pytest.raises(AccuracyError):
            build_sieve_table(10.0, step=0.01, tol=1e-9)
        with pytest.raises(AccuracyError):
            # non-grid-aligned delay falls back to 2nd order marching
            build_sieve_table(10.0, step=0.003, tol=1e-6)

    def test_validation_errors(self):
        with pytest.raises(InvalidArgumentError):
            build_sieve_table(5.0)
        with pytest.raises(InvalidArgumentError):
            build_sieve_table(10.0, step=0.02)

    def test_csv_dump(self, sieve_table_10, tmp_path):
        path = tmp_path / "table.csv"
        sieve_table_10.dump_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "u,F,f"
        assert len(lines) == len(sieve_table_10.upper_values) + 1


class TestMertens:
    def test_empty_product(self, table_100k):
        assert mertens_product(2.0, table_100k).exact == 1

    def test_single_factor(self, table_100k):
        assert mertens_product(3.0, table_100k).exact == Fraction(1, 2)

    def test_z10_against_direct_product(self, table_100k):
        m = mertens_product(10.0, table_100k)
        direct = Fraction(1, 1)
        for p in (2, 3, 5, 7):
            direct *= Fraction(p - 1, p)
        assert m.exact == direct == Fraction(8, 35)
        assert m.value == pytest.approx(8 / 35)

    def test_coverage_error(self):
        table = build_prime_table(50)
        with pytest.raises(CoverageError):
            mertens_product(1000.0, table)

    def test_invalid_z(self, table_100k):
        with pytest.raises(InvalidArgumentError):
            mertens_product(1.5, table_100k)

    def test_asymptotic_convergence(self, table_100k):
        devs = []
        for z in (10**3, 10**4, 10**5):
            m = mertens_product(float(z), table_100k)
            assert 0.8 <= m.ratio <= 1.2
            devs.append(abs(m.ratio - 1.0))
        assert devs[0] > devs[1] > devs[2]
