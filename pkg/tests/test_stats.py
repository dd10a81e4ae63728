"""Sample statistics: summaries, cross-variance, T, T*, J."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from crossvar.datasets import get_dataset
from crossvar.stats import (
    DegenerateSampleError,
    NPolicy,
    Sample,
    cross_variance,
    effective_n,
    statistic_J,
    statistic_T,
    statistic_Tstar,
    summarize,
)

finite_floats = hs.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
samples = hs.lists(finite_floats, min_size=2, max_size=12).map(Sample)


class TestSample:
    def test_requires_two_values(self):
        with pytest.raises(ValueError):
            Sample([1.0])

    def test_requires_finite(self):
        with pytest.raises(ValueError):
            Sample([1.0, math.nan])
        with pytest.raises(ValueError):
            Sample([1.0, math.inf])

    def test_n(self):
        assert Sample([1, 2, 3]).n == 3


class TestSummarize:
    def test_ds1_moments(self):
        x, y = get_dataset("ds1")
        mx, my = summarize(x), summarize(y)
        assert mx.mean == pytest.approx(5.0, abs=1e-12)
        assert mx.variance == pytest.approx(32.0 / 7.0, rel=1e-12)
        assert my.mean == pytest.approx(4.0, abs=1e-12)
        assert my.variance == pytest.approx(46.0 / 7.0, rel=1e-12)

    @given(samples)
    @settings(deadline=None)
    def test_matches_numpy(self, s):
        m = summarize(s)
        assert m.mean == pytest.approx(np.mean(s.values), rel=1e-9, abs=1e-9)
        assert m.variance == pytest.approx(
            np.var(s.values, ddof=1), rel=1e-9, abs=1e-9
        )


class TestCrossVariance:
    def test_ds1_anchor(self):
        x, _ = get_dataset("ds1")
        # deviations taken around the other group's mean 4.0
        assert cross_variance(x, 4.0) == pytest.approx(40.0 / 7.0, rel=1e-12)

    @given(samples)
    @settings(deadline=None)
    def test_reduces_to_variance_at_own_mean(self, s):
        m = summarize(s)
        assert cross_variance(s, m.mean) == pytest.approx(
            m.variance, rel=1e-10, abs=1e-10
        )

    @given(samples, finite_floats)
    @settings(deadline=None)
    def test_decomposition(self, s, other_mean):
        # V*(m) = V + n (xbar - m)^2 / (n - 1)
        m = summarize(s)
        expected = m.variance + s.n * (m.mean - other_mean) ** 2 / (s.n - 1)
        assert cross_variance(s, other_mean) == pytest.approx(
            expected, rel=1e-9, abs=1e-6
        )


class TestStatisticT:
    def test_ds1_breakdown(self):
        x, y = get_dataset("ds1")
        bd = statistic_T(x, y)
        # exact fractions: z1 = (32/7)/(80/7), z2 = (46/7)/(108/7)
        assert bd.z1 == pytest.approx(0.4, abs=1e-12)
        assert bd.z2 == pytest.approx(float(Fraction(23, 54)), abs=1e-12)
        assert bd.t == pytest.approx(0.4 + 23.0 / 54.0, abs=1e-12)
        assert bd.vx == pytest.approx(32.0 / 7.0, rel=1e-12)
        assert bd.vx_star == pytest.approx(40.0 / 7.0, rel=1e-12)

    @given(samples, samples)
    @settings(deadline=None)
    def test_component_identity(self, x, y):
        try:
            bd = statistic_T(x, y)
        except DegenerateSampleError:
            return
        assert bd.z1 == pytest.approx(bd.vx / (2.0 * bd.vx_star), rel=1e-10, abs=1e-12)
        assert bd.z2 == pytest.approx(bd.vy / (2.0 * bd.vy_star), rel=1e-10, abs=1e-12)
        assert bd.t == pytest.approx(bd.z1 + bd.z2, rel=1e-10, abs=1e-12)
        assert 0.0 <= bd.t <= 1.0 + 1e-12

    def test_equal_means_gives_one(self):
        x = Sample([1.0, 2.0, 3.0])
        y = Sample([1.5, 2.0, 2.5])
        bd = statistic_T(x, y)
        assert bd.t == pytest.approx(1.0, abs=1e-12)

    def test_zero_variance_different_means(self):
        bd = statistic_T(Sample([2.0, 2.0]), Sample([5.0, 5.0]))
        assert bd.t == 0.0

    def test_zero_variance_equal_means_error(self):
        with pytest.raises(DegenerateSampleError):
            statistic_T(Sample([2.0, 2.0]), Sample([2.0, 2.0]))


class TestStatisticTstar:
    def test_ds1_anchor(self):
        x, y = get_dataset("ds1")
        assert statistic_Tstar(x, y) == pytest.approx(39.0 / 47.0, rel=1e-12)

    def test_ds4_policies(self):
        x, y = get_dataset("ds4")
        for policy, expected in [
            (NPolicy.MIN, 0.135243),
            (NPolicy.MAX, 0.148045),
            (NPolicy.AVERAGE, 0.142970),
        ]:
            assert statistic_Tstar(x, y, policy) == pytest.approx(expected, abs=5e-7)

    def test_unequal_sizes_need_policy(self):
        x, y = get_dataset("ds4")
        with pytest.raises(ValueError):
            statistic_Tstar(x, y)

    def test_zero_pooled_variance_cases(self):
        assert statistic_Tstar(Sample([2.0, 2.0]), Sample([5.0, 5.0])) == 0.0
        with pytest.raises(DegenerateSampleError):
            statistic_Tstar(Sample([2.0, 2.0]), Sample([2.0, 2.0]))

    @given(samples, finite_floats)
    @settings(deadline=None)
    def test_shift_invariance(self, x, c):
        y = Sample([v + 1.0 for v in x.values])
        shifted_x = Sample([v + c for v in x.values])
        shifted_y = Sample([v + c for v in y.values])
        assert statistic_Tstar(shifted_x, shifted_y) == pytest.approx(
            statistic_Tstar(x, y), rel=1e-6, abs=1e-9
        )

    @given(samples, samples)
    @settings(deadline=None)
    def test_exchange_symmetry(self, x, y):
        if x.n != y.n:
            return
        try:
            a = statistic_Tstar(x, y)
        except DegenerateSampleError:
            return
        assert statistic_Tstar(y, x) == pytest.approx(a, rel=1e-12, abs=1e-15)


class TestStatisticJ:
    def test_ds1_bridge(self):
        # J^2 = 2 t_pooled^2 for equal sizes
        x, y = get_dataset("ds1")
        tstar = statistic_Tstar(x, y)
        j = statistic_J(tstar, 8.0)
        mx, my = summarize(x), summarize(y)
        sp2 = 0.5 * (mx.variance + my.variance)
        t_pooled = (mx.mean - my.mean) / math.sqrt(sp2 * 2.0 / 8.0)
        assert j * j == pytest.approx(2.0 * t_pooled * t_pooled, rel=1e-10)

    def test_ds4_policy_values(self):
        for policy, expected_j, n_eff in [
            ("min", 4.3798, 4.0),
            ("max", 5.3641, 6.0),
            ("avg", 4.8967, 5.0),
        ]:
            x, y = get_dataset("ds4")
            tstar = statistic_Tstar(x, y, NPolicy(policy))
            assert statistic_J(tstar, n_eff) == pytest.approx(expected_j, abs=5e-5)

    def test_domain(self):
        with pytest.raises(ValueError):
            statistic_J(0.0, 5.0)
        with pytest.raises(ValueError):
            statistic_J(1.5, 5.0)
        assert statistic_J(1.0, 5.0) == 0.0


class TestEffectiveN:
    def test_policies(self):
        assert effective_n(6, 4, NPolicy.MIN) == 4.0
        assert effective_n(6, 4, NPolicy.MAX) == 6.0
        assert effective_n(6, 4, NPolicy.AVERAGE) == 5.0
        assert effective_n(4, 6, NPolicy.AVERAGE) == 5.0
        assert effective_n(7, 4, NPolicy.AVERAGE) == 5.5

    def test_equal_sizes_ignore_policy(self):
        assert effective_n(8, 8, None) == 8.0
        assert effective_n(8, 8, NPolicy.MIN) == 8.0

    def test_unequal_without_policy(self):
        with pytest.raises(ValueError, match="6, 4"):
            effective_n(6, 4, None)
