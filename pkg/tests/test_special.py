"""Special-function layer, cross-checked against scipy."""

import math

import pytest
import scipy.special as sps
import scipy.stats as st
from hypothesis import given, settings
from hypothesis import strategies as hs

from crossvar.special import (
    beta_fn,
    f_cdf,
    gen_binom,
    log_abs_gen_binom,
    log_gamma,
    reg_inc_beta,
    student_t_cdf,
    student_t_quantile,
)


class TestLogGamma:
    def test_matches_math_lgamma(self):
        for x in (0.5, 1.0, 2.5, 10.0, 171.5):
            assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-14)

    def test_rejects_nonpositive(self):
        for x in (0.0, -1.0):
            with pytest.raises(ValueError):
                log_gamma(x)

    @given(hs.floats(min_value=1e-6, max_value=49.0))
    @settings(deadline=None)
    def test_recursion(self, x):
        # Gamma(x+1) = x Gamma(x), in log form.
        assert log_gamma(x + 1.0) == pytest.approx(
            log_gamma(x) + math.log(x), rel=1e-10, abs=1e-10
        )


class TestBeta:
    def test_matches_scipy(self):
        for a, b in [(0.5, 1.0), (2.0, 3.0), (7.5, 0.5), (24.0, 0.5)]:
            assert beta_fn(a, b) == pytest.approx(sps.beta(a, b), rel=1e-12)


class TestRegIncBeta:
    def test_matches_scipy_grid(self):
        for a in (0.5, 1.0, 2.0, 7.0, 24.5):
            for b in (0.5, 1.0, 3.5, 12.0):
                for x in (0.001, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999):
                    assert abs(reg_inc_beta(x, a, b) - sps.betainc(a, b, x)) <= 1e-12

    def test_edges(self):
        assert reg_inc_beta(0.0, 2.0, 3.0) == 0.0
        assert reg_inc_beta(1.0, 2.0, 3.0) == 1.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            reg_inc_beta(-0.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            reg_inc_beta(1.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            reg_inc_beta(0.5, 0.0, 1.0)

    @given(
        hs.floats(min_value=1e-3, max_value=1.0 - 1e-3),
        hs.floats(min_value=0.05, max_value=40.0),
        hs.floats(min_value=0.05, max_value=40.0),
    )
    @settings(deadline=None)
    def test_symmetry(self, x, a, b):
        # I_x(a, b) + I_{1-x}(b, a) = 1
        assert reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) == pytest.approx(
            1.0, abs=1e-12
        )


class TestGenBinom:
    def test_examples(self):
        assert gen_binom(2.5, 2) == pytest.approx(1.875, rel=1e-14)
        # (-1.5)(-2.5)(-3.5)/3! = -2.1875
        assert gen_binom(-1.5, 3) == pytest.approx(-2.1875, rel=1e-14)

    def test_empty_product(self):
        assert gen_binom(3.7, 0) == 1.0

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            gen_binom(2.0, -1)

    def test_integer_agreement(self):
        for r in (5, 12, 30):
            for k in range(r + 1):
                exact = math.comb(r, k)
                assert gen_binom(float(r), k) == pytest.approx(exact, rel=1e-13)

    def test_zero_when_integer_r_below_k(self):
        assert gen_binom(3.0, 5) == 0.0

    @given(
        hs.floats(min_value=-20.0, max_value=20.0),
        hs.integers(min_value=1, max_value=25),
    )
    @settings(deadline=None)
    def test_pascal_recurrence(self, r, k):
        lhs = gen_binom(r, k)
        rhs = gen_binom(r - 1.0, k) + gen_binom(r - 1.0, k - 1)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)

    def test_log_form_consistent(self):
        for r, k in [(2.5, 2), (-1.5, 3), (24.5, 17), (0.5, 40)]:
            lmag, sign = log_abs_gen_binom(r, k)
            val = gen_binom(r, k)
            assert sign * math.exp(lmag) == pytest.approx(val, rel=1e-11)


class TestStudentT:
    def test_examples(self):
        assert student_t_cdf(1.0, 1) == pytest.approx(0.75, abs=1e-12)
        assert student_t_cdf(1.812, 10) == pytest.approx(0.95, abs=5e-4)

    def test_matches_scipy(self):
        for df in (1, 2, 5, 14, 48, 998):
            for x in (-3.2, -1.0, 0.0, 0.5, 2.7):
                assert abs(student_t_cdf(x, df) - st.t.cdf(x, df)) <= 1e-12

    def test_normal_limit(self):
        for x in (-2.0, -1.0, 0.0, 1.0, 2.0):
            assert abs(student_t_cdf(x, 1_000_000) - st.norm.cdf(x)) <= 1e-4

    def test_quantile_roundtrip(self):
        for df in (2, 10, 48):
            for p in (0.01, 0.25, 0.5, 0.9, 0.999):
                x = student_t_quantile(p, df)
                assert student_t_cdf(x, df) == pytest.approx(p, abs=1e-12)


class TestFCdf:
    def test_example(self):
        assert f_cdf(4.0, 9, 9) == pytest.approx(0.974, abs=5e-4)

    def test_matches_scipy(self):
        for d1, d2 in [(1, 1), (3, 9), (9, 3), (19, 19), (4, 48)]:
            for x in (0.1, 0.7, 1.0, 2.5, 10.0):
                assert abs(f_cdf(x, d1, d2) - st.f.cdf(x, d1, d2)) <= 1e-12
