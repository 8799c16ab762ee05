import itertools
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from domlab.analytics import (
    DENSE_CLOSED_FORM,
    SPARSE_SEARCH,
    VERY_DENSE,
    chebyshev_nonexistence_bound,
    critical_r_hat,
    crucial_edge_law,
    deletion_probability,
    dense_r_hat,
    log1mexp,
    log_binom,
    log_expectation_ratio,
    log_expected_dominating_sets,
    log_second_moment_bound,
    log_variance_term,
    predicted_interval,
    survival_probability,
    talagrand_tail_product_bound,
)
from domlab.errors import DomainError

from conftest import all_graphs, exhaustive_moments

mpmath.mp.dps = 50


def mp_log_E(n, p, r):
    p = mpmath.mpf(p)
    if r == n:
        return mpmath.mpf(0)
    return mpmath.log(mpmath.binomial(n, r)) + (n - r) * mpmath.log(1 - (1 - p) ** r)


def mp_r_hat(n, p):
    threshold = -mpmath.log(n * mpmath.mpf(p))
    for r in range(1, n + 1):
        if mp_log_E(n, p, r) >= threshold:
            return r - 1


def mp_variance_term(n, p, r, s):
    p = mpmath.mpf(p)
    base = 1 - 2 * (1 - p) ** r + (1 - p) ** (2 * r - s)
    return mpmath.binomial(r, s) * mpmath.binomial(n - r, r - s) * base ** (n - 2 * r + s)


class TestPrimitives:
    def test_log1mexp(self):
        for a in [-1e-20, -1e-5, -0.5, -0.7, -1, -30, -800]:
            assert log1mexp(a) == pytest.approx(float(mpmath.log(1 - mpmath.exp(a))), rel=1e-13)
        assert log1mexp(0.0) == -math.inf
        with pytest.raises(DomainError):
            log1mexp(0.1)

    def test_log_binom(self):
        assert log_binom(10, 3) == pytest.approx(math.log(120))
        assert log_binom(3, 5) == -math.inf


class TestExpectation:
    def test_examples(self):
        assert log_expected_dominating_sets(10, 0.5, 10) == 0.0
        assert log_expected_dominating_sets(4, 0.5, 0) == -math.inf
        assert log_expected_dominating_sets(4, 0.5, 1) == pytest.approx(math.log(0.5), abs=1e-12)

    def test_n4_exhaustive(self):
        for p in (0.25, 0.5, 0.75):
            for r in range(5):
                exact = exhaustive_moments(4, p, r)[0]
                got = math.exp(log_expected_dominating_sets(4, p, r))
                if exact == 0:
                    assert got == 0
                else:
                    assert abs(got - exact) <= 1e-10 * exact

    def test_n5_exhaustive(self):
        for p in (0.3, 0.6):
            for r in range(6):
                exact = exhaustive_moments(5, p, r)[0]
                got = math.exp(log_expected_dominating_sets(5, p, r))
                assert got == pytest.approx(exact, rel=1e-10, abs=1e-300)

    def test_p_one_rejected(self):
        with pytest.raises(DomainError, match="undefined"):
            log_expected_dominating_sets(5, 1.0, 2)

    @pytest.mark.parametrize("n,r", [(5, 6), (5, -1), (-1, 0)])
    def test_size_range(self, n, r):
        with pytest.raises(DomainError):
            log_expected_dominating_sets(n, 0.5, r)

    def test_no_underflow_at_large_n(self):
        value = log_expected_dominating_sets(10**6, 0.001, 5000)
        assert math.isfinite(value)
        assert value == pytest.approx(float(mp_log_E(10**6, 0.001, 5000)), rel=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(1, 400), p=st.floats(1e-4, 0.999), data=st.data())
    def test_matches_mpmath(self, n, p, data):
        r = data.draw(st.integers(1, n))
        got = log_expected_dominating_sets(n, p, r)
        want = float(mp_log_E(n, p, r))
        assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


class TestCriticalSize:
    def test_small_example(self):
        assert critical_r_hat(10, 0.5) == 1
        assert math.exp(log_expected_dominating_sets(10, 0.5, 1)) == pytest.approx(0.01953125, abs=1e-9)
        assert math.exp(log_expected_dominating_sets(10, 0.5, 2)) == pytest.approx(45 * 0.75**8, abs=1e-9)
        assert 45 * 0.75**8 == pytest.approx(4.50508, abs=1e-5)

    @pytest.mark.parametrize("n,p", [(1000, 0.2), (200, 0.5), (50000, 0.001), (5000, 0.01), (100, 0.9)])
    def test_against_mpmath_scan(self, n, p):
        assert critical_r_hat(n, p) == mp_r_hat(n, p)

    def test_frozen_values(self):
        assert critical_r_hat(1000, 0.2) == 12
        assert critical_r_hat(200, 0.5) == 3
        assert critical_r_hat(50000, 0.001) == 1875

    @pytest.mark.parametrize("n,p", [(10, 0.1), (100, 0.01), (10, 0.0), (10, 1.0)])
    def test_rejected(self, n, p):
        with pytest.raises(DomainError):
            critical_r_hat(n, p)

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(3, 3000), p=st.floats(1e-3, 0.995))
    def test_definition_consistency(self, n, p):
        assume(n * p > 1)
        r = critical_r_hat(n, p)
        threshold = -math.log(n * p)
        assert log_expected_dominating_sets(n, p, r) < threshold
        assert log_expected_dominating_sets(n, p, r + 1) >= threshold


class TestDenseClosedForm:
    def test_examples(self):
        assert dense_r_hat(10**6, 0.99) == pytest.approx(2.19126, abs=1e-5)
        n = math.exp(math.e)
        assert dense_r_hat(n, -math.expm1(-math.e)) == pytest.approx((math.e - 1) / math.e, abs=1e-12)

    @pytest.mark.parametrize("n,p", [(100, 0.3), (10, 0.95), (2, 0.9), (100, 1.0)])
    def test_rejected(self, n, p):
        with pytest.raises(DomainError):
            dense_r_hat(n, p)

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(3, 10**7), p=st.floats(1 - 1 / math.e, 0.9999))
    def test_at_most_log_n(self, n, p):
        try:
            value = dense_r_hat(n, p)
        except DomainError:
            return
        assert 0 < value <= math.log(n)


class TestPrediction:
    def test_small(self):
        pred = predicted_interval(10, 0.5)
        assert pred.r_hat == 1 and pred.interval == (2, 3)
        assert pred.regime == SPARSE_SEARCH

    def test_desk_scale(self):
        pred = predicted_interval(200, 0.5)
        assert pred.interval == (4, 5)
        assert pred.log_threshold == pytest.approx(-math.log(100))

    def test_dense_regime_carries_closed_form(self):
        pred = predicted_interval(10**4, 0.9)
        assert pred.regime == DENSE_CLOSED_FORM
        assert pred.dense_r_hat == pytest.approx(dense_r_hat(10**4, 0.9))
        assert pred.r_hat_source == "search"

    @pytest.mark.parametrize("n", [500, 1000, 37])
    def test_very_dense_boundary(self, n):
        pred = predicted_interval(n, 1 - 1 / n)
        assert pred.regime == VERY_DENSE and pred.interval == (1, 2)

    @pytest.mark.parametrize("n,p", [(10, 1.0), (10, 0.0), (2, 0.5), (10, float("nan"))])
    def test_rejected(self, n, p):
        with pytest.raises(DomainError):
            predicted_interval(n, p)

    def test_dict_is_json_ready(self):
        d = predicted_interval(200, 0.5).to_dict()
        assert d["interval"] == [4, 5] and d["r_hat"] == 3


class TestExpectationRatio:
    def test_zero_step(self):
        assert log_expectation_ratio(50, 0.3, 4, 0).log_ratio == 0.0

    def test_example(self):
        jump = log_expectation_ratio(10, 0.5, 1, 1)
        assert jump.log_ratio == pytest.approx(5.4409, abs=1e-4)
        assert jump.asymptotic == pytest.approx(math.log(5) ** 2)

    def test_both_zero_rejected(self):
        with pytest.raises(DomainError):
            log_expectation_ratio(10, 0.0, 1, 1)

    def test_positive_on_grid(self):
        # E(X_r) is increasing up to the crossing
        for n in (50, 200, 1000):
            for p in (0.05, 0.2, 0.5, 0.8):
                if n * p <= 1:
                    continue
                r_hat = critical_r_hat(n, p)
                for r in range(1, r_hat + 2):
                    assert log_expectation_ratio(n, p, r, 1).log_ratio > 0


class TestVarianceTerms:
    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(2, 500), p=st.floats(1e-6, 1 - 1e-6), data=st.data())
    def test_collapse_identity(self, n, p, data):
        r = data.draw(st.integers(1, n // 2))
        want = (n - r) * log1mexp(r * math.log1p(-p))
        assert log_variance_term(n, p, r, r) == pytest.approx(want, rel=1e-12, abs=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(2, 60), p=st.floats(1e-4, 1 - 1e-4), data=st.data())
    def test_matches_mpmath(self, n, p, data):
        r = data.draw(st.integers(1, n // 2))
        s = data.draw(st.integers(0, r))
        want = mp_variance_term(n, p, r, s)
        got = log_variance_term(n, p, r, s)
        assert math.isfinite(got)
        assert got == pytest.approx(float(mpmath.log(want)), rel=1e-9, abs=1e-9)

    def test_finite_at_extreme_scale(self):
        assert math.isfinite(log_variance_term(10**6, 0.99, 3, 1))
        assert math.isfinite(log_second_moment_bound(10**6, 0.001, 4000))

    @pytest.mark.parametrize("r,s", [(6, 0), (2, 3), (2, -1)])
    def test_domain(self, r, s):
        with pytest.raises(DomainError):
            log_variance_term(10, 0.5, r, s)

    def test_second_moment_exhaustive(self):
        for p in (0.3, 0.6):
            for r in (1, 2):
                e1, e2, p0 = exhaustive_moments(5, p, r)
                bound = math.exp(log_second_moment_bound(5, p, r))
                assert e2 <= bound + 1e-12
                assert p0 <= chebyshev_nonexistence_bound(5, p, r)


class TestChebyshev:
    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(2, 300), p=st.floats(1e-3, 0.999), data=st.data())
    def test_in_unit_interval(self, n, p, data):
        r = data.draw(st.integers(1, n // 2))
        assume(math.isfinite(log_expected_dominating_sets(n, p, r)))
        assert 0.0 <= chebyshev_nonexistence_bound(n, p, r) <= 1.0

    @pytest.mark.parametrize("r", [0, 6])
    def test_range(self, r):
        with pytest.raises(DomainError):
            chebyshev_nonexistence_bound(10, 0.5, r)


class TestTalagrand:
    def test_examples(self):
        assert talagrand_tail_product_bound(100, 50, 0) == 1.0
        assert talagrand_tail_product_bound(100, 50, 20) == pytest.approx(math.exp(-2), abs=1e-5)

    @pytest.mark.parametrize("b,t", [(100, 1), (5, -1)])
    def test_rejected(self, b, t):
        with pytest.raises(DomainError):
            talagrand_tail_product_bound(100, b, t)

    @given(n=st.integers(2, 10**6), data=st.data())
    def test_monotone_in_t(self, n, data):
        b = data.draw(st.integers(0, n - 1))
        t1 = data.draw(st.floats(0, 1e3))
        t2 = data.draw(st.floats(t1, 2e3))
        assert talagrand_tail_product_bound(n, b, t2) <= talagrand_tail_product_bound(n, b, t1)


def exact_crucial_distribution(n, p, r):
    """Law of |C| given {0..r-1} dominates, by enumerating every graph on n vertices."""
    p = Fraction(p)
    pairs = list(itertools.combinations(range(n), 2))
    s_mask = (1 << r) - 1
    full = (1 << n) - 1
    dist = [Fraction(0)] * (n - r + 1)
    for _, closed, m in all_graphs(n):
        cov = 0
        for v in range(r):
            cov |= closed[v]
        if cov != full:
            continue
        crucial = sum(1 for x in range(r, n) if bin(closed[x] & s_mask).count("1") == 1)
        dist[crucial] += p**m * (1 - p) ** (len(pairs) - m)
    total = sum(dist)
    return [w / total for w in dist]


class TestCrucialLaw:
    def test_examples(self):
        law = crucial_edge_law(10, 0.5, 3)
        assert law.p_star == pytest.approx(3 / 7) and law.mu == pytest.approx(3.0)
        assert crucial_edge_law(12, 0.5, 3).mu == pytest.approx(27 / 7)
        assert crucial_edge_law(9, 0.3, 1).p_star == 1.0

    @pytest.mark.parametrize("r", [0, 13])
    def test_rejected(self, r):
        with pytest.raises(DomainError):
            crucial_edge_law(12, 0.5, r)

    @pytest.mark.parametrize("n,p,r", [(5, 0.5, 2), (6, 0.25, 2), (6, 0.5, 3)])
    def test_exhaustive_binomial(self, n, p, r):
        dist = exact_crucial_distribution(n, p, r)
        law = crucial_edge_law(n, p, r)
        k = n - r
        for c, w in enumerate(dist):
            binom = math.comb(k, c) * law.p_star**c * (1 - law.p_star) ** (k - c)
            assert float(w) == pytest.approx(binom, abs=1e-12)

    def test_rational_p_star(self):
        p, r = Fraction(1, 2), 3
        want = r * p * (1 - p) ** (r - 1) / (1 - (1 - p) ** r)
        assert want == Fraction(3, 7)
        assert crucial_edge_law(12, 0.5, 3).p_star == pytest.approx(float(want), rel=1e-15)


class TestSurvival:
    def test_examples(self):
        assert survival_probability(0, 0.3) == 1.0
        assert survival_probability(4, 0.0) == 1.0
        assert survival_probability(4, 1.0) == 0.0
        assert survival_probability(3, 0.05) == pytest.approx(0.95**3)

    @pytest.mark.parametrize("c,pd", [(-1, 0.1), (2, 1.5), (1.5, 0.1)])
    def test_rejected(self, c, pd):
        with pytest.raises(DomainError):
            survival_probability(c, pd)

    def test_deletion_probability(self):
        assert deletion_probability(100, 0.25, 5) == pytest.approx(0.1)
        assert deletion_probability(100, 0.3, 0) == 0.0
        assert deletion_probability(400, 0.25, 10) == pytest.approx(deletion_probability(100, 0.25, 5) / 2)
        with pytest.raises(DomainError):
            deletion_probability(10, 0.25, 100)
