import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import optimize, special

from mallows_trees.analytics import (
    PmfTable,
    c_star,
    chernoff_bounds,
    mu_alpha,
    mu_asymptotic,
    mu_bounds,
    mu_terms,
    nu_beta,
    partitions,
    point_mass,
    q_binomial_table,
    record_mgf,
    record_moment,
    record_pmf,
    stirling2,
    threshold_pmf,
    threshold_pmf_closed,
    threshold_tail_bounds,
    zeta,
)
from mallows_trees.oracle import (
    exact_right_depth_pmf,
    exhaustive_record_mgf,
    stream_record_max_law,
    threshold_law_bruteforce,
)

qs = st.floats(0.0, 0.999, allow_nan=False)


# --- PmfTable ---


def test_pmf_table_accessors():
    t = PmfTable(2, np.array([0.25, 0.5, 0.25]))
    assert t.hi == 4
    assert list(t.support) == [2, 3, 4]
    assert t(1) == 0.0 and t(3) == 0.5
    assert t.mean() == pytest.approx(3.0)
    assert t.var() == pytest.approx(0.5)
    assert t.cdf(1) == 0.0 and t.cdf(3) == pytest.approx(0.75)
    assert t.sf(4) == pytest.approx(0.25) and t.sf(0) == pytest.approx(1.0)
    assert list(t.dense(1, 5)) == [0.0, 0.25, 0.5, 0.25, 0.0]


def test_pmf_table_rejects_bad_mass():
    with pytest.raises(ValueError):
        PmfTable(0, np.array([-0.1, 1.1]))
    with pytest.raises(ArithmeticError):
        PmfTable.normalised(0, [0.5, 0.4])
    assert point_mass(3).mean() == 3


# --- c* ---


def test_c_star_root():
    c = c_star()
    assert abs(c * math.log(2 * math.e / c) - 1) < 1e-12
    assert 4.310 < c < 4.312
    ref = optimize.brentq(lambda x: x * math.log(2 * math.e / x) - 1, 2, 8, xtol=1e-15)
    assert c == pytest.approx(ref, abs=1e-12)
    # c = 2 sits left of the root
    assert 2 * math.log(math.e) > 1


# --- mu_alpha ---


def test_mu_examples():
    assert mu_alpha(3, 0.5) == pytest.approx(26 / 21, abs=1e-15)
    for n in (1, 2, 10, 100):
        assert mu_alpha(n, 0.0) == n - 1
        assert mu_alpha(n, 1.0) == pytest.approx(sum(1 / k for k in range(2, n + 1)), abs=1e-12)


@given(st.integers(2, 200), qs, st.integers(1, 4))
def test_mu_terms_bounded(n, q, alpha):
    t = mu_terms(n, q, alpha)
    assert len(t) == n - 1
    assert np.all(t <= 1 + 1e-15) and np.all(t >= (1 - q) ** alpha - 1e-15)
    assert np.all(np.diff(t) <= 1e-15)


@pytest.mark.parametrize("n", [10**2, 10**4])
@pytest.mark.parametrize("q", [0.5, 0.99])
@pytest.mark.parametrize("alpha", [1, 2])
def test_mu_bounds_sandwich(n, q, alpha):
    lo, hi = mu_bounds(n, q, alpha, math.isqrt(n))
    mu = mu_alpha(n, q, alpha)
    assert lo <= mu <= hi


@given(st.integers(2, 300), qs, st.integers(1, 3), st.data())
def test_mu_bounds_any_cut(n, q, alpha, data):
    m = data.draw(st.integers(1, n))
    lo, hi = mu_bounds(n, q, alpha, m)
    mu = mu_alpha(n, q, alpha)
    assert lo <= mu * (1 + 1e-12) and mu <= hi * (1 + 1e-12)


def test_mu_bounds_m1_and_q0():
    n, q = 50, 0.7
    lo, _ = mu_bounds(n, q, 1, 1)
    assert lo == pytest.approx((n - 1) * (1 - q))
    lo, hi = mu_bounds(n, 0.0, 1, 2)
    assert lo <= n - 1 <= hi and hi - lo <= 3


@pytest.mark.parametrize("alpha", [1.5, 2, 3, 4.25, 10])
def test_zeta_against_scipy(alpha):
    assert zeta(alpha) == pytest.approx(special.zeta(alpha), rel=1e-13)


@pytest.mark.parametrize("n", [10**3, 10**5])
@pytest.mark.parametrize("q", [0.9, 0.999])
def test_mu_asymptotics(n, q):
    main1, s1 = mu_asymptotic(n, q, 1)
    assert abs(mu_alpha(n, q, 1) - main1) <= 3 * s1
    main2, s2 = mu_asymptotic(n, q, 2)
    assert abs(mu_alpha(n, q, 2) - main2) <= 10 * s2


def test_mu_asymptotic_q0():
    main, scale = mu_asymptotic(100, 0.0, 1)
    assert main == 100 and abs(mu_alpha(100, 0.0) - main) == 1


# --- MGF ---


def test_mgf_examples():
    for n in (1, 4, 9):
        assert record_mgf(n, 0.6, 1.0, 1.0) == pytest.approx(1.0, abs=1e-14)
        assert record_mgf(n, 0.0, 0.7, 1.3) == pytest.approx((0.7 * 1.3) ** n)
    x, y, q = 1.4, 0.8, 0.35
    assert record_mgf(1, q, x, y) == pytest.approx(x * y * (1 - q) / (1 - q * y))
    with pytest.raises(ValueError):
        record_mgf(3, 0.7, 1.0, 1.5)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("q", [0.3, 0.7])
def test_mgf_matches_stream_enumeration(n, q):
    law = stream_record_max_law(n, q)
    for x, y in itertools.product((0.5, 1.0, 1.5), repeat=2):
        if q * y >= 1:
            continue
        assert record_mgf(n, q, x, y) == pytest.approx(exhaustive_record_mgf(n, q, x, y, law), abs=1e-10)


# --- right-depth law and moments ---


@pytest.mark.parametrize("n", range(1, 7))
def test_record_pmf_matches_tree_oracle(n):
    a = record_pmf(n, 0.5)
    b = exact_right_depth_pmf(n, 0.5)
    assert np.allclose(a.dense(0, n - 1), b.dense(0, n - 1), atol=1e-12, rtol=0)


@given(st.integers(1, 500), qs)
def test_record_pmf_mean(n, q):
    assert record_pmf(n, q).mean() == pytest.approx(mu_alpha(n, q), abs=1e-10 * max(1, n))


def test_record_pmf_q0_point_mass():
    t = record_pmf(8, 0.0)
    assert t(7) == 1.0


def test_record_pmf_from_mgf_marginal():
    # the x-marginal of the MGF at y = 1 is E[x^C] with C = R + 1
    n, q, x = 12, 0.6, 0.4
    t = record_pmf(n, q)
    assert record_mgf(n, q, x, 1.0) == pytest.approx(sum(t(k) * x ** (k + 1) for k in range(n)), rel=1e-12)


def test_stirling_and_partitions():
    assert stirling2(4, 2) == 7
    for a in range(1, 9):
        assert stirling2(a, 1) == 1 and stirling2(a, a) == 1
    assert len(partitions(4)) == 5
    assert [len(partitions(b)) for b in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    for sig in partitions(6):
        assert sum(i * v for i, v in enumerate(sig.s, start=1)) == 6
    with pytest.raises(ValueError):
        partitions(13)


@pytest.mark.parametrize("n", [3, 5, 8, 12])
@pytest.mark.parametrize("q", [0.3, 0.8])
def test_nu_beta_bruteforce(n, q):
    b = mu_terms(n, q, 1)
    mu1, mu2 = mu_alpha(n, q, 1), mu_alpha(n, q, 2)
    assert nu_beta(n, q, 1) == pytest.approx(mu1)
    assert nu_beta(n, q, 2) == pytest.approx(mu1**2 - mu2, abs=1e-12)
    brute = sum(b[i] * b[j] * b[k] for i, j, k in itertools.permutations(range(len(b)), 3))
    assert nu_beta(n, q, 3) == pytest.approx(brute, abs=1e-10)


@pytest.mark.parametrize("n", [10, 50, 200])
@pytest.mark.parametrize("q", [0.3, 0.9, 0.99])
def test_record_moment_vs_pmf(n, q):
    t = record_pmf(n, q)
    mu1, mu2 = mu_alpha(n, q, 1), mu_alpha(n, q, 2)
    assert record_moment(n, q, 1) == pytest.approx(mu1, rel=1e-12)
    assert record_moment(n, q, 2) == pytest.approx(mu1 + mu1**2 - mu2, rel=1e-12)
    for alpha in range(1, 5):
        assert record_moment(n, q, alpha) == pytest.approx(t.moment(alpha), rel=1e-9)


def test_record_moment_small_n():
    assert record_moment(1, 0.5, 3) == 0.0
    t = record_pmf(2, 0.5)
    assert record_moment(2, 0.5, 4) == pytest.approx(t.moment(4))


def test_chernoff():
    n, q = 1000, 0.9
    mu1 = mu_alpha(n, q)
    up, lo = chernoff_bounds(n, q, 2.0)
    assert up == pytest.approx(math.exp((1 - 2 * math.log(2)) * mu1))
    assert 1 - 2 * math.log(2) == pytest.approx(-0.386, abs=1e-3)
    up, lo = chernoff_bounds(n, q, 1 + 1e-9)
    assert up == pytest.approx(1.0, abs=1e-9) and lo == pytest.approx(1.0, abs=1e-9)
    # exact tails respect both bounds
    t = record_pmf(n, q)
    for c in (1.2, 1.5, 2.0):
        up, lo = chernoff_bounds(n, q, c)
        assert t.sf(math.floor(c * mu1) + 1) <= up
        assert t.cdf(math.ceil(mu1 / c) - 1) <= lo


# --- threshold process ---


def test_threshold_base_cases():
    assert threshold_pmf(7, 0, 0.5)(7) == 1.0
    for n, s in ((5, 2), (3, 7), (4, 4)):
        assert threshold_pmf(n, s, 0.0)(max(n - s, 0)) == 1.0
    assert threshold_pmf(0, 3, 0.5)(0) == 1.0


@pytest.mark.parametrize("n,s", [(4, 3), (2, 5), (5, 1), (6, 6)])
@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_threshold_three_routes(n, s, q):
    a = threshold_pmf(n, s, q)
    b = threshold_pmf_closed(n, s, q)
    c = threshold_law_bruteforce(n, s, q)
    assert np.allclose(a.dense(0, n), b.dense(0, n), atol=1e-12, rtol=0)
    assert np.allclose(a.dense(0, n), c.dense(0, n), atol=1e-12, rtol=0)


@given(st.integers(0, 30), st.integers(0, 40), st.floats(0.0, 0.99))
def test_threshold_recursion_equals_closed_form(n, s, q):
    a = threshold_pmf(n, s, q)
    b = threshold_pmf_closed(n, s, q)
    assert np.max(np.abs(a.dense(0, n) - b.dense(0, n))) <= 1e-12


def test_q_binomial_rows():
    G = q_binomial_table(6, 1.0 - 1e-15)
    assert G[6, 3] == pytest.approx(20)
    G = q_binomial_table(4, 0.5)
    # [4 choose 2]_q = 1 + q + 2q^2 + q^3 + q^4
    assert G[4, 2] == pytest.approx(1 + 0.5 + 2 * 0.25 + 0.125 + 0.0625)


def test_tail_bounds_examples():
    n, s, q = 40, 50, 0.9
    law = threshold_pmf(n, s, q)
    b = threshold_tail_bounds(n, s, q, 10)
    assert b.upper_valid and law.sf(10) <= b.upper
    b = threshold_tail_bounds(n, s, q, 1)
    assert b.lower_valid and law.cdf(1) <= b.lower
    # xi = 0 with n <= s: the formula undershoots, so it is flagged invalid
    b = threshold_tail_bounds(1, 6, 0.5, 0)
    assert not b.lower_valid and threshold_pmf(1, 6, 0.5).cdf(0) > 0.98
    # bare condition holds but the bound undershoots once (s-n)! (1-q)^(s-n) > 1
    b = threshold_tail_bounds(1, 32, 0.9, 1)
    assert b.lower_condition and not b.lower_valid and b.lower == None
    b = threshold_tail_bounds(n, s, 0.0, 1)
    assert not b.upper_valid and not b.lower_valid


@given(st.integers(1, 40), st.integers(0, 60), st.floats(0.05, 0.95), st.integers(0, 40))
def test_tail_bounds_dominate_when_valid(n, s, q, xi):
    law = threshold_pmf(n, s, q)
    b = threshold_tail_bounds(n, s, q, xi)
    lq, l1q = math.log(q), math.log1p(-q)
    # validity flags are the conditions themselves
    if xi >= 1:
        assert b.upper_valid == ((xi + s - n) * lq <= math.log(xi) + l1q)
        assert b.lower_condition == ((xi + s - n) * lq >= math.log(xi) + 2 * l1q)
    else:
        assert not b.upper_valid and b.lower_condition == (n > s)
    side = s <= n or math.lgamma(s - n + 1) + (s - n) * l1q <= 0
    assert b.lower_valid == (b.lower_condition and side)
    if b.upper_valid:
        assert law.sf(xi) <= b.upper * (1 + 1e-9)
    if b.lower_valid:
        assert law.cdf(xi) <= b.lower * (1 + 1e-9)


def test_fraction_free_mu():
    # mu_1(3, 1/2) = 2/3 + 4/7 from exact rationals
    q = Fraction(1, 2)
    exact = sum((1 - q) / (1 - q**k) for k in (2, 3))
    assert mu_alpha(3, 0.5) == pytest.approx(float(exact), abs=1e-16)
