import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats as sps

from mallows_trees.analytics import PmfTable
from mallows_trees.stats import (
    binomial_se,
    chi_square,
    chi_square_pmf,
    histogram,
    ks_statistic,
    normal_cdf,
    poisson_pmf,
    tv_distance,
    two_sample_chi_square,
)


def test_normal_cdf():
    assert normal_cdf(0) == 0.5
    z = np.linspace(-6, 6, 25)
    assert np.allclose(normal_cdf(z), sps.norm.cdf(z), atol=1e-14)


@given(st.floats(0.01, 50), st.integers(0, 120))
def test_poisson_pmf_matches_scipy(lam, k):
    assert poisson_pmf(lam, k) == pytest.approx(sps.poisson.pmf(k, lam), rel=1e-10, abs=1e-300)


def test_poisson_edge_cases():
    assert poisson_pmf(2, 0) == pytest.approx(math.exp(-2))
    assert poisson_pmf(0, 0) == 1.0 and poisson_pmf(0, 3) == 0.0
    assert poisson_pmf(1.5, -1) == 0.0


def test_ks_against_own_ecdf_is_zero():
    # against a step function equal to the sample's ECDF, taken at the right limit
    x = np.arange(1, 11, dtype=float)
    stat = ks_statistic(x, lambda t: np.searchsorted(x, t, side="right") / len(x))
    assert stat == pytest.approx(0.1)  # left limit at each jump contributes 1/n
    rng = np.random.default_rng(3)
    s = rng.standard_normal(4000)
    ref = sps.kstest(s, "norm").statistic
    assert ks_statistic(s, normal_cdf) == pytest.approx(ref, abs=1e-12)


def test_histogram_and_tv():
    lo, counts = histogram([2, 3, 3, 5])
    assert lo == 2 and list(counts) == [1, 2, 0, 1]
    with pytest.raises(ValueError):
        histogram([1, 9], 0, 5)
    pm = lambda k: 1.0 if k == 0 else 0.0
    assert tv_distance(np.zeros(50, dtype=int), pm) == 0.0
    assert tv_distance(np.ones(10, dtype=int), pm) == 1.0
    # model mass outside the observed range counts in full
    half = lambda k: 0.5 if k in (0, 7) else 0.0
    assert tv_distance(np.zeros(10, dtype=int), half) == pytest.approx(0.5)


def test_chi_square_matches_scipy_without_pooling():
    counts = np.array([18, 22, 30, 30])
    probs = np.array([0.2, 0.2, 0.3, 0.3])
    r = chi_square(counts, probs)
    ref = sps.chisquare(counts, probs * counts.sum())
    assert r.statistic == pytest.approx(ref.statistic) and r.pvalue == pytest.approx(ref.pvalue)
    assert r.dof == 3 and not r.degenerate


def test_chi_square_pooling_and_degenerate():
    r = chi_square([100, 0, 0], [1.0, 0.0, 0.0])
    assert r.degenerate and r.pvalue == 1.0
    r = chi_square([99, 1], [1.0, 0.0])
    assert math.isinf(r.statistic) and r.pvalue == 0.0
    # cells with tiny expectation are merged left to right; a short tail joins the last full cell
    r = chi_square([50, 46, 2, 2], [0.5, 0.46, 0.02, 0.02])
    assert r.bins == 2
    r = chi_square([2, 3, 45, 50], [0.02, 0.03, 0.45, 0.5])
    assert r.bins == 3


def test_chi_square_pmf_end_cells():
    t = PmfTable(1, np.array([0.5, 0.5]))
    assert chi_square_pmf([1, 2] * 50, t).pvalue == pytest.approx(1.0)
    assert math.isinf(chi_square_pmf([0, 1, 2] * 50, t).statistic)
    assert math.isinf(chi_square_pmf([1, 2, 3], t).statistic)


def test_two_sample():
    rng = np.random.default_rng(5)
    a = rng.binomial(10, 0.4, 20000)
    b = rng.binomial(10, 0.4, 20000)
    assert two_sample_chi_square(a, b).pvalue > 0.001
    c = rng.binomial(10, 0.45, 20000)
    assert two_sample_chi_square(a, c).pvalue < 1e-6
    assert two_sample_chi_square(np.zeros(10, int), np.zeros(7, int)).degenerate


def test_binomial_se():
    assert binomial_se(0.5, 100) == pytest.approx(0.05)
    assert binomial_se(0.0, 10) == 0.0
