"""Goodness-of-fit helpers used by the experiment verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps


def normal_cdf(z):
    if np.ndim(z):
        return 0.5 * (1.0 + np.vectorize(math.erf)(np.asarray(z, dtype=float) / math.sqrt(2.0)))
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def poisson_pmf(lam: float, k: int) -> float:
    if k < 0:
        return 0.0
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def ks_statistic(sample, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance ``sup |F_n - F|`` against a continuous ``cdf``."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def histogram(values, lo: int | None = None, hi: int | None = None) -> tuple[int, np.ndarray]:
    """Integer counts on ``lo..hi`` (defaults: sample range)."""
    v = np.asarray(values, dtype=np.int64)
    lo = int(v.min()) if lo is None else lo
    hi = int(v.max()) if hi is None else hi
    if len(v) and (v.min() < lo or v.max() > hi):
        raise ValueError("values outside the histogram range")
    return lo, np.bincount(v - lo, minlength=hi - lo + 1)


def tv_distance(values, pmf, lo: int = 0) -> float:
    """Total variation between the empirical law of integer ``values`` and ``pmf``.

    ``pmf`` is a callable ``k -> probability``; mass of ``pmf`` outside the
    observed range is added in full.
    """
    v = np.asarray(values, dtype=np.int64)
    hi = int(v.max()) if len(v) else lo
    low = min(lo, int(v.min())) if len(v) else lo
    _, counts = histogram(v, low, hi)
    emp = counts / max(len(v), 1)
    model = np.array([pmf(k) for k in range(low, hi + 1)])
    inside = np.abs(emp - model).sum()
    outside = max(0.0, 1.0 - model.sum())
    return float(0.5 * (inside + outside))


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    dof: int
    pvalue: float
    bins: int

    @property
    def degenerate(self) -> bool:
        return self.dof == 0


def _pool(counts: np.ndarray, expected: np.ndarray, min_expected: float):
    """Merge neighbouring cells (in order) until every expected count reaches ``min_expected``."""
    obs_out, exp_out = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(counts, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        if exp_out:
            obs_out[-1] += o_acc
            exp_out[-1] += e_acc
        else:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
    return np.array(obs_out), np.array(exp_out)


def chi_square(counts, probs, min_expected: float = 5.0) -> ChiSquare:
    """Pearson test of observed ``counts`` against cell probabilities ``probs``.

    Cells are pooled so each expected count is at least ``min_expected``.
    An observation in a zero-probability cell gives statistic ``inf``. A
    single pooled cell is a degenerate test that passes with p = 1.
    """
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    if counts.shape != probs.shape:
        raise ValueError("counts and probs must have the same shape")
    if ((probs == 0) & (counts > 0)).any():
        return ChiSquare(math.inf, max(len(probs) - 1, 0), 0.0, len(probs))
    total = counts.sum()
    obs, exp = _pool(counts, probs * total, min_expected)
    if len(obs) <= 1:
        return ChiSquare(0.0, 0, 1.0, len(obs))
    stat = float(((obs - exp) ** 2 / exp).sum())
    dof = len(obs) - 1
    return ChiSquare(stat, dof, float(sps.chi2.sf(stat, dof)), len(obs))


def chi_square_pmf(values, pmf_table) -> ChiSquare:
    """Chi-square of integer ``values`` against a :class:`PmfTable`, tails pooled into end cells."""
    v = np.asarray(values, dtype=np.int64)
    lo, hi = pmf_table.lo, pmf_table.hi
    counts = np.bincount(np.clip(v, lo - 1, hi + 1) - (lo - 1), minlength=hi - lo + 3).astype(float)
    probs = np.concatenate([[0.0], pmf_table.mass, [0.0]])
    return chi_square(counts, probs)


def two_sample_chi_square(a, b, min_expected: float = 5.0) -> ChiSquare:
    """Homogeneity test for two integer samples (sparse cells pooled)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    lo = int(min(a.min(), b.min()))
    hi = int(max(a.max(), b.max()))
    ca = np.bincount(a - lo, minlength=hi - lo + 1).astype(float)
    cb = np.bincount(b - lo, minlength=hi - lo + 1).astype(float)
    # pool on the pooled expected count of the smaller sample
    share = min(len(a), len(b)) / (len(a) + len(b))
    rows_a, rows_b = [], []
    acc_a = acc_b = 0.0
    for x, y in zip(ca, cb):
        acc_a += x
        acc_b += y
        if (acc_a + acc_b) * share >= min_expected:
            rows_a.append(acc_a)
            rows_b.append(acc_b)
            acc_a = acc_b = 0.0
    if acc_a or acc_b:
        if rows_a:
            rows_a[-1] += acc_a
            rows_b[-1] += acc_b
        else:
            rows_a.append(acc_a)
            rows_b.append(acc_b)
    if len(rows_a) <= 1:
        return ChiSquare(0.0, 0, 1.0, len(rows_a))
    stat, p, dof, _ = sps.chi2_contingency(np.array([rows_a, rows_b]), correction=False)
    return ChiSquare(float(stat), int(dof), float(p), len(rows_a))


def binomial_se(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)
