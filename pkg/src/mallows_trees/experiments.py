"""Seeded Monte Carlo harness: each experiment turns one limit law or bound into a verdict.

Reproducibility contract: trial ``t`` at grid index ``i`` of experiment
``e`` draws from ``SeedSequence(seed, spawn_key=(crc32(e), i, t))``, results
are gathered in trial order, and every float is written with ``repr``.
Output therefore does not depend on the number of worker threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__
from .analytics import (
    c_star,
    chernoff_bounds,
    mu_alpha,
    threshold_pmf,
    threshold_tail_bounds,
)
from .kernels import rm_chain_kernel, tree_height_kernel
from .oracle import exact_height_law, exact_occupancy_table
from .record_chain import bstream_values, m_threshold
from .size_process import check_path_bounds, coupling_m, generate_tree
from .stats import (
    binomial_se,
    chi_square_pmf,
    ks_statistic,
    normal_cdf,
    poisson_pmf,
    tv_distance,
    two_sample_chi_square,
)

# --- schedules ----------------------------------------------------------------

SCHEDULE_KINDS = ("constant", "one-minus-c-log-over-n", "one-minus-n-pow", "lambda-over-n")


@dataclass(frozen=True)
class Schedule:
    """A sequence ``q_n``, written ``kind:param`` on the command line."""

    kind: str
    param: float

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        kind, sep, value = text.partition(":")
        kind = kind.replace("_", "-")
        if not sep or kind not in SCHEDULE_KINDS:
            raise ValueError(f"schedule must be kind:param with kind in {SCHEDULE_KINDS}, got {text!r}")
        return cls(kind, float(value))

    @classmethod
    def constant(cls, q: float) -> "Schedule":
        return cls("constant", float(q))

    def __str__(self) -> str:
        return f"{self.kind}:{self.param!r}"

    def q(self, n: int) -> float:
        p = self.param
        if self.kind == "constant":
            q = p
        elif self.kind == "one-minus-c-log-over-n":
            q = 1.0 - p * math.log(n) / n
        elif self.kind == "one-minus-n-pow":
            q = 1.0 - n ** (-p)
        else:
            q = p / n
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"schedule {self} gives q_n = {q!r} outside [0, 1] at n = {n}")
        return q


# --- configuration and results ----------------------------------------------

# verdict thresholds per experiment; the harness only ever reads them from the config
DEFAULT_THRESHOLDS: dict[str, dict[str, float]] = {
    "height-ratio": {"ratio_lo": 0.95, "ratio_hi": 1.05},
    "rd-clt": {"ks_max": 0.05},
    "height-clt": {"ks_max": 0.07},
    "poisson": {"tv_max": 0.05},
    "left-subtree-sup": {"median_ratio_lo": 2.0, "median_ratio_hi": 7.0},
    "coupling": {"sigmas": 3.0},
    "mean-variance": {"mean_sigmas": 4.0, "var_rel": 0.10},
    "chernoff": {"sigmas": 3.0},
    "threshold": {"p_min": 0.001},
    "subtree-identity": {"p_min": 0.001},
    "range-of-m": {"freq_max": 0.1, "sigmas": 3.0},
    "path-bounds": {"violations_max": 0},
    "height-tails": {"eps": 0.1},
}

DEFAULT_PARAMS: dict[str, dict] = {
    "left-subtree-sup": {"K": 200},
    "coupling": {"ells": None},
    "chernoff": {"c": (1.2, 1.5, 2.0)},
    "threshold": {"s": tuple(range(9))},
    "subtree-identity": {"m": None},
    "range-of-m": {"alpha_scale": 2.0, "alpha_pow": 0.75},
}


@dataclass
class ExperimentConfig:
    experiment: str
    schedule: Schedule
    n_grid: tuple[int, ...]
    trials: int
    seed: int
    threads: int = 1
    output: str | None = None
    thresholds: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {sorted(EXPERIMENTS)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_grid:
            raise ValueError("n grid must be non-empty")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.n_grid = tuple(int(n) for n in self.n_grid)
        self.thresholds = {**DEFAULT_THRESHOLDS.get(self.experiment, {}), **self.thresholds}
        self.params = {**DEFAULT_PARAMS.get(self.experiment, {}), **self.params}
        for n in self.n_grid:
            self.schedule.q(n)

    def describe(self) -> dict:
        d = asdict(self)
        d["schedule"] = str(self.schedule)
        d["n_grid"] = list(self.n_grid)
        d.pop("threads")
        d.pop("output")
        d["params"] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params.items()}
        return d


@dataclass
class SummaryRow:
    n: int
    q: float
    statistic: str
    value: float
    lower: float | None
    upper: float | None
    passed: bool
    mean: float | None = None
    var: float | None = None
    q05: float | None = None
    q50: float | None = None
    q95: float | None = None
    note: str = ""


@dataclass
class SummaryStats:
    config: ExperimentConfig
    rows: list[SummaryRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def row(self, statistic: str, n: int | None = None) -> SummaryRow:
        for r in self.rows:
            if r.statistic == statistic and (n is None or r.n == n):
                return r
        raise KeyError(statistic)


def check_band(value: float, lower: float | None, upper: float | None) -> bool:
    return bool((lower is None or value >= lower) and (upper is None or value <= upper))


def _row(n, q, statistic, value, lower=None, upper=None, sample=None, note="") -> SummaryRow:
    extra = {}
    if sample is not None and len(sample):
        s = np.asarray(sample, dtype=float)
        q05, q50, q95 = np.quantile(s, [0.05, 0.5, 0.95])
        extra = dict(mean=float(s.mean()), var=float(s.var()), q05=float(q05), q50=float(q50), q95=float(q95))
    return SummaryRow(int(n), float(q), statistic, float(value), lower, upper, check_band(value, lower, upper), note=note, **extra)


# --- parallel trials ------------------------------------------------------------


def trial_rng(seed: int, tag: str, index: int, trial: int) -> np.random.Generator:
    key = (zlib.crc32(tag.encode()), index, trial)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def run_trials(fn: Callable[[np.random.Generator], object], count: int, seed: int, tag: str, index: int, threads: int = 1) -> list:
    """``[fn(rng_0), ..., fn(rng_{count-1})]`` in trial order, on ``threads`` workers."""
    rngs = (trial_rng(seed, tag, index, t) for t in range(count))
    if threads <= 1:
        return [fn(r) for r in rngs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, rngs))


def _heights(n: int, q: float, cfg: ExperimentConfig, tag: str, index: int) -> np.ndarray:
    def one(rng):
        return int(tree_height_kernel(n, q, rng.random(n)))

    return np.array(run_trials(one, cfg.trials, cfg.seed, tag, index, cfg.threads), dtype=np.int64)


def _right_depths(n: int, q: float, cfg: ExperimentConfig, tag: str, index: int, trials: int | None = None) -> np.ndarray:
    def one(rng):
        records, _ = rm_chain_kernel(n, q, rng.random(n), rng.random(n))
        return int(records) - 1

    return np.array(run_trials(one, trials or cfg.trials, cfg.seed, tag, index, cfg.threads), dtype=np.int64)


# --- experiments ------------------------------------------------------------------


def height_normaliser(n: int, q: float) -> float:
    """``n(1-q) + c* log(n ∧ 1/(1-q))``; equals ``n(1-q) + c* log n`` whenever ``1-q <= 1/n``."""
    cap = n if q == 1.0 else min(n, 1.0 / (1.0 - q))
    return n * (1.0 - q) + c_star() * math.log(cap)


def run_height_ratio(cfg: ExperimentConfig) -> SummaryStats:
    th = cfg.thresholds
    rows = []
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        h = _heights(n, q, cfg, cfg.experiment, i)
        norm = height_normaliser(n, q)
        ratio = h / norm
        # integer sum first, so a constant sample gives exactly h / norm
        mean_ratio = (int(h.sum()) / len(h)) / norm
        rows.append(_row(n, q, "mean_ratio", mean_ratio, th["ratio_lo"], th["ratio_hi"], ratio))
        literal = h / (n * (1.0 - q) + c_star() * math.log(n))
        rows.append(_row(n, q, "mean_ratio_log_n", literal.mean(), sample=literal, note="reported only"))
    return SummaryStats(cfg, rows)


def _check_clt_regime(n: int, q: float) -> None:
    if not (n * (1.0 - q) >= 10.0 * math.log(n) and n * q >= 10.0):
        raise ValueError(
            f"CLT experiments need n(1-q) >= 10 log n and nq >= 10; got n={n}, q={q}"
        )


def run_rd_clt(cfg: ExperimentConfig) -> SummaryStats:
    rows = []
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        _check_clt_regime(n, q)
        r = _right_depths(n, q, cfg, cfg.experiment, i)
        z = (r - n * (1.0 - q) - math.log(1.0 / (1.0 - q))) / math.sqrt(n * (1.0 - q) * q)
        ks = ks_statistic(z, normal_cdf)
        rows.append(_row(n, q, "ks", ks, None, cfg.thresholds["ks_max"], z))
    return SummaryStats(cfg, rows)


def run_height_clt(cfg: ExperimentConfig) -> SummaryStats:
    rows = []
    cs = c_star()
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        _check_clt_regime(n, q)
        h = _heights(n, q, cfg, cfg.experiment, i)
        z = (h - n * (1.0 - q) - cs * math.log(1.0 / (1.0 - q))) / math.sqrt(n * (1.0 - q) * q)
        ks = ks_statistic(z, normal_cdf)
        rows.append(_row(n, q, "ks", ks, None, cfg.thresholds["ks_max"], z))
    return SummaryStats(cfg, rows)


def run_poisson(cfg: ExperimentConfig) -> SummaryStats:
    if cfg.schedule.kind != "lambda-over-n":
        raise ValueError("poisson experiment needs a lambda-over-n schedule")
    lam = cfg.schedule.param
    rows = []
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        x = (n - 1) - _heights(n, q, cfg, cfg.experiment, i)
        tv = tv_distance(x, lambda k: poisson_pmf(lam, k))
        rows.append(_row(n, q, "tv", tv, None, cfg.thresholds["tv_max"], x))
    return SummaryStats(cfg, rows)


def _geometric(rng: np.random.Generator, q: float) -> int:
    return 0 if q == 0.0 else int(rng.geometric(1.0 - q)) - 1


def run_left_subtree_sup(cfg: ExperimentConfig) -> SummaryStats:
    """``max_{k<K} (h(T_{G_k, q}) - k)`` with i.i.d. Geometric(1-q) sizes ``G_k``.

    The grid holds ``n = K``; ``q`` comes from a constant schedule. Qualitative:
    the verdict brackets ``median / log(1/(1-q))`` loosely around c*.
    """
    rows = []
    th = cfg.thresholds
    for i, K in enumerate(cfg.n_grid):
        q = cfg.schedule.q(K)
        if q >= 1.0:
            raise ValueError("left-subtree-sup needs q < 1")

        def one(rng, K=K, q=q):
            best = -1
            for k in range(K):
                g = _geometric(rng, q)
                h = int(tree_height_kernel(g, q, rng.random(g))) if g else -1
                best = max(best, h - k)
            return best

        sup = np.array(run_trials(one, cfg.trials, cfg.seed, cfg.experiment, i, cfg.threads), dtype=float)
        med = float(np.median(sup))
        if q == 0.0:
            rows.append(_row(K, q, "median", med, -1.0, -1.0, sup))
        else:
            scale = math.log(1.0 / (1.0 - q))
            rows.append(_row(K, q, "median_over_log", med / scale, th["median_ratio_lo"], th["median_ratio_hi"], sup, "qualitative"))
    return SummaryStats(cfg, rows)


def _fraction_grid(q: float) -> Fraction:
    return Fraction(q).limit_denominator(10**6)


def run_coupling(cfg: ExperimentConfig) -> SummaryStats:
    """``P(h(T_{n,q}) <= l) <= P(h(T_{m,1}) <= l)`` with ``m = coupling_m(n, q, l)``.

    ``n <= 7``: exact rational laws from the enumeration oracle, zero tolerance.
    Larger ``n``: empirical CDFs, allowing ``sigmas`` binomial standard errors.
    """
    rows = []
    ells = cfg.params.get("ells")
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        grid = list(range(n + 1)) if ells is None else list(ells)
        if n <= 7:
            qf = _fraction_grid(q)
            law = exact_height_law(n, qf)
            worst = -math.inf
            for ell in grid:
                m = exact_coupling_m(n, qf, ell)
                lhs = sum((p for k, p in law.items() if k <= ell), Fraction(0))
                rhs = sum((p for k, p in exact_height_law(m, Fraction(1)).items() if k <= ell), Fraction(0))
                worst = max(worst, float(lhs - rhs))
            rows.append(_row(n, q, "max_cdf_excess", worst, None, 0.0, note="exact"))
            continue
        h = _heights(n, q, cfg, cfg.experiment, 2 * i)
        worst = -math.inf
        for ell in grid:
            m = coupling_m(n, q, ell) if q < 1 else n // (ell + 2)
            hm = _heights(m, 1.0, cfg, f"{cfg.experiment}/m{ell}", 2 * i + 1) if m else np.full(cfg.trials, -1)
            p1 = float(np.mean(h <= ell))
            p2 = float(np.mean(hm <= ell))
            se = math.hypot(binomial_se(p1, cfg.trials), binomial_se(p2, cfg.trials))
            worst = max(worst, p1 - p2 - cfg.thresholds["sigmas"] * se)
        rows.append(_row(n, q, "max_cdf_excess_minus_band", worst, None, 0.0))
    return SummaryStats(cfg, rows)


def exact_coupling_m(n: int, q: Fraction, ell: int) -> int:
    if q == 1:
        return n // (ell + 2)
    return math.floor((1 - q**n) / (1 - q ** (ell + 2)))


def run_mean_variance(cfg: ExperimentConfig) -> SummaryStats:
    rows = []
    th = cfg.thresholds
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        r = _right_depths(n, q, cfg, cfg.experiment, i).astype(float)
        mu1, mu2 = mu_alpha(n, q, 1), mu_alpha(n, q, 2)
        var = mu1 - mu2
        band = th["mean_sigmas"] * math.sqrt(var / cfg.trials)
        rows.append(_row(n, q, "mean_minus_mu1", r.mean() - mu1, -band, band, r))
        rel = r.var(ddof=1) / var - 1.0 if var > 0 else float(r.var())
        rows.append(_row(n, q, "var_rel_error", rel, -th["var_rel"], th["var_rel"]))
    return SummaryStats(cfg, rows)


def run_chernoff(cfg: ExperimentConfig) -> SummaryStats:
    rows = []
    k = cfg.thresholds["sigmas"]
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        r = _right_depths(n, q, cfg, cfg.experiment, i)
        mu1 = mu_alpha(n, q, 1)
        for c in cfg.params["c"]:
            up, lo = chernoff_bounds(n, q, c)
            p_up = float(np.mean(r > c * mu1))
            p_lo = float(np.mean(r < mu1 / c))
            rows.append(_row(n, q, f"upper_tail_excess_c{c!r}", p_up - up - k * binomial_se(p_up, cfg.trials), None, 0.0))
            rows.append(_row(n, q, f"lower_tail_excess_c{c!r}", p_lo - lo - k * binomial_se(p_lo, cfg.trials), None, 0.0))
    return SummaryStats(cfg, rows)


def run_threshold(cfg: ExperimentConfig) -> SummaryStats:
    """Monte Carlo threshold counts against the exact law, plus exact tail-bound dominance."""
    rows = []
    p_min = cfg.thresholds["p_min"]
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        for s in cfg.params["s"]:
            exact = threshold_pmf(n, s, q)
            rng = trial_rng(cfg.seed, f"{cfg.experiment}/s{s}", i, 0)
            counts = (bstream_values(n, q, rng, cfg.trials) > s).sum(axis=1)
            test = chi_square_pmf(counts, exact)
            rows.append(_row(n, q, f"chi2_pvalue_s{s}", test.pvalue, p_min, None, note="degenerate" if test.degenerate else ""))
            worst = -math.inf
            for xi in range(0, n + 2):
                b = threshold_tail_bounds(n, s, q, xi)
                if b.upper_valid:
                    worst = max(worst, exact.sf(xi) - b.upper)
                if b.lower_valid:
                    worst = max(worst, exact.cdf(xi) - b.lower)
            if worst > -math.inf:
                rows.append(_row(n, q, f"tail_bound_excess_s{s}", worst, None, 0.0, note="exact"))
    return SummaryStats(cfg, rows)


def subtree_identity_batch(n: int, m: int, q: float, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """``size`` draws of both sides of the subtree-size identity (independent streams)."""
    values = bstream_values(n, q, rng, size)
    m_max = values[:, :m].max(axis=1) if m else np.zeros(size, dtype=np.int64)
    direct = (values[:, m:] > m_max[:, None]).sum(axis=1)
    prefix = bstream_values(m, q, rng, size)
    p_max = prefix.max(axis=1) if m else np.zeros(size, dtype=np.int64)
    fresh = (bstream_values(n - m, q, rng, size) > (p_max - m)[:, None]).sum(axis=1)
    return direct, fresh


def run_subtree_identity(cfg: ExperimentConfig) -> SummaryStats:
    rows = []
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        m = cfg.params.get("m")
        m = n // 2 if m is None else int(m)
        if not 0 <= m <= n:
            raise ValueError("need 0 <= m <= n")
        direct, fresh = subtree_identity_batch(n, m, q, trial_rng(cfg.seed, cfg.experiment, i, 0), cfg.trials)
        test = two_sample_chi_square(direct, fresh)
        rows.append(_row(n, q, f"two_sample_pvalue_m{m}", test.pvalue, cfg.thresholds["p_min"], None, direct))
    return SummaryStats(cfg, rows)


def run_range_of_m(cfg: ExperimentConfig) -> SummaryStats:
    """Frequency of ``|M_m - n| > alpha_n / (1 - q_n)`` at ``m = m(n)``; should fall with ``n``."""
    rows = []
    th = cfg.thresholds
    a_scale, a_pow = cfg.params["alpha_scale"], cfg.params["alpha_pow"]
    freqs = []
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        m = m_threshold(n, q)
        alpha = a_scale * math.log(n) ** a_pow

        def one(rng, m=m, q=q):
            return int(rm_chain_kernel(m, q, rng.random(m), rng.random(m))[1])

        M = np.array(run_trials(one, cfg.trials, cfg.seed, cfg.experiment, i, cfg.threads), dtype=float)
        freq = float(np.mean(np.abs(M - n) > alpha / (1.0 - q)))
        freqs.append(freq)
        rows.append(_row(n, q, "exceed_freq", freq, sample=(M - n) * (1.0 - q), note=f"m={m}"))
    last = freqs[-1]
    rows.append(_row(cfg.n_grid[-1], cfg.schedule.q(cfg.n_grid[-1]), "exceed_freq_largest_n", last, None, th["freq_max"]))
    se = math.hypot(binomial_se(freqs[0], cfg.trials), binomial_se(last, cfg.trials))
    rows.append(_row(cfg.n_grid[-1], cfg.schedule.q(cfg.n_grid[-1]), "trend_excess", last - freqs[0] - th["sigmas"] * se, None, 0.0))
    return SummaryStats(cfg, rows)


def run_path_bounds(cfg: ExperimentConfig) -> SummaryStats:
    rows = []
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)

        def one(rng, n=n, q=q):
            _, trail = generate_tree(n, q, rng, trail=True)
            return int((~check_path_bounds(trail, n, q)).sum())

        bad = run_trials(one, cfg.trials, cfg.seed, cfg.experiment, i, cfg.threads)
        rows.append(_row(n, q, "violations", sum(bad), None, cfg.thresholds["violations_max"]))
    return SummaryStats(cfg, rows)


def run_height_tails(cfg: ExperimentConfig) -> SummaryStats:
    """Empirical ``P(|h / (n(1-q)) - 1| > eps)`` across the grid (reported, not judged)."""
    rows = []
    eps = cfg.thresholds["eps"]
    for i, n in enumerate(cfg.n_grid):
        q = cfg.schedule.q(n)
        h = _heights(n, q, cfg, cfg.experiment, i)
        dev = h / (n * (1.0 - q)) - 1.0 if q < 1 else np.full(len(h), np.inf)
        rows.append(_row(n, q, "tail_freq", float(np.mean(np.abs(dev) > eps)), sample=h, note="qualitative"))
    return SummaryStats(cfg, rows)


def run_occupancy(cfg: ExperimentConfig) -> SummaryStats:
    """Exact zero-tolerance occupancy dominance and monotonicity in ``n`` (grid ``n <= 7``)."""
    rows = []
    for n in cfg.n_grid:
        q = cfg.schedule.q(n)
        qf = _fraction_grid(q)
        occ = exact_occupancy_table(n, qf)
        nxt = exact_occupancy_table(n + 1, qf)
        dom = max((float(p - occ.get("1" * len(a), 0)) for a, p in occ.items()), default=0.0)
        mono = max((float(p - nxt.get(a, 0)) for a, p in occ.items()), default=0.0)
        rows.append(_row(n, q, "dominance_excess", dom, None, 0.0, note="exact"))
        rows.append(_row(n, q, "monotonicity_excess", mono, None, 0.0, note="exact"))
    return SummaryStats(cfg, rows)


EXPERIMENTS: dict[str, Callable[[ExperimentConfig], SummaryStats]] = {
    "height-ratio": run_height_ratio,
    "rd-clt": run_rd_clt,
    "height-clt": run_height_clt,
    "poisson": run_poisson,
    "left-subtree-sup": run_left_subtree_sup,
    "coupling": run_coupling,
    "occupancy": run_occupancy,
    "mean-variance": run_mean_variance,
    "chernoff": run_chernoff,
    "threshold": run_threshold,
    "subtree-identity": run_subtree_identity,
    "range-of-m": run_range_of_m,
    "path-bounds": run_path_bounds,
    "height-tails": run_height_tails,
}


def run(cfg: ExperimentConfig) -> SummaryStats:
    return EXPERIMENTS[cfg.experiment](cfg)


# --- output ---------------------------------------------------------------------

CSV_FIELDS = ("experiment", "n", "q", "statistic", "value", "lower", "upper", "passed", "mean", "var", "q05", "q50", "q95", "note")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(summary: SummaryStats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in summary.rows:
        d = asdict(r)
        w.writerow([summary.config.experiment] + [_fmt(d[k]) for k in CSV_FIELDS[1:]])
    buf.write(f"# seed={summary.config.seed},version={__version__}\n")
    return buf.getvalue()


def to_json(summary: SummaryStats) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return repr(v)
        return v

    verdicts = [{k: clean(v) for k, v in asdict(r).items()} for r in summary.rows]
    doc = {
        "experiment": summary.config.experiment,
        "config": summary.config.describe(),
        "seed": summary.config.seed,
        "passed": summary.passed,
        "verdicts": verdicts,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
