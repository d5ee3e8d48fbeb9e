"""Closed forms: c*, mu_alpha, right-depth MGF/PMF/moments, threshold law and tail bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .qmath import check_q, one_minus_q_pow, split_ratio

NORMALISE_TOL = 1e-10
MAX_PARTITION = 12


@dataclass(frozen=True)
class PmfTable:
    """Law on the integer range ``lo .. lo + len(mass) - 1``."""

    lo: int
    mass: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        if mass.ndim != 1 or len(mass) == 0:
            raise ValueError("mass must be a non-empty 1-d array")
        if (mass < 0).any():
            raise ValueError("negative mass")
        object.__setattr__(self, "mass", mass)

    @classmethod
    def normalised(cls, lo: int, mass) -> "PmfTable":
        """Renormalise once; refuse if the raw total is off by more than the tolerance."""
        mass = np.clip(np.asarray(mass, dtype=float), 0.0, None)
        total = math.fsum(mass)
        if abs(1.0 - total) > NORMALISE_TOL:
            raise ArithmeticError(f"pmf total {total!r} is not 1 within {NORMALISE_TOL}")
        return cls(lo, mass / total)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.lo, self.lo + len(self.mass))

    @property
    def hi(self) -> int:
        return self.lo + len(self.mass) - 1

    def __call__(self, k: int) -> float:
        i = k - self.lo
        return float(self.mass[i]) if 0 <= i < len(self.mass) else 0.0

    def moment(self, alpha: int) -> float:
        return math.fsum(self.support.astype(float) ** alpha * self.mass)

    def mean(self) -> float:
        return self.moment(1)

    def var(self) -> float:
        m = self.mean()
        return math.fsum((self.support - m) ** 2 * self.mass)

    def cdf(self, k: int) -> float:
        """``P(X <= k)``."""
        i = k - self.lo
        if i < 0:
            return 0.0
        return math.fsum(self.mass[: i + 1])

    def sf(self, k: int) -> float:
        """``P(X >= k)``."""
        i = max(k - self.lo, 0)
        return math.fsum(self.mass[i:])

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Masses on ``lo..hi`` (zero outside the support)."""
        return np.array([self(k) for k in range(lo, hi + 1)])


def point_mass(k: int) -> PmfTable:
    return PmfTable(k, np.ones(1))


# --- c* ---------------------------------------------------------------------


def c_star(tol: float = 1e-15) -> float:
    """Root of ``c log(2e/c) = 1`` with ``c >= 2`` (about 4.311), by bisection."""
    f = lambda c: c * math.log(2 * math.e / c) - 1.0
    lo, hi = 2.0, 8.0
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- mu_alpha -----------------------------------------------------------------


def mu_terms(n: int, q: float, alpha: int = 1) -> np.ndarray:
    """``((1 - q)/(1 - q^k))^alpha`` for ``k = 2..n``."""
    q = check_q(q)
    k = np.arange(2, n + 1)
    if len(k) == 0:
        return np.empty(0)
    return np.asarray(split_ratio(k, q), dtype=float) ** alpha


def mu_alpha(n: int, q: float, alpha: int = 1) -> float:
    if n < 0 or alpha < 1:
        raise ValueError("need n >= 0 and alpha >= 1")
    return math.fsum(mu_terms(n, q, alpha))


def mu_bounds(n: int, q: float, alpha: int, m: int) -> tuple[float, float]:
    """Sandwich ``lower <= mu_alpha(n, q) <= upper`` built around a cut index ``m``."""
    q = check_q(q, allow_one=False)
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    p = (1.0 - q) ** alpha
    zeta_part = math.fsum(k ** -float(alpha) for k in range(2, m + 1))
    lower = (n - m) * p + zeta_part
    if q == 0.0:
        upper = n * p + zeta_part
        return lower, upper
    one_minus_qm = one_minus_q_pow(m, q)
    upper = (
        n * p
        + alpha * m * p * q**m * one_minus_q_pow(n, q) / one_minus_qm ** (alpha + 1)
        + (m * (1.0 - q) / one_minus_qm) ** alpha * zeta_part
    )
    return lower, upper


def zeta(alpha: float, terms: int = 64) -> float:
    """Riemann zeta for real ``alpha > 1``: partial sum plus Euler-Maclaurin tail."""
    if alpha <= 1:
        raise ValueError("zeta needs alpha > 1")
    N = terms
    head = math.fsum(k**-alpha for k in range(1, N))
    a = alpha
    tail = (
        N ** (1 - a) / (a - 1)
        + 0.5 * N**-a
        + a * N ** (-a - 1) / 12
        - a * (a + 1) * (a + 2) * N ** (-a - 3) / 720
        + a * (a + 1) * (a + 2) * (a + 3) * (a + 4) * N ** (-a - 5) / 30240
    )
    return head + tail


def mu_asymptotic(n: int, q: float, alpha: int = 1) -> tuple[float, float]:
    """``(main term, error scale)`` of ``mu_alpha(n, q)`` for large ``n``."""
    q = check_q(q)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if alpha == 1:
        cap = n if q == 1.0 else min(n, 1.0 / (1.0 - q))
        L = math.log(cap)
        return n * (1.0 - q) + L, math.sqrt(L)
    main = n * (1.0 - q) ** alpha + zeta(alpha) - 1.0
    scale = max(1.0 - q, 1.0 / n) ** ((alpha - 1) / (alpha + 1))
    return main, scale


# --- right depth: MGF, PMF, moments -----------------------------------------


def record_mgf(n: int, q: float, x: float, y: float) -> float:
    """``E[x^C y^M]`` for the record count ``C`` and maximum ``M`` after ``n`` values."""
    q = check_q(q, allow_one=False)
    if q * abs(y) >= 1.0:
        raise ValueError(f"need q|y| < 1, got q={q}, y={y}")
    out = float(y) ** n
    for k in range(1, n + 1):
        # q + (1-q)x - q^k, written to keep q(1 - q^(k-1)) accurate
        num = (1.0 - q) * x + q * one_minus_q_pow(k - 1, q)
        den = 1.0 - q**k * y
        out *= num / den
    return out


def record_pmf(n: int, q: float) -> PmfTable:
    """Law of the right depth (record count minus one) on ``0..n-1``.

    The record-count generating function in ``x`` is a product of factors
    ``a_k + b_k x`` with ``b_k = (1-q)/(1-q^k)``; the ``k = 1`` factor is
    ``x``, so the right depth is the sum of independent Bernoulli(b_k),
    ``k = 2..n``.
    """
    q = check_q(q)
    if n < 1:
        raise ValueError("right depth needs n >= 1")
    b = mu_terms(n, q, 1)
    dist = np.zeros(n)
    dist[0] = 1.0
    for j, bk in enumerate(b, start=1):
        dist[1 : j + 1] = dist[1 : j + 1] * (1.0 - bk) + dist[:j] * bk
        dist[0] *= 1.0 - bk
    return PmfTable.normalised(0, dist)


@lru_cache(maxsize=None)
def stirling2(alpha: int, beta: int) -> int:
    if alpha < 0 or beta < 0:
        raise ValueError("arguments must be non-negative")
    if alpha == beta:
        return 1
    if beta == 0 or beta > alpha:
        return 0
    return beta * stirling2(alpha - 1, beta) + stirling2(alpha - 1, beta - 1)


@dataclass(frozen=True)
class PartitionSignature:
    """Multiplicities ``s = (s_1, ..., s_beta)`` with ``sum i s_i = beta``."""

    s: tuple[int, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.s) or sum(i * v for i, v in enumerate(self.s, start=1)) != len(self.s):
            raise ValueError(f"invalid partition signature {self.s}")

    @property
    def beta(self) -> int:
        return len(self.s)

    @property
    def weight(self) -> int:
        return sum(self.s)


def _parts(beta: int, largest: int) -> Iterator[list[int]]:
    if beta == 0:
        yield []
        return
    for p in range(min(beta, largest), 0, -1):
        for rest in _parts(beta - p, p):
            yield [p] + rest


def partitions(beta: int) -> list[PartitionSignature]:
    """All partitions of ``beta`` as multiplicity signatures (lexicographic in ``s``)."""
    if not 1 <= beta <= MAX_PARTITION:
        raise ValueError(f"partitions supported for 1 <= beta <= {MAX_PARTITION}")
    out = []
    for parts in _parts(beta, beta):
        s = [0] * beta
        for p in parts:
            s[p - 1] += 1
        out.append(PartitionSignature(tuple(s)))
    return sorted(out, key=lambda sig: sig.s)


def nu_beta(n: int, q: float, beta: int, mus: dict | None = None) -> float:
    """Sum of ``prod b_{k_i}`` over ordered ``beta``-tuples of distinct ``k_i`` in ``2..n``."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if mus is None:
        mus = {i: mu_alpha(n, q, i) for i in range(1, beta + 1)}
    total = []
    for sig in partitions(beta):
        term = 1.0
        for i, si in enumerate(sig.s, start=1):
            if si:
                term *= mus[i] ** si / (i**si * math.factorial(si))
        total.append((-1) ** (beta + sig.weight) * term)
    return math.factorial(beta) * math.fsum(total)


def record_moment(n: int, q: float, alpha: int) -> float:
    """``E[R^alpha]`` for the right depth via Stirling numbers and ``nu_beta``.

    ``nu_beta`` vanishes for ``beta > n - 1`` (not enough distinct indices);
    those terms are skipped rather than computed as cancelling sums.
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    top = min(alpha, n - 1)
    if top < 1:
        return 0.0
    mus = {i: mu_alpha(n, q, i) for i in range(1, top + 1)}
    return math.fsum(stirling2(alpha, b) * nu_beta(n, q, b, mus) for b in range(1, top + 1))


def chernoff_bounds(n: int, q: float, c: float) -> tuple[float, float]:
    """Bounds on ``P(R > c mu_1)`` and ``P(R < mu_1 / c)``."""
    if c <= 1:
        raise ValueError("c must be > 1")
    mu1 = mu_alpha(n, q, 1)
    upper = math.exp((c * math.log(math.e / c) - 1.0) * mu1)
    lower = math.exp((math.log(c * math.e) / c - 1.0) * mu1)
    return upper, lower


# --- threshold process --------------------------------------------------------


def threshold_pmf(n: int, s: int, q: float) -> PmfTable:
    """Law of ``#{i <= n : f(i) > s}`` on ``(n-s)_+ .. n`` by the two-term recursion.

    ``N(n, s)`` is ``N(n-1, s-1)`` with probability ``1 - q^s`` (first value
    at most ``s``) and ``1 + N(n-1, s)`` otherwise; ``N(0, s) = 0`` and
    ``N(n, 0) = n``.
    """
    q = check_q(q, allow_one=False)
    if n < 0 or s < 0:
        raise ValueError("need n, s >= 0")
    # level m holds the laws of N(m, t) for t in [s - (n - m), s], as arrays over 0..m
    t_lo = s - n
    prev = {t: _delta(0, 0) for t in range(t_lo, s + 1)}
    for m in range(1, n + 1):
        cur = {}
        for t in range(s - (n - m), s + 1):
            if t <= 0:
                cur[t] = _delta(m, m)
                continue
            stay = one_minus_q_pow(t, q)
            d = np.zeros(m + 1)
            d[:m] += stay * prev[t - 1]
            d[1:] += (1.0 - stay) * prev[t]
            cur[t] = d
        prev = cur
    dist = prev[s]
    lo = max(n - s, 0)
    return PmfTable.normalised(lo, dist[lo:])


def _delta(size: int, at: int) -> np.ndarray:
    d = np.zeros(size + 1)
    d[at] = 1.0
    return d


def q_binomial_table(n: int, q: float) -> np.ndarray:
    """``G[m, k] = [m choose k]_q`` for ``0 <= k <= m <= n`` via Pascal's q-recurrence."""
    G = np.zeros((n + 1, n + 1))
    G[:, 0] = 1.0
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            G[m, k] = G[m - 1, k - 1] + q**k * G[m - 1, k]
    return G


def threshold_pmf_closed(n: int, s: int, q: float) -> PmfTable:
    """Same law from the product / Gaussian-binomial closed form."""
    q = check_q(q, allow_one=False)
    G = q_binomial_table(n, q)
    lo = max(n - s, 0)
    mass = []
    for ell in range(lo, n + 1):
        expo = ell * (ell + s - n)
        prod = 1.0
        for i in range(s + 1 - n + ell, s + 1):
            prod *= one_minus_q_pow(i, q)
        power = 1.0 if expo == 0 else q**expo
        mass.append(power * prod * G[n, ell])
    return PmfTable.normalised(lo, mass)


@dataclass(frozen=True)
class TailBounds:
    """Tail bounds on the threshold count; each value is ``None`` unless its flag is set.

    ``lower_condition`` is the bare condition ``q^(xi+s-n) >= xi (1-q)^2``;
    ``lower_valid`` also needs ``((s-n)_+)! (1-q)^(s-n) <= 1``, without which
    the lower bound can fail (n=1, s=32, q=0.9, xi=1 gives 0.0088 < 1).
    """

    upper: float | None
    upper_valid: bool
    lower: float | None
    lower_valid: bool
    lower_condition: bool = False


def threshold_tail_bounds(n: int, s: int, q: float, xi: int) -> TailBounds:
    """Bounds on ``P(N(n,s) >= xi)`` and ``P(N(n,s) <= xi)``, each reported only when valid."""
    q = check_q(q, allow_one=False)
    if xi < 0:
        raise ValueError("xi must be >= 0")
    if q == 0.0:
        # the validity conditions involve 0^0; the law is a point mass anyway
        return TailBounds(None, False, None, False)
    lq = math.log(q)
    l1q = math.log1p(-q)
    pw = (xi + s - n) * lq
    up_ok = xi >= 1 and pw <= math.log(xi) + l1q
    # at xi = 0 the condition is vacuous, but the bound needs xi + 1 - (n-s)_+ <= 2 xi,
    # which fails when n <= s (e.g. n=1, s=6, q=1/2: P(N <= 0) = 0.98 > 0.53)
    lo_cond = (pw >= math.log(xi) + 2 * l1q) if xi >= 1 else n > s
    # the product of (1 - q^i) is bounded by (1-q)^-(s-n+l) / (s-n)_+!, which needs this
    side = s <= n or math.lgamma(s - n + 1) + (s - n) * l1q <= 0.0
    lo_ok = lo_cond and side
    upper = lower = None
    if up_ok:
        log_up = math.log(n) - math.lgamma(xi + 1) + 0.5 * xi * xi * lq + xi * ((s - n) * lq - l1q) if n > 0 else -math.inf
        upper = math.exp(min(log_up, 700.0))
    if lo_ok:
        log_lo = (
            math.log(2.0)
            + (n - s) * l1q
            - math.lgamma(max(xi - 1, 0) + 1)
            - math.lgamma(max(s - n, 0) + 1)
            + 0.5 * xi * xi * lq
            + xi * ((s - n) * lq - 2 * l1q)
        )
        lower = math.exp(min(log_lo, 700.0))
    return TailBounds(upper, up_ok, lower, lo_ok, lo_cond)
