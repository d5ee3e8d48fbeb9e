"""The b-model value stream, its record/maximum chain and the threshold process.

Row ``i`` of the Bernoulli(1 - q) matrix restricted to the unused columns
is still i.i.d. Bernoulli(1 - q), so the first hit among unused columns is
the ``(G + 1)``-th smallest unused column with ``G ~ Geometric(1 - q)``.
That is how :class:`BStream` draws values; no matrix is stored.

Convention: the chain counts records ``C_n``. The right depth of the tree
built from the stream is ``C_n - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import rm_chain_kernel
from .ostree import OrderStatisticIndex
from .qmath import check_q, geometric_from_uniform


def _gen(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


class BStream:
    """Lazy b-model stream ``f(1), f(2), ...`` of distinct positive integers."""

    def __init__(self, q: float, capacity: int = 64):
        self.q = check_q(q, allow_one=False)
        self.used = OrderStatisticIndex(capacity, growable=True)
        self.step = 0
        self.maximum = 0

    def next_value(self, rng) -> int:
        g = geometric_from_uniform(self.q, _gen(rng).random())
        value = self.used.take_kth(g + 1)
        self.step += 1
        if value > self.maximum:
            self.maximum = value
        return value

    def take(self, n: int, rng) -> list[int]:
        rng = _gen(rng)
        return [self.next_value(rng) for _ in range(n)]


def next_value(stream: BStream, rng) -> int:
    return stream.next_value(rng)


def bstream_values(n: int, q: float, rng, size: int) -> np.ndarray:
    """First ``n`` stream values for ``size`` independent streams, shape ``(size, n)``.

    Vectorised over streams: the ``(G + 1)``-th unused value is found by
    walking the sorted used values and bumping the candidate past each one.
    """
    q = check_q(q, allow_one=False)
    rng = _gen(rng)
    g = geometric_from_uniform(q, rng.random((size, n)))
    out = np.empty((size, n), dtype=np.int64)
    used = np.empty((size, 0), dtype=np.int64)
    for i in range(n):
        v = g[:, i] + 1
        for j in range(i):
            v = v + (used[:, j] <= v)
        out[:, i] = v
        used = np.sort(np.concatenate([used, v[:, None]], axis=1), axis=1)
    return out


@dataclass(frozen=True)
class RMState:
    """Record count and running maximum after ``step`` stream values."""

    records: int
    maximum: int
    step: int

    @property
    def right_depth(self) -> int:
        if self.step < 1:
            raise ValueError("right depth needs at least one value")
        return self.records - 1


def chain_uniforms(n: int, rng) -> tuple[np.ndarray, np.ndarray]:
    rng = _gen(rng)
    return rng.random(n), rng.random(n)


def rm_chain_reference(n: int, q: float, u_stay: np.ndarray, u_jump: np.ndarray) -> tuple[int, int]:
    """Plain-Python chain on given uniforms; the compiled kernel must agree exactly."""
    records, maximum = 0, 0
    lq = math.log(q) if q > 0.0 else 0.0
    for step in range(n):
        # a record happens iff the geometric gap skips all maximum - step unused slots below the max
        if u_stay[step] < math.pow(q, maximum - step):
            records += 1
            maximum += 1 if q == 0.0 else 1 + int(math.floor(math.log1p(-u_jump[step]) / lq))
    return records, maximum


def simulate_rm_chain(n: int, q: float, rng) -> RMState:
    q = check_q(q, allow_one=False)
    if n < 0:
        raise ValueError("n must be non-negative")
    u_stay, u_jump = chain_uniforms(n, rng)
    records, maximum = rm_chain_kernel(n, q, u_stay, u_jump)
    return RMState(int(records), int(maximum), n)


def stream_records(values) -> RMState:
    """Record count and maximum of an explicit value sequence."""
    records, maximum = 0, 0
    for v in values:
        if v > maximum:
            records += 1
            maximum = v
    return RMState(records, maximum, len(values))


def threshold_count(n: int, s: int, q: float, rng) -> int:
    """``#{i <= n : f(i) > s}`` for a fresh stream."""
    if s < 0:
        raise ValueError("s must be non-negative")
    stream = BStream(q)
    rng = _gen(rng)
    return sum(stream.next_value(rng) > s for _ in range(n))


def threshold_count_batch(n: int, s: int, q: float, rng, size: int) -> np.ndarray:
    if s < 0:
        raise ValueError("s must be non-negative")
    return (bstream_values(n, q, rng, size) > s).sum(axis=1)


def subtree_identity_samples(n: int, m: int, q: float, rng) -> tuple[int, int]:
    """One draw of each side of ``|T_n(1^{C_m})| =d N*(n - m, M_m - m)``.

    Left: the number of the first ``n`` values above the maximum of the
    first ``m`` (these fill the right subtree hanging below the current
    rightmost node). Right: a fresh stream gives ``M_m``, then an
    independent stream is thresholded at ``M_m - m`` for ``n - m`` steps.
    """
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    rng = _gen(rng)
    stream = BStream(q)
    values = stream.take(n, rng)
    m_max = max(values[:m], default=0)
    direct = sum(v > m_max for v in values[m:])
    prefix = BStream(q)
    prefix.take(m, rng)
    fresh = threshold_count(n - m, prefix.maximum - m, q, rng)
    return direct, fresh


def m_threshold(n: int, q: float) -> int:
    """``min{l >= 0 : l(1 - q) + log l >= n(1 - q)}`` with ``log 0 = -inf``."""
    q = check_q(q)
    target = n * (1.0 - q)

    def ok(ell: int) -> bool:
        return ell > 0 and ell * (1.0 - q) + math.log(ell) >= target

    lo, hi = 0, max(n, 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo
