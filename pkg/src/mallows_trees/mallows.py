"""Mallows(n, q) permutations: inversions, normaliser, exact pmf and samplers.

Only ``q`` in ``[0, 1]`` is evaluated directly. A Mallows(n, q) permutation
with ``q > 1`` is the :func:`reverse` of a Mallows(n, 1/q) one.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .ostree import OrderStatisticIndex
from .qmath import check_q, one_minus_q_pow, truncated_geometric, truncated_geometric_array

Permutation = tuple[int, ...]


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def validate_permutation(perm: Sequence[int]) -> Permutation:
    perm = tuple(int(v) for v in perm)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"not a permutation of 1..{len(perm)}: {perm!r}")
    return perm


def inversions(perm: Sequence[int]) -> int:
    """Number of pairs ``i < j`` with ``perm[i] > perm[j]`` (merge count)."""
    values = list(perm)
    count = 0
    width = 1
    n = len(values)
    buf = values[:]
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if values[i] <= values[j]:
                    buf[k] = values[i]
                    i += 1
                else:
                    buf[k] = values[j]
                    count += mid - i
                    j += 1
                k += 1
            buf[k:hi] = values[i:mid] if i < mid else values[j:hi]
        values, buf = buf, values
        width *= 2
    return count


def log_mallows_normalizer(n: int, q: float) -> float:
    """``log Z_{n,q}``; ``Z`` is the q-factorial ``prod_k (1 - q^k)/(1 - q)``."""
    q = check_q(q)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n <= 1 or q == 0.0:
        return 0.0
    if q == 1.0:
        return math.lgamma(n + 1)
    k = np.arange(1, n + 1)
    return float(np.sum(np.log(one_minus_q_pow(k, q) / -math.expm1(math.log(q)))))


def mallows_normalizer(n: int, q: float) -> float:
    return math.exp(log_mallows_normalizer(n, q))


def mallows_pmf(perm: Sequence[int], q: float) -> float:
    perm = validate_permutation(perm)
    q = check_q(q)
    inv = inversions(perm)
    if q == 0.0:
        return 1.0 if inv == 0 else 0.0
    return math.exp(inv * math.log(q) - log_mallows_normalizer(len(perm), q))


def reverse(perm: Sequence[int]) -> Permutation:
    """``(n+1-perm[0], ..., n+1-perm[-1])``: maps Mallows(q) to Mallows(1/q)."""
    n = len(perm)
    return tuple(n + 1 - int(v) for v in perm)


def sample_mallows(n: int, q: float, rng, size: int | None = None):
    """Draw from Mallows(n, q) by truncated-geometric insertion.

    Position ``i`` receives the k-th smallest value not used yet, where
    ``k - 1`` is truncated geometric on the ``n - i + 1`` remaining ranks.
    With ``size`` given, returns an ``(size, n)`` int array of independent
    draws (vectorised over draws, intended for small ``n``).
    """
    q = check_q(q)
    rng = as_generator(rng)
    if size is not None:
        return _sample_mallows_batch(n, q, rng, size)
    if n == 0:
        return ()
    index = OrderStatisticIndex(n)
    u = rng.random(n)
    out = []
    for i in range(n):
        k = truncated_geometric(n - i, q, u[i])
        out.append(index.take_kth(k + 1))
    return tuple(out)


def _sample_mallows_batch(n: int, q: float, rng: np.random.Generator, size: int) -> np.ndarray:
    out = np.empty((size, n), dtype=np.int64)
    remaining = np.tile(np.arange(1, n + 1, dtype=np.int64), (size, 1))
    rows = np.arange(size)
    u = rng.random((size, n))
    for i in range(n):
        m = n - i
        k = truncated_geometric_array(m, q, u[:, i])
        out[:, i] = remaining[rows, k]
        keep = np.arange(m)[None, :] != k[:, None]
        remaining = remaining[keep].reshape(size, m - 1)
    return out


def ranks(values: Sequence[int]) -> Permutation:
    """Relative ranks (1-based) of distinct values, e.g. (4, 1, 9) -> (2, 1, 3)."""
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0] * len(values)
    for r, i in enumerate(order, start=1):
        out[i] = r
    return tuple(out)


def sample_mallows_bmodel(n: int, q: float, rng, size: int | None = None):
    """Draw from Mallows(n, q) by ranking the first ``n`` values of a b-model stream."""
    from .record_chain import BStream, bstream_values

    q = check_q(q, allow_one=False)
    rng = as_generator(rng)
    if size is not None:
        values = bstream_values(n, q, rng, size)
        return np.argsort(np.argsort(values, axis=1), axis=1) + 1
    stream = BStream(q)
    return ranks([stream.next_value(rng) for _ in range(n)])
