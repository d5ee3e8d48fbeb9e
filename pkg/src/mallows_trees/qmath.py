"""Numerically careful q-arithmetic shared by samplers and closed forms.

Everything here takes ``q`` in ``[0, 1]``. Powers are evaluated as
``exp(k * log q)`` and differences ``1 - q**k`` through ``expm1`` so that
nothing cancels when ``q`` is close to one.
"""

from __future__ import annotations

import math

import numpy as np

# Below this value of (1 - q) * size the q < 1 split formula has lost all
# precision; its limit (the uniform split) is used instead.
UNIFORM_LIMIT = 1e-12


def check_q(q: float, allow_one: bool = True) -> float:
    q = float(q)
    if not (0.0 <= q <= 1.0) or (q == 1.0 and not allow_one):
        hi = "1]" if allow_one else "1)"
        raise ValueError(f"q must lie in [0, {hi}, got {q!r}; reverse the permutation and use 1/q for q > 1")
    return q


def one_minus_q_pow(k, q: float):
    """``1 - q**k`` without cancellation (scalar or array ``k``)."""
    if q == 0.0:
        return np.where(np.asarray(k) > 0, 1.0, 0.0) if np.ndim(k) else (1.0 if k > 0 else 0.0)
    if q == 1.0:
        return np.zeros(np.shape(k)) if np.ndim(k) else 0.0
    lq = math.log(q)
    if np.ndim(k):
        return -np.expm1(np.asarray(k, dtype=float) * lq)
    return -math.expm1(k * lq)


def split_ratio(k, q: float):
    """``(1 - q) / (1 - q**k)`` for ``k >= 1``, with the q -> 1 limit ``1/k``."""
    if q == 1.0:
        return 1.0 / np.asarray(k, dtype=float) if np.ndim(k) else 1.0 / k
    if q == 0.0:
        return np.ones(np.shape(k)) if np.ndim(k) else 1.0
    lq = math.log(q)
    if np.ndim(k):
        k = np.asarray(k, dtype=float)
        return np.expm1(lq) / np.expm1(k * lq)
    return math.expm1(lq) / math.expm1(k * lq)


def truncated_geometric(size: int, q: float, u: float) -> int:
    """Inverse-CDF draw of ``K`` on ``{0..size-1}`` with ``P(K=k) ∝ q**k``.

    ``u`` is a uniform in ``[0, 1)``. For ``q = 1`` the law is uniform.
    """
    if size <= 1 or q == 0.0:
        return 0
    if q == 1.0 or (1.0 - q) * size < UNIFORM_LIMIT:
        k = int(size * u)
    else:
        lq = math.log(q)
        k = int(math.floor(math.log1p(u * math.expm1(size * lq)) / lq))
    if k < 0:
        return 0
    return size - 1 if k >= size else k


def truncated_geometric_array(size, q: float, u: np.ndarray) -> np.ndarray:
    """Vectorised :func:`truncated_geometric`; ``size`` may be an array."""
    u = np.asarray(u, dtype=float)
    size = np.broadcast_to(np.asarray(size, dtype=np.int64), u.shape)
    if q == 0.0:
        return np.zeros(u.shape, dtype=np.int64)
    if q == 1.0:
        k = np.floor(size * u)
    else:
        lq = math.log(q)
        k = np.floor(np.log1p(u * np.expm1(size * lq)) / lq)
        flat = (1.0 - q) * size < UNIFORM_LIMIT
        if flat.any():
            k = np.where(flat, np.floor(size * u), k)
    return np.clip(k, 0, np.maximum(size - 1, 0)).astype(np.int64)


def geometric_from_uniform(q: float, u):
    """Geometric(1 - q) on ``{0, 1, ...}`` from a uniform in ``[0, 1)``."""
    if q == 0.0:
        return np.zeros(np.shape(u), dtype=np.int64) if np.ndim(u) else 0
    check_q(q, allow_one=False)
    lq = math.log(q)
    if np.ndim(u):
        return np.floor(np.log1p(-np.asarray(u)) / lq).astype(np.int64)
    return int(math.floor(math.log1p(-u) / lq))
