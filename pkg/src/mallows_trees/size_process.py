"""Mallows trees in O(n) by recursive subtree-size splitting.

A node holding ``S`` elements sends a truncated-geometric number of them to
its left child (``P(k) ∝ q^k`` on ``0..S-1``) and the rest but one to its
right child; the children are split independently in turn. Every node uses
one uniform ``U_v``; the products ``P_v`` of ``U`` (left steps) and ``1 - U``
(right steps) along the root path drive the almost-sure size bounds checked
by :func:`check_path_bounds`.

Uniforms are consumed in preorder with the left child first. The compiled
:func:`kernels.tree_height_kernel` follows the same order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bst import LabeledTree, empty_tree
from .kernels import tree_height_kernel
from .qmath import check_q, one_minus_q_pow, truncated_geometric


def left_size(S: int, q: float, U: float) -> int:
    """Left-subtree size of a node holding ``S`` elements, from uniform ``U``."""
    if S < 1:
        raise ValueError("S must be >= 1")
    return truncated_geometric(S, q, U)


@dataclass(frozen=True)
class SplitTrail:
    """Per-node record of a generated tree, indexed like the tree's nodes."""

    size: np.ndarray
    uniform: np.ndarray
    product: np.ndarray
    depth: np.ndarray
    log_product: np.ndarray

    def __len__(self) -> int:
        return len(self.size)


def _generate(n: int, q: float, u: np.ndarray, trail: bool):
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    size = np.empty(n, dtype=np.int64)
    product = np.empty(n) if trail else None
    log_product = np.empty(n) if trail else None
    depth = np.empty(n, dtype=np.int64) if trail else None
    # node indices are assigned in preorder, so parents precede children;
    # products underflow on deep paths, so their logs are carried as well
    stack = [(-1, 0, n, 1.0, 0.0, 0)]
    idx = 0
    while stack:
        parent, side, s, p, lp, d = stack.pop()
        i = idx
        idx += 1
        size[i] = s
        if parent >= 0:
            (left if side == 0 else right)[parent] = i
        k = truncated_geometric(s, q, u[i])
        if trail:
            product[i] = p
            log_product[i] = lp
            depth[i] = d
        r = s - 1 - k
        if r > 0:
            stack.append((i, 1, r, p * (1.0 - u[i]), lp + math.log1p(-u[i]), d + 1))
        if k > 0:
            stack.append((i, 0, k, p * u[i], lp + (math.log(u[i]) if u[i] > 0 else -math.inf), d + 1))
    tree = LabeledTree(left, right, None, size)
    if not trail:
        return tree, None
    return tree, SplitTrail(size, u[:n].copy(), product, depth, log_product)


def generate_tree(n: int, q: float, rng, trail: bool = False):
    """MT(n, q) tree (shape only, sizes attached); with ``trail`` also the SplitTrail."""
    q = check_q(q)
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    if n == 0:
        tree = empty_tree()
        e = np.empty(0)
        out = (tree, SplitTrail(e.astype(np.int64), e, e, e.astype(np.int64), e))
        return out if trail else tree
    tree, tr = _generate(n, q, rng.random(n), trail)
    return (tree, tr) if trail else tree


def tree_height_from_uniforms(n: int, q: float, u: np.ndarray) -> int:
    """Height of the generated tree for given uniforms, via the compiled kernel."""
    return int(tree_height_kernel(n, q, u))


def sample_height(n: int, q: float, rng) -> int:
    q = check_q(q)
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    return int(tree_height_kernel(n, q, rng.random(n)))


def path_bounds(trail: SplitTrail, n: int, q: float) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper almost-sure bounds on ``S(v)`` at every trail node.

    For ``q < 1`` both bounds are evaluated from ``log P_v``:
    ``1 - P a = (1 - P) + P q^n`` and ``q^n + P a`` with ``a = 1 - q^n``,
    so neither an underflowing ``P_v`` nor ``q^n`` produces ``log 0``.
    """
    q = check_q(q)
    P, d = trail.product, trail.depth
    if q == 1.0:
        return n * P - d, n * P
    if q == 0.0:
        # left sizes are all 0; both bounds degenerate to S(v) = n - |v| on the right spine
        return n - d.astype(float), n - d.astype(float)
    lq = math.log(q)
    lqn = n * lq
    log_a = math.log(one_minus_q_pow(n, q))
    lp = trail.log_product
    with np.errstate(divide="ignore"):
        log_one_minus_p = np.log(-np.expm1(lp))
    lower = np.logaddexp(log_one_minus_p, lp + lqn) / lq - d
    upper = n - np.logaddexp(lqn, lp + log_a) / lq
    return lower, upper


def check_path_bounds(trail: SplitTrail, n: int, q: float, rtol: float = 1e-9) -> np.ndarray:
    """Per-node truth of ``lower <= S(v) <= upper``.

    The bounds are exact at the root and along extreme paths, where floating
    rounding could flip an equality; a slack of ``rtol * n`` absorbs that.
    """
    lower, upper = path_bounds(trail, n, q)
    slack = rtol * max(n, 1)
    S = trail.size
    return (lower - slack <= S) & (S <= upper + slack)


def coupling_m(n: int, q: float, ell: int) -> int:
    """``floor((1 - q^n) / (1 - q^(ell + 2)))``."""
    q = check_q(q, allow_one=False)
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if n == 0:
        return 0
    return int(math.floor(one_minus_q_pow(n, q) / one_minus_q_pow(ell + 2, q)))
