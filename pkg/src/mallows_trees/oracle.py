"""Brute-force exact laws for small n.

Tree laws come from enumerating all of S_n: each permutation contributes
``q^Inv / Z`` to the shape of its BST. Enumeration is done once per ``n``
and stored as integer coefficient vectors over the inversion count, so
evaluating at any ``q`` (float or ``Fraction``) is a polynomial evaluation.
With ``Fraction`` inputs every law is exact, which the zero-tolerance
dominance checks rely on.

Two further oracles work directly from the value stream (no closed forms):
the joint law of (record count, maximum) and the threshold count law.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .analytics import PmfTable
from .bst import tree_from_addresses

MAX_N = 9

# interned shapes: id -> (left id, right id); id 0 is the empty tree
_CHILDREN: list[tuple[int, int]] = [(-1, -1)]
_IDS: dict[tuple[int, int], int] = {}


def _intern(left: int, right: int) -> int:
    key = (left, right)
    sid = _IDS.get(key)
    if sid is None:
        sid = len(_CHILDREN)
        _CHILDREN.append(key)
        _IDS[key] = sid
    return sid


@lru_cache(maxsize=None)
def _shape_of(pattern: tuple[int, ...]) -> int:
    if not pattern:
        return 0
    root = pattern[0]
    lo = tuple(v for v in pattern[1:] if v < root)
    hi = tuple(v - root for v in pattern[1:] if v > root)
    return _intern(_shape_of(lo), _shape_of(hi))


@lru_cache(maxsize=None)
def shape_stats(sid: int) -> tuple[int, int, int, int]:
    """``(size, height, right depth, left size)``; height of the empty shape is -1."""
    if sid == 0:
        return 0, -1, -1, 0
    left, right = _CHILDREN[sid]
    ls, lh, _, _ = shape_stats(left)
    rs, rh, rrd, _ = shape_stats(right)
    return 1 + ls + rs, 1 + max(lh, rh), 1 + rrd, ls


@lru_cache(maxsize=None)
def shape_addresses(sid: int) -> frozenset[str]:
    if sid == 0:
        return frozenset()
    out, stack = [], [(sid, "")]
    while stack:
        s, a = stack.pop()
        if s == 0:
            continue
        out.append(a)
        left, right = _CHILDREN[s]
        stack.append((left, a + "0"))
        stack.append((right, a + "1"))
    return frozenset(out)


def shape_children(sid: int) -> tuple[int, int]:
    return _CHILDREN[sid]


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[dict[int, np.ndarray], np.ndarray]:
    """Shape id -> counts of permutations per inversion number, and the Mahonian row."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"enumeration supports 0 <= n <= {MAX_N}")
    top = n * (n - 1) // 2
    if n == 0:
        return {0: np.ones(1, dtype=np.int64)}, np.ones(1, dtype=np.int64)
    perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int8)
    inv = np.zeros(len(perms), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += perms[:, i] > perms[:, j]
    table: dict[int, np.ndarray] = {}
    for row, k in zip(map(tuple, perms.tolist()), inv.tolist()):
        sid = _shape_of(row)
        vec = table.get(sid)
        if vec is None:
            vec = table[sid] = np.zeros(top + 1, dtype=np.int64)
        vec[k] += 1
    mahonian = np.bincount(inv, minlength=top + 1)
    return table, mahonian


def _poly(coeffs: np.ndarray, q):
    """Evaluate an integer polynomial at ``q`` (Horner; exact for Fractions)."""
    acc = Fraction(0) if isinstance(q, Fraction) else 0.0
    for c in coeffs[::-1].tolist():
        acc = acc * q + c
    return acc


def shape_law(n: int, q) -> dict[int, float | Fraction]:
    """Shape id -> probability under MT(n, q)."""
    if not isinstance(q, Fraction):
        q = float(q)
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    table, mahonian = _enumerate(n)
    Z = _poly(mahonian, q)
    return {sid: _poly(vec, q) / Z for sid, vec in table.items()}


@dataclass(frozen=True)
class ExactLaw:
    atoms: dict

    def __post_init__(self):
        total = sum(self.atoms.values())
        if abs(float(total) - 1.0) > 1e-12:
            raise ArithmeticError(f"exact law sums to {float(total)!r}")

    def __getitem__(self, key):
        return self.atoms.get(key, 0)


def exact_tree_distribution(n: int, q) -> ExactLaw:
    """Law of the tree as a node set (frozenset of addresses)."""
    return ExactLaw({shape_addresses(s): p for s, p in shape_law(n, q).items()})


def _statistic_law(n: int, q, which: int) -> dict[int, float | Fraction]:
    out: dict[int, float | Fraction] = {}
    for sid, p in shape_law(n, q).items():
        k = shape_stats(sid)[which]
        out[k] = out.get(k, 0) + p
    return out


def _table(law: dict) -> PmfTable:
    lo, hi = min(law), max(law)
    return PmfTable(lo, np.array([float(law.get(k, 0)) for k in range(lo, hi + 1)]))


def exact_height_law(n: int, q) -> dict:
    return _statistic_law(n, q, 1)


def exact_right_depth_law(n: int, q) -> dict:
    if n < 1:
        raise ValueError("right depth needs n >= 1")
    return _statistic_law(n, q, 2)


def exact_split_law(n: int, q) -> dict:
    if n < 1:
        raise ValueError("split law needs n >= 1")
    return _statistic_law(n, q, 3)


def exact_height_pmf(n: int, q) -> PmfTable:
    return _table(exact_height_law(n, q))


def exact_right_depth_pmf(n: int, q) -> PmfTable:
    return _table(exact_right_depth_law(n, q))


def exact_split_pmf(n: int, q) -> PmfTable:
    # atoms with zero probability (q = 0) are still part of the support 0..n-1
    law = exact_split_law(n, q)
    return PmfTable(0, np.array([float(law.get(k, 0)) for k in range(n)]))


def exact_height_cdf(n: int, q, ell: int):
    """``P(h(T_{n,q}) <= ell)``, exact for Fraction ``q``."""
    law = exact_height_law(n, q)
    return sum((p for k, p in law.items() if k <= ell), Fraction(0) if isinstance(q, Fraction) else 0.0)


def _contains(sid: int, addr: str) -> bool:
    for c in addr:
        if sid == 0:
            return False
        sid = _CHILDREN[sid][0 if c == "0" else 1]
    return sid != 0


def exact_occupancy(n: int, q, addr: str):
    """``P(addr is a node of T_{n,q})``."""
    if any(c not in "01" for c in addr):
        raise ValueError(f"bad address {addr!r}")
    zero = Fraction(0) if isinstance(q, Fraction) else 0.0
    return sum((p for sid, p in shape_law(n, q).items() if _contains(sid, addr)), zero)


@dataclass(frozen=True)
class ConditionalReport:
    n: int
    q: float
    split_sizes: tuple[int, ...]
    max_deviation: float

    @property
    def ok(self) -> bool:
        return self.max_deviation <= 1e-12


def exact_conditional_subtrees(n: int, q) -> ConditionalReport:
    """Check that given the left size ``k`` the two root subtrees are independent MT(k) and MT(n-1-k)."""
    if not 1 <= n <= 7:
        raise ValueError("conditional check supports 1 <= n <= 7")
    law = shape_law(n, q)
    split: dict[int, float] = {}
    joint: dict[tuple[int, int], float] = {}
    for sid, p in law.items():
        left, right = _CHILDREN[sid]
        k = shape_stats(left)[0]
        split[k] = split.get(k, 0) + p
        joint[(left, right)] = joint.get((left, right), 0) + p
    worst = 0.0
    for k, pk in split.items():
        if pk == 0:
            continue
        L = shape_law(k, q)
        R = shape_law(n - 1 - k, q)
        for ls, lp in L.items():
            for rs, rp in R.items():
                cond = joint.get((ls, rs), 0) / pk
                worst = max(worst, abs(float(cond - lp * rp)))
    return ConditionalReport(n, float(q), tuple(sorted(k for k, p in split.items() if p > 0)), worst)


def exact_mallows_probs(n: int, q: float) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """All permutations of ``1..n`` in lexicographic order with their Mallows probabilities."""
    perms = list(itertools.permutations(range(1, n + 1)))
    arr = np.array(perms, dtype=np.int64).reshape(len(perms), n)
    inv = np.zeros(len(perms), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += arr[:, i] > arr[:, j]
    w = float(q) ** inv.astype(float)  # 0.0 ** 0 == 1, so q = 0 keeps the identity
    return perms, w / w.sum()


# --- stream-level oracles -----------------------------------------------------


def stream_record_max_law(n: int, q: float, eps: float = 1e-18) -> np.ndarray:
    """Joint law ``P[C, M]`` of record count and maximum after ``n`` stream values.

    Gaps are enumerated explicitly: ``G = g`` has weight ``(1 - q) q^g``;
    with ``d = M - i`` unused values below the maximum, ``g < d`` lands below
    it and ``g >= d`` gives the record ``M + g - d + 1``. Gaps with
    ``q^g < eps`` are dropped (the result's total mass shows the loss).
    """
    if not 0 <= q < 1:
        raise ValueError("need 0 <= q < 1")
    gmax = 0 if q == 0 else int(math.ceil(math.log(eps) / math.log(q)))
    w = (1.0 - q) * q ** np.arange(gmax + 1) if q > 0 else np.ones(1)
    mmax = n * (gmax + 1)
    P = np.zeros((n + 1, mmax + 1))
    P[0, 0] = 1.0
    for i in range(n):
        nxt = np.zeros_like(P)
        for M in range(i, min(mmax, i * (gmax + 1)) + 1):
            col = P[:, M]
            if not col.any():
                continue
            d = M - i
            for g, wg in enumerate(w):
                if g < d:
                    nxt[:, M] += wg * col
                else:
                    nxt[1:, M + g - d + 1] += wg * col[:-1]
        P = nxt
    return P


def exhaustive_record_mgf(n: int, q: float, x: float, y: float, law: np.ndarray | None = None) -> float:
    """``E[x^C y^M]`` summed over the stream-level joint law."""
    if law is None:
        law = stream_record_max_law(n, q)
    C = np.arange(law.shape[0], dtype=float)[:, None]
    M = np.arange(law.shape[1], dtype=float)[None, :]
    return float((law * x**C * y**M).sum())


def threshold_law_bruteforce(n: int, s: int, q: float) -> PmfTable:
    """Law of ``#{i <= n : f(i) > s}`` from the stream definition, exactly.

    State: the set of used values ``<= s`` and the count so far. Each gap
    landing below ``s`` is its own branch; every gap beyond the free values
    below ``s`` lands above ``s`` and is merged into one branch of weight
    ``q^u`` (``u`` = number of free values ``<= s``).
    """
    states: dict[tuple[frozenset, int], float] = {(frozenset(), 0): 1.0}
    for _ in range(n):
        nxt: dict[tuple[frozenset, int], float] = {}
        for (used, cnt), p in states.items():
            free = [v for v in range(1, s + 1) if v not in used]
            for g, v in enumerate(free):
                key = (used | {v}, cnt)
                nxt[key] = nxt.get(key, 0.0) + p * (1.0 - q) * q**g
            above = q ** len(free) if free else 1.0
            key = (used, cnt + 1)
            nxt[key] = nxt.get(key, 0.0) + p * above
        states = nxt
    out = np.zeros(n + 1)
    for (_, cnt), p in states.items():
        out[cnt] += p
    lo = max(n - s, 0)
    return PmfTable(lo, out[lo:])


def shape_tree(sid: int):
    """The :class:`LabeledTree` for an interned shape id."""
    return tree_from_addresses(shape_addresses(sid))


def exact_occupancy_table(n: int, q) -> dict[str, float | Fraction]:
    """``P(v in T_{n,q})`` for every address ``v`` that can occur at size ``n``."""
    out: dict[str, float | Fraction] = {}
    for sid, p in shape_law(n, q).items():
        for a in shape_addresses(sid):
            out[a] = out.get(a, 0) + p
    return out
