"""Binary search trees built from sequences, node addresses, tree statistics.

Nodes of the infinite binary tree are addressed by strings over ``"0"``
(left) and ``"1"`` (right); the root is ``""``. A :class:`LabeledTree` stores
explicit child links in arrays, node 0 being the root. Every parent has a
smaller index than its children, which all traversals below rely on (no
recursion: heights reach ``n - 1``).

The empty tree has height -1, so that
``h(T) = max_k { h(T(1^k 0)) + k + 1 }`` holds with empty left subtrees.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

LEFT = "0"
RIGHT = "1"
NodeAddress = str


def validate_address(addr: str) -> str:
    if any(c not in "01" for c in addr):
        raise ValueError(f"node address must be a string over '0'/'1', got {addr!r}")
    return addr


@dataclass(frozen=True, eq=False)
class LabeledTree:
    """Finite subtree of the infinite binary tree, optionally labelled.

    ``left[i]``/``right[i]`` are child indices or -1. ``labels`` is None for
    shape-only trees; ``sizes`` may be supplied by generators that already
    know them.
    """

    left: np.ndarray
    right: np.ndarray
    labels: np.ndarray | None = None
    _sizes: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.left)

    @property
    def empty(self) -> bool:
        return len(self.left) == 0

    @cached_property
    def parent(self) -> np.ndarray:
        parent = np.full(len(self), -1, dtype=np.int64)
        for side in (self.left, self.right):
            has = side >= 0
            parent[side[has]] = np.nonzero(has)[0]
        return parent

    @cached_property
    def depths(self) -> np.ndarray:
        depth = np.zeros(len(self), dtype=np.int64)
        left, right = self.left, self.right
        for i in range(len(self)):
            d = depth[i] + 1
            if left[i] >= 0:
                depth[left[i]] = d
            if right[i] >= 0:
                depth[right[i]] = d
        return depth

    @cached_property
    def sizes(self) -> np.ndarray:
        if self._sizes is not None:
            return self._sizes
        size = np.ones(len(self), dtype=np.int64)
        left, right = self.left, self.right
        for i in range(len(self) - 1, -1, -1):
            if left[i] >= 0:
                size[i] += size[left[i]]
            if right[i] >= 0:
                size[i] += size[right[i]]
        return size

    @cached_property
    def subtree_heights(self) -> np.ndarray:
        h = np.zeros(len(self), dtype=np.int64)
        left, right = self.left, self.right
        for i in range(len(self) - 1, -1, -1):
            best = -1
            if left[i] >= 0:
                best = h[left[i]]
            if right[i] >= 0 and h[right[i]] > best:
                best = h[right[i]]
            h[i] = best + 1
        return h

    def find(self, addr: NodeAddress) -> int:
        """Index of the node at ``addr``, or -1 when absent."""
        if self.empty:
            return -1
        node = 0
        for c in validate_address(addr):
            node = self.left[node] if c == LEFT else self.right[node]
            if node < 0:
                return -1
        return int(node)

    def address(self, node: int) -> NodeAddress:
        parent = self.parent
        out = []
        while parent[node] >= 0:
            p = parent[node]
            out.append(LEFT if self.left[p] == node else RIGHT)
            node = p
        return "".join(reversed(out))

    def addresses(self) -> list[NodeAddress]:
        """Addresses of all nodes, in node-index order."""
        out = [""] * len(self)
        for i in range(len(self)):
            if self.left[i] >= 0:
                out[self.left[i]] = out[i] + LEFT
            if self.right[i] >= 0:
                out[self.right[i]] = out[i] + RIGHT
        return out

    def shape(self) -> frozenset[str]:
        """Node set as a hashable value; two trees are equal as subsets of T_inf iff shapes match."""
        return frozenset(self.addresses())

    def in_order_labels(self) -> list[int]:
        if self.labels is None:
            raise ValueError("tree carries no labels")
        out, stack = [], []
        node = 0 if not self.empty else -1
        while stack or node >= 0:
            while node >= 0:
                stack.append(node)
                node = self.left[node]
            node = stack.pop()
            out.append(int(self.labels[node]))
            node = self.right[node]
        return out


def empty_tree() -> LabeledTree:
    e = np.empty(0, dtype=np.int64)
    return LabeledTree(e, e.copy(), np.empty(0, dtype=np.int64))


def build_bst(seq: Sequence[int]) -> LabeledTree:
    """BST of ``seq`` by recursive pivoting on the first element.

    Built as a Cartesian tree (keys = values, priorities = positions) in
    O(n log n); node ``i`` holds ``seq[i]``, so node indices record the
    insertion order.
    """
    values = np.asarray(seq, dtype=np.int64).reshape(-1)
    n = len(values)
    if len(np.unique(values)) != n:
        raise ValueError("build_bst needs distinct elements")
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    stack: list[int] = []
    for i in np.argsort(values, kind="stable").tolist():
        last = -1
        while stack and stack[-1] > i:
            last = stack.pop()
        left[i] = last
        if stack:
            right[stack[-1]] = i
        stack.append(i)
    return LabeledTree(left, right, values.copy())


def tree_from_addresses(addresses) -> LabeledTree:
    """Shape-only tree from a parent-closed set of addresses."""
    order = sorted(set(addresses), key=lambda a: (len(a), a))
    index = {a: i for i, a in enumerate(order)}
    if order and order[0] != "":
        raise ValueError("non-empty address set must contain the root")
    left = np.full(len(order), -1, dtype=np.int64)
    right = np.full(len(order), -1, dtype=np.int64)
    for a, i in index.items():
        if not a:
            continue
        p = index.get(a[:-1])
        if p is None:
            raise ValueError(f"address set is not closed under parents: {a!r}")
        (left if a[-1] == LEFT else right)[p] = i
    return LabeledTree(left, right)


def height(tree: LabeledTree) -> int:
    """Maximum node depth; -1 for the empty tree."""
    if tree.empty:
        return -1
    return int(tree.depths.max())


def right_depth(tree: LabeledTree) -> int:
    """Largest ``d`` such that the all-right node ``1^d`` is in the tree."""
    if tree.empty:
        raise ValueError("right depth of the empty tree is undefined")
    d, node = 0, 0
    while tree.right[node] >= 0:
        node = tree.right[node]
        d += 1
    return d


def rightmost_decomposition(tree: LabeledTree) -> list[tuple[int, int, int]]:
    """``(k, |T(1^k 0)|, h(T(1^k 0)))`` for ``k = 0..right_depth``."""
    if tree.empty:
        raise ValueError("empty tree has no rightmost path")
    sizes, heights = tree.sizes, tree.subtree_heights
    out = []
    node, k = 0, 0
    while node >= 0:
        child = tree.left[node]
        if child >= 0:
            out.append((k, int(sizes[child]), int(heights[child])))
        else:
            out.append((k, 0, -1))
        node = tree.right[node]
        k += 1
    return out


def node_present(tree: LabeledTree, addr: NodeAddress) -> bool:
    return tree.find(addr) >= 0


def mirror(tree: LabeledTree) -> LabeledTree:
    """Swap every left and right subtree (labels kept)."""
    return LabeledTree(tree.right.copy(), tree.left.copy(), None if tree.labels is None else tree.labels.copy())


def tree_to_json(tree: LabeledTree) -> str:
    """Nested JSON ``{"label"?, "left"?, "right"?}``; ``null`` for the empty tree.

    Written iteratively because ``json.dumps`` recurses once per level.
    """
    if tree.empty:
        return "null"
    parts: list[str] = []
    # stack items: node index, or a literal string to emit
    stack: list = [0]
    labels = tree.labels
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        fields = []
        if labels is not None:
            fields.append(f'"label": {int(labels[item])}')
        parts.append("{" + ", ".join(fields))
        pending: list = ["}"]
        sep = ", " if fields else ""
        r, l = tree.right[item], tree.left[item]
        if r >= 0:
            pending.append(int(r))
            pending.append(sep + '"right": ' if l < 0 else ', "right": ')
        if l >= 0:
            pending.append(int(l))
            pending.append(sep + '"left": ')
        stack.extend(pending)
    return "".join(parts)


_TOKEN = re.compile(r'\s*(?:(\{)|(\})|(,)|"(label|left|right)"\s*:|(null)|(-?\d+))')


def tree_from_json(text: str) -> LabeledTree:
    """Inverse of :func:`tree_to_json`; iterative, so arbitrarily deep trees are fine."""
    left: list[int] = []
    right: list[int] = []
    labels: list[int] = []
    has_labels = False
    stack: list[int] = []
    key = None
    pos = 0
    text = text.strip()
    if text == "null":
        return empty_tree()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected input at offset {pos}")
        pos = m.end()
        opening, closing, _, field_name, null, number = m.groups()
        if opening:
            i = len(left)
            left.append(-1)
            right.append(-1)
            labels.append(0)
            if stack:
                if key not in ("left", "right"):
                    raise ValueError("object nested outside left/right")
                (left if key == "left" else right)[stack[-1]] = i
            elif i:
                raise ValueError("more than one root object")
            stack.append(i)
            key = None
        elif closing:
            if not stack:
                raise ValueError("unbalanced braces")
            stack.pop()
        elif field_name:
            key = field_name
        elif number:
            if key != "label" or not stack:
                raise ValueError("number outside a label field")
            labels[stack[-1]] = int(number)
            has_labels = True
        elif null:
            key = None
    if stack:
        raise ValueError("unbalanced braces")
    tree = LabeledTree(
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.asarray(labels, dtype=np.int64) if has_labels else None,
    )
    return tree
