import numpy as np
import pytest
from hypothesis import given, strategies as st

from mallows_trees.bst import (
    build_bst,
    empty_tree,
    height,
    mirror,
    node_present,
    right_depth,
    rightmost_decomposition,
    tree_from_addresses,
    tree_from_json,
    tree_to_json,
)

FIG1 = (4, 1, 9, 7, 2, 6, 12, 8)
seqs = st.lists(st.integers(1, 10_000), unique=True, max_size=40)


def label(t, addr):
    return int(t.labels[t.find(addr)])


def test_figure_one_tree():
    t = build_bst(FIG1)
    assert label(t, "01") == 2
    assert label(t, "11") == 12
    assert label(t, "") == 4 and label(t, "1") == 9 and label(t, "10") == 7
    assert height(t) == 3
    assert {a for a in t.addresses() if len(a) == 3} == {"100", "101"}
    assert right_depth(t) == 2
    assert node_present(t, "11") and not node_present(t, "111")


def test_figure_one_decomposition():
    # left subtrees along the rightmost path: {1, 2}, {7, 6, 8}, empty
    dec = rightmost_decomposition(build_bst(FIG1))
    assert [(k, s) for k, s, _ in dec] == [(0, 2), (1, 3), (2, 0)]
    assert sum(s + 1 for _, s, _ in dec) == len(FIG1)


def test_sorted_input_is_right_path():
    n = 7
    t = build_bst(range(1, n + 1))
    assert t.shape() == frozenset("1" * k for k in range(n))
    assert height(t) == right_depth(t) == n - 1
    assert rightmost_decomposition(t) == [(k, 0, -1) for k in range(n)]


def test_empty_and_single():
    e = build_bst(())
    assert height(e) == -1 and not node_present(e, "")
    with pytest.raises(ValueError):
        right_depth(e)
    with pytest.raises(ValueError):
        rightmost_decomposition(e)
    s = build_bst((5,))
    assert height(s) == 0 and right_depth(s) == 0
    assert rightmost_decomposition(s) == [(0, 0, -1)]


def test_duplicates_rejected():
    with pytest.raises(ValueError):
        build_bst((3, 1, 3))


def test_bad_address():
    with pytest.raises(ValueError):
        node_present(build_bst((1,)), "2")


def naive_bst(seq):
    """Insertion one element at a time, nodes as address -> label."""
    nodes = {}
    for v in seq:
        a = ""
        while a in nodes:
            a += "0" if v < nodes[a] else "1"
        nodes[a] = v
    return nodes


@given(seqs)
def test_matches_insertion_model(seq):
    t = build_bst(seq)
    assert dict(zip(t.addresses(), t.labels.tolist())) == naive_bst(seq)


@given(seqs)
def test_invariants(seq):
    t = build_bst(seq)
    assert len(t) == len(seq)
    assert t.in_order_labels() == sorted(seq)
    if seq:
        assert height(t) >= right_depth(t)
        dec = rightmost_decomposition(t)
        assert sum(s + 1 for _, s, _ in dec) == len(seq)
        # node i carries seq[i]: insertion order is recoverable
        assert t.labels.tolist() == list(seq)
        rebuilt = build_bst(t.labels.tolist())
        assert rebuilt.shape() == t.shape()


@given(seqs)
def test_height_decomposition_identity(seq):
    # empty left subtrees have height -1 and contribute the spine depth k
    if not seq:
        return
    t = build_bst(seq)
    dec = rightmost_decomposition(t)
    via_left = max(h + k + 1 for k, _, h in dec)
    assert height(t) == via_left


@given(seqs)
def test_sizes_and_heights_cached_consistently(seq):
    t = build_bst(seq)
    if not seq:
        return
    assert t.sizes[0] == len(seq)
    assert t.subtree_heights[0] == height(t)


@given(seqs)
def test_json_round_trip(seq):
    t = build_bst(seq)
    back = tree_from_json(tree_to_json(t))
    assert back.shape() == t.shape()
    if seq:
        assert sorted(back.in_order_labels()) == sorted(seq)


def test_json_deep_tree_no_recursion_limit():
    t = build_bst(range(1, 5001))
    back = tree_from_json(tree_to_json(t))
    assert height(back) == 4999


def test_tree_from_addresses():
    t = tree_from_addresses({"", "0", "01", "1"})
    assert height(t) == 2 and right_depth(t) == 1
    with pytest.raises(ValueError):
        tree_from_addresses({"", "00"})
    assert tree_from_addresses(set()).empty


def test_mirror():
    t = build_bst((2, 1, 3, 4))
    assert mirror(t).shape() == frozenset({"", "1", "0", "00"})
    assert empty_tree().empty
