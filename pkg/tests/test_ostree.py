import pytest
from hypothesis import given, strategies as st

from mallows_trees.ostree import OrderStatisticIndex


def test_kth_free_on_fresh_index():
    idx = OrderStatisticIndex(10)
    assert [idx.kth_free(k) for k in range(1, 11)] == list(range(1, 11))


def test_take_shifts_ranks():
    idx = OrderStatisticIndex(6)
    idx.take(2)
    idx.take(5)
    assert [idx.kth_free(k) for k in range(1, 5)] == [1, 3, 4, 6]
    assert idx.free_count == 4


def test_errors():
    idx = OrderStatisticIndex(3)
    with pytest.raises(IndexError):
        idx.kth_free(4)
    with pytest.raises(ValueError):
        idx.kth_free(0)
    idx.take(1)
    with pytest.raises(ValueError):
        idx.take(1)


def test_growable_extends_past_capacity():
    idx = OrderStatisticIndex(2, growable=True)
    assert idx.take_kth(5) == 5
    assert idx.take_kth(1) == 1
    assert idx.kth_free(4) == 6
    assert not idx.is_free(5)


@given(st.lists(st.integers(1, 40), max_size=60), st.booleans())
def test_matches_sorted_list_model(ranks, growable):
    cap = 5 if growable else 40
    idx = OrderStatisticIndex(cap, growable=growable)
    free = list(range(1, 200))
    for k in ranks:
        if not growable and k > idx.free_count:
            continue
        assert idx.take_kth(k) == free.pop(k - 1)
