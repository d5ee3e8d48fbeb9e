"""Order-statistics index: "k-th smallest free position" in O(log n).

A binary indexed (Fenwick) tree over positions ``1..capacity`` holding 1 for
every free position. Selection walks down the implicit tree instead of doing
a binary search over prefix sums.
"""

from __future__ import annotations


class OrderStatisticIndex:
    """Free/used bookkeeping over ``1..capacity`` with k-th-free selection.

    With ``growable=True`` the index behaves as if it covered all positive
    integers: asking for a rank beyond the current number of free slots
    doubles the capacity until the request fits.
    """

    def __init__(self, capacity: int, growable: bool = False):
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        self.growable = growable
        self._used = bytearray(capacity + 1)
        self._n_used = 0
        self._build(capacity)

    def _build(self, capacity: int) -> None:
        tree = [0] * (capacity + 1)
        used = self._used
        for i in range(1, capacity + 1):
            tree[i] += 0 if used[i] else 1
            j = i + (i & -i)
            if j <= capacity:
                tree[j] += tree[i]
        self._tree = tree
        self.capacity = capacity
        top = 1
        while top * 2 <= capacity:
            top *= 2
        self._top = top if capacity else 0

    def _grow(self, needed_free: int) -> None:
        cap = max(self.capacity, 1)
        while cap - self._n_used < needed_free:
            cap *= 2
        self._used.extend(bytearray(cap - self.capacity))
        self._build(cap)

    @property
    def free_count(self) -> int:
        return self.capacity - self._n_used

    def is_free(self, pos: int) -> bool:
        return 1 <= pos <= self.capacity and not self._used[pos]

    def kth_free(self, k: int) -> int:
        """Position of the k-th smallest free slot (k is 1-based)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if k > self.free_count:
            if not self.growable:
                raise IndexError(f"only {self.free_count} free positions, asked for #{k}")
            self._grow(k)
        tree = self._tree
        n = self.capacity
        pos = 0
        step = self._top
        while step:
            nxt = pos + step
            if nxt <= n and tree[nxt] < k:
                pos = nxt
                k -= tree[nxt]
            step >>= 1
        return pos + 1

    def take(self, pos: int) -> None:
        if not self.is_free(pos):
            raise ValueError(f"position {pos} is not free")
        self._used[pos] = 1
        self._n_used += 1
        tree = self._tree
        n = self.capacity
        while pos <= n:
            tree[pos] -= 1
            pos += pos & -pos

    def take_kth(self, k: int) -> int:
        pos = self.kth_free(k)
        self.take(pos)
        return pos
