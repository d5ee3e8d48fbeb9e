"""Compiled inner loops for the large Monte Carlo runs.

Each kernel consumes uniforms produced by a numpy Generator in the same
order as the pure-Python reference in :mod:`size_process` /
:mod:`record_chain`, so the two are checked against each other exactly.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .qmath import UNIFORM_LIMIT


@njit(cache=True, nogil=True)
def left_size_kernel(size, q, u):
    if size <= 1 or q == 0.0:
        return 0
    if q == 1.0 or (1.0 - q) * size < UNIFORM_LIMIT:
        k = int(size * u)
    else:
        lq = math.log(q)
        k = int(math.floor(math.log1p(u * math.expm1(size * lq)) / lq))
    if k < 0:
        return 0
    if k >= size:
        return size - 1
    return k


@njit(cache=True, nogil=True)
def tree_height_kernel(n, q, u):
    """Height of the size-process tree; one uniform per node, preorder, left first."""
    if n == 0:
        return -1
    sizes = np.empty(n, dtype=np.int64)
    depths = np.empty(n, dtype=np.int64)
    top = 0
    sizes[0] = n
    depths[0] = 0
    top = 1
    idx = 0
    best = 0
    while top > 0:
        top -= 1
        s = sizes[top]
        d = depths[top]
        if d > best:
            best = d
        k = left_size_kernel(s, q, u[idx])
        idx += 1
        r = s - 1 - k
        if r > 0:
            sizes[top] = r
            depths[top] = d + 1
            top += 1
        if k > 0:
            sizes[top] = k
            depths[top] = d + 1
            top += 1
    return best


@njit(cache=True, nogil=True)
def rm_chain_kernel(n, q, u_stay, u_jump):
    """(records, maximum) after ``n`` steps of the record/maximum chain."""
    records = 0
    maximum = 0
    lq = math.log(q) if q > 0.0 else 0.0
    for step in range(n):
        if u_stay[step] < math.pow(q, maximum - step):
            records += 1
            if q == 0.0:
                maximum += 1
            else:
                maximum += 1 + int(math.floor(math.log1p(-u_jump[step]) / lq))
    return records, maximum
