"""Mallows permutations and the binary search trees built from them."""

__version__ = "0.1.0"
