"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def int_matrices(n: int, cols: int | None = None, elements=small_ints):
    cols = n if cols is None else cols
    return st.lists(st.lists(elements, min_size=cols, max_size=cols), min_size=n, max_size=n)


def square_sizes(lo: int = 1, hi: int = 5):
    return st.integers(min_value=lo, max_value=hi)
