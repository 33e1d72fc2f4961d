"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from enriched_qsym.coeff import IntPoly, RatFunc
from enriched_qsym.combinat import SubsetIndex

small_ints = st.integers(min_value=-6, max_value=6)
int_polys = st.lists(small_ints, max_size=5).map(IntPoly)
nonzero_polys = int_polys.filter(bool)
ratfuncs = st.builds(lambda n, d: RatFunc(n, d), int_polys, nonzero_polys)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def compositions(draw, max_weight=6, min_weight=0):
    w = draw(st.integers(min_value=min_weight, max_value=max_weight))
    parts = []
    while w:
        p = draw(st.integers(min_value=1, max_value=w))
        parts.append(p)
        w -= p
    return tuple(parts)


@st.composite
def subset_indices(draw, max_s=5, min_s=1):
    s = draw(st.integers(min_value=min_s, max_value=max_s))
    members = draw(st.frozensets(st.integers(min_value=1, max_value=max(s - 1, 1)))) if s > 1 else frozenset()
    return SubsetIndex(s, members)


@st.composite
def permutations(draw, max_n=5, min_n=1):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return tuple(draw(st.permutations(range(1, n + 1))))
