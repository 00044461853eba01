"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction as F

from hypothesis import strategies as st

from exdisc.piecewise import make_step

small_frac = st.builds(F, st.integers(-16, 16), st.sampled_from([1, 2, 3, 4, 8]))
pos_frac = st.builds(F, st.integers(1, 8), st.sampled_from([1, 2, 4]))


@st.composite
def intervals(draw, max_len=4):
    a = draw(small_frac)
    return a, a + draw(pos_frac) * F(max_len, 8)


@st.composite
def blocks(draw, nonneg=True, max_blocks=4):
    """Raw (intervals, values) of a step function, possibly overlapping."""
    k = draw(st.integers(1, max_blocks))
    ivs = [draw(intervals()) for _ in range(k)]
    vals = [draw(pos_frac if nonneg else small_frac) for _ in range(k)]
    return ivs, vals


def steps(nonneg=True, max_blocks=4):
    return blocks(nonneg, max_blocks).map(lambda b: make_step(*b))
