from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from exdisc import discrepancy as d
from exdisc.errors import OutOfRange
from exdisc.pointset import centered_grid, new, random_set, translated_grid


def brute_sup_abs_D(ps, grid=400):
    """sup |D| from one-sided limits at every point plus a fine grid of t."""
    n = ps.n_points
    ts = {F(k, grid) for k in range(grid + 1)} | set(ps.points)
    vals = []
    for t in ts:
        below = sum(1 for x in ps.points if x < t)
        at_most = sum(1 for x in ps.points if x <= t)
        vals += [below - n * t, at_most - n * t]
    return max(abs(v) for v in vals)


random_sets = st.builds(lambda n, s, den: random_set(n, s, den),
                        st.integers(1, 12), st.integers(0, 10**6), st.sampled_from([2, 7, 12, 1000]))


def test_eval_D():
    p = new(["1/2"])
    assert d.eval_D(p, F(1, 2)) == F(-1, 2)
    assert d.eval_D(p, F(3, 4)) == F(1, 4)
    assert d.eval_D(centered_grid(2), 1) == 0
    with pytest.raises(OutOfRange):
        d.eval_D(p, F(5, 4))


def test_eval_Dtilde():
    p = new(["1/2"])
    assert d.eval_Dtilde(p, 0, F(3, 4)) == F(1, 4)
    assert d.eval_Dtilde(p, F(3, 4), 0) == F(-1, 4)
    assert d.eval_Dtilde(p, F(1, 3), F(1, 3)) == 0


def test_curve_of_D():
    g1 = d.curve_of_D(centered_grid(1))
    assert list(g1.intervals()) == [(0, F(1, 2), (0, -1)), (F(1, 2), 1, (1, -1))]
    assert list(d.curve_of_D(new([0])).intervals()) == [(0, 1, (1, -1))]
    g2 = list(d.curve_of_D(centered_grid(2)).intervals())
    assert [p for _, _, p in g2] == [(0, -2), (1, -2), (2, -2)]
    assert [(a, b) for a, b, _ in g2] == [(0, F(1, 4)), (F(1, 4), F(3, 4)), (F(3, 4), 1)]


def test_star_examples():
    for n in range(1, 51):
        assert d.closed_form_star(centered_grid(n)) == F(1, 2)
        assert d.closed_form_l2_sq(centered_grid(n)) == F(1, 12)
    assert d.star_discrepancy_direct(new([0])) == 1
    assert d.star_discrepancy_direct(new([1])) == 1
    assert d.closed_form_star(new([0])) == 1
    assert d.closed_form_star(new([0, 1])) == 1


def test_l2_examples():
    assert d.closed_form_l2_sq(new(["1/2"])) == F(1, 12) == d.l2_sq_direct(new(["1/2"]))
    assert d.closed_form_l2_sq(new([0])) == F(1, 3) == d.l2_sq_direct(new([0]))


def test_extreme_examples():
    for n in range(1, 8):
        for k in range(3):
            g = translated_grid(n, F(k, 3 * n))
            assert d.closed_form_extreme_star(g) == 1
            assert d.closed_form_extreme_l2_sq(g, d.Region.TRIANGLE) == F(1, 12)
            assert d.closed_form_extreme_l2_sq(g, d.Region.SQUARE) == F(1, 6)
    p = new([0, 1])
    assert d.closed_form_extreme_star(p) == 2 == d.extreme_star_direct(p)
    assert d.closed_form_extreme_star(new(["1/2"])) == 1
    assert d.closed_form_extreme_l2_sq(p, "triangle") == F(1, 3)
    assert d.extreme_l2_sq_direct(p) == F(2, 3)


@settings(max_examples=60, deadline=None)
@given(random_sets)
def test_closed_forms_match_oracles(p):
    assert d.closed_form_star(p) == d.star_discrepancy_direct(p)
    assert d.closed_form_l2_sq(p) == d.l2_sq_direct(p)
    assert d.closed_form_extreme_star(p) == d.extreme_star_direct(p)
    assert 2 * d.closed_form_extreme_l2_sq(p, d.Region.TRIANGLE) == d.extreme_l2_sq_direct(p)
    assert d.lp_pow_direct(p, 2) == d.l2_sq_direct(p)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6))
def test_star_against_sampling(n, seed):
    p = random_set(n, seed, 20)
    # the grid contains every breakpoint (denominators divide 400), so the sup is attained
    assert d.closed_form_star(p) == brute_sup_abs_D(p)


def test_lp_pow_direct_p1():
    # |1 - t| on (0,1) integrates to 1/2
    assert d.lp_pow_direct(new([0]), 1) == F(1, 2)
    assert d.lp_pow_direct(centered_grid(3), 1) == F(1, 4)
    with pytest.raises(ValueError):
        d.lp_pow_direct(new([0]), 0)
