from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from exdisc import pointset as ps
from exdisc.errors import DeltaOutOfRange, EmptySet, OutOfRange, ParseError


def pts(*xs):
    return tuple(F(x) for x in xs)


def test_new_sorts():
    assert ps.new([F(3, 4), F(1, 4)]).points == pts("1/4", "3/4")


def test_new_accepts_boundary():
    assert ps.new([0, 1]).points == (0, 1)


def test_new_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        ps.new([F(1, 2), 2])


def test_new_rejects_empty():
    with pytest.raises(EmptySet):
        ps.new([])


def test_new_rejects_binary_float():
    with pytest.raises(ParseError):
        ps.new([0.1])


@pytest.mark.parametrize("n, expected", [
    (1, ("1/2",)),
    (2, ("1/4", "3/4")),
    (3, ("1/6", "1/2", "5/6")),
])
def test_centered_grid(n, expected):
    assert ps.centered_grid(n).points == pts(*expected)


def test_translated_grid():
    assert ps.translated_grid(2, 0).points == pts("0", "1/2")
    assert ps.translated_grid(2, F(1, 4)) == ps.centered_grid(2)
    with pytest.raises(DeltaOutOfRange):
        ps.translated_grid(3, F(1, 3))
    with pytest.raises(DeltaOutOfRange):
        ps.translated_grid(3, F(-1, 9))


def test_classify():
    assert ps.classify(ps.new(["1/4", "3/4"])).kind is ps.GridKind.CENTERED
    c = ps.classify(ps.new(["0", "1/2"]))
    assert c.kind is ps.GridKind.TRANSLATED and c.delta == 0
    assert ps.classify(ps.new(["0", "3/4"])).kind is ps.GridKind.OTHER
    # delta = 1/N is outside the family even though it is a shifted grid
    assert ps.classify(ps.new(["1/2", "1"])).kind is ps.GridKind.OTHER


@given(st.integers(1, 40), st.integers(0, 99))
def test_translated_grids_classify(n, k):
    delta = F(k, 100 * n)
    c = ps.classify(ps.translated_grid(n, delta))
    if delta == F(1, 2 * n):
        assert c.kind is ps.GridKind.CENTERED
    else:
        assert c.kind is ps.GridKind.TRANSLATED and c.delta == delta
    assert ps.is_translated_grid(ps.translated_grid(n, delta))


def test_random_set_deterministic():
    a = ps.random_set(3, 7, 1000)
    assert a == ps.random_set(3, 7, 1000)
    assert a.n_points == 3 and list(a.points) == sorted(a.points)
    for seed in range(20):
        (x,) = ps.random_set(1, seed, 2).points
        assert x in (0, F(1, 2), 1)


def test_json_roundtrip():
    p = ps.new(["1/3", "0", "1"])
    assert ps.from_json(p.dumps()) == p
    assert ps.from_json({"points": ["1/2"]}).points == (F(1, 2),)
    assert p.to_json() == {"points": ["0", "1/3", "1"]}


@pytest.mark.parametrize("bad", ["{", "[]", '{"points": 3}', '{"points": ["x"]}'])
def test_json_errors(bad):
    with pytest.raises(ParseError):
        ps.from_json(bad)
