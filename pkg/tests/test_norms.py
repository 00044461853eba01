import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from exdisc import norms as nm
from exdisc.discrepancy import extreme_l2_sq_direct, lp_pow_direct
from exdisc.distribution import dist_D, dist_Dtilde, grid_profile_D, grid_profile_Dtilde
from exdisc.errors import InvalidExponent, ParseError, ToleranceInvalid
from exdisc.pointset import random_set

GD, GDT = grid_profile_D(), grid_profile_Dtilde()
random_sets = st.builds(lambda n, s: random_set(n, s, 24), st.integers(1, 8), st.integers(0, 10**6))


def test_lp_grid_examples():
    assert nm.lp_norm_pow(GD, 2).exact == F(1, 12)
    assert nm.lp_norm_pow(GD, 1).exact == F(1, 4)
    assert nm.lp_norm_pow(GDT, 2).exact == F(1, 6)


@pytest.mark.parametrize("p, d, dt", [(1, "1/4", "1/3"), (2, "1/12", "1/6"), (3, "1/32", "1/10"), (4, "1/80", "1/15")])
def test_minima(p, d, dt):
    assert nm.min_lp_pow_D(p).exact == F(d) == nm.lp_norm_pow(GD, p).exact
    assert nm.min_lp_pow_Dtilde(p).exact == F(dt) == nm.lp_norm_pow(GDT, p).exact


def test_lp_fractional_exponent():
    v = nm.lp_norm_pow(GD, F(1, 2))
    assert v.exact is None
    # 1 / (2^p (p + 1)) at p = 1/2
    assert math.isclose(v.approx, 1 / (math.sqrt(2) * 1.5), rel_tol=1e-13)


def test_invalid_exponent():
    with pytest.raises(InvalidExponent):
        nm.lp_norm_pow(GD, 0)
    with pytest.raises(InvalidExponent):
        nm.lorentz_norm_pow(GD, 1, -1)


@settings(max_examples=30, deadline=None)
@given(random_sets, st.integers(1, 4))
def test_lp_profile_matches_curve(p_set, p):
    assert nm.lp_norm_pow(dist_D(p_set), p).exact == lp_pow_direct(p_set, p)


@settings(max_examples=20, deadline=None)
@given(random_sets)
def test_l2_of_dtilde_matches_cells(p_set):
    assert nm.lp_norm_pow(dist_Dtilde(p_set), 2).exact == extreme_l2_sq_direct(p_set)


def test_lorentz_examples():
    assert nm.lorentz_norm_pow(GD, 2, 2).exact == F(1, 12)
    assert nm.lorentz_norm_pow(GD, 1, 1).exact == F(1, 4)
    assert nm.lorentz_norm_pow(GDT, 2, 2).exact == F(1, 6)
    assert nm.min_lorentz_pow_D(2, 2).exact == F(1, 12)
    assert nm.min_lorentz_pow_Dtilde(1, 1).exact == F(1, 3)
    assert nm.min_lorentz_pow_D(2, 1).exact == F(2, 3)
    assert math.isclose(nm.lorentz_norm_pow(GD, 2, 1).approx, 2 / 3, rel_tol=1e-12)


def test_beta():
    assert nm.beta(2, 2) == F(1, 6)
    assert nm.beta(1, F(3, 2)) == F(2, 3)
    assert math.isclose(nm.beta(F(1, 2), F(1, 2)), math.pi, rel_tol=1e-14)


@settings(max_examples=15, deadline=None)
@given(random_sets, st.integers(1, 3))
def test_lorentz_pp_is_lp(p_set, p):
    prof = dist_Dtilde(p_set)
    assert nm.lorentz_norm_pow(prof, p, p).exact == nm.lp_norm_pow(prof, p).exact


def test_psi_examples():
    k = nm.psi_norm(GD, "power:2", 1e-12)
    assert abs(k.approx - 12 ** -0.5) <= 1e-12
    assert abs(nm.psi_norm(GD, "power:1", 1e-12).approx - 0.25) <= 1e-12
    assert nm.membership_integral(GD, nm.parse_psi("power:1"), F(1, 4)) == 1
    assert abs(nm.min_psi_norm_D("power:2").approx - 12 ** -0.5) <= 1e-12
    assert abs(nm.min_psi_norm_Dtilde("power:1").approx - 1 / 3) <= 1e-12
    assert abs(nm.min_psi_norm_Dtilde("power:2").approx - 6 ** -0.5) <= 1e-12


def test_psi_bracket_contains_value():
    v = nm.psi_norm(GD, "power:2", F(1, 10**6))
    lo, hi = v.bracket
    assert lo * lo < F(1, 12) <= hi * hi
    assert hi - lo <= F(1, 10**6)


@settings(max_examples=15, deadline=None)
@given(random_sets, st.integers(1, 3))
def test_psi_power_is_lp_norm(p_set, p):
    # with psi(s) = s^p the defining integral is ||f||_p^p / K^p
    want = float(lp_pow_direct(p_set, p)) ** (1 / p)
    got = nm.psi_norm(dist_D(p_set), f"power:{p}", 1e-10)
    assert abs(got.approx - want) <= 1e-9


@pytest.mark.parametrize("name", sorted(nm.PSI_PRESETS))
def test_presets_match_minimum_solvers(name):
    tol = F(1, 10**12)
    assert abs(nm.psi_norm(GD, name, tol).approx - nm.min_psi_norm_D(name, tol).approx) <= 2e-12
    assert abs(nm.psi_norm(GDT, name, tol).approx - nm.min_psi_norm_Dtilde(name, tol).approx) <= 2e-12


def test_psi_antiderivatives():
    psi = nm.parse_psi("huber")
    for x in (F(1, 3), F(1), F(5, 2)):
        h = F(1, 10**9)
        # Psi' = psi and T' = Psi, checked by exact symmetric difference on quadratic/cubic pieces
        assert abs((psi.Psi(x + h) - psi.Psi(x - h)) / (2 * h) - psi.psi(x)) < F(1, 10**8)
        assert abs((psi.T(x + h) - psi.T(x - h)) / (2 * h) - psi.Psi(x)) < F(1, 10**8)
    assert psi.psi(0) == psi.Psi(0) == psi.T(0) == 0


def test_parse_psi_forms():
    assert nm.parse_psi("poly:0,1,1").psi(2) == 6
    j = nm.parse_psi('{"knots": ["0", "1"], "pieces": [["0", "1"], ["-1", "2"]]}')
    assert j.psi(3) == 5
    for bad in ("power:x", "nonsense", "poly:1,1", '{"knots": ["0"], "pieces": [["0", "-1"]]}'):
        with pytest.raises(ParseError):
            nm.parse_psi(bad)


def test_tolerance_validation():
    with pytest.raises(ToleranceInvalid):
        nm.psi_norm(GD, "power:2", 0)
    with pytest.raises(ToleranceInvalid):
        nm.min_psi_norm_D("power:2", -1e-3)
