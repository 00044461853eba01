"""One- and two-parameter discrepancy functions and their closed forms.

D(t) counts points strictly below t, minus N t.  The two-parameter function
is taken on the full unit square as D(t2) - D(t1).
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import List, Tuple

from . import poly as P
from .errors import OutOfRange
from .piecewise import PiecewisePoly
from .pointset import PointSet


class Region(enum.Enum):
    TRIANGLE = "triangle"
    SQUARE = "square"


def _check_unit(t) -> Fraction:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise OutOfRange(f"t={t} outside [0, 1]")
    return t


def eval_D(ps: PointSet, t) -> Fraction:
    t = _check_unit(t)
    return sum(1 for x in ps.points if x < t) - ps.n_points * t


def eval_Dtilde(ps: PointSet, t1, t2) -> Fraction:
    return eval_D(ps, t2) - eval_D(ps, t1)


def cells(ps: PointSet) -> List[Tuple[Fraction, Fraction, int]]:
    """The N+1 intervals (x_{n-1}, x_n) with x_{-1}=0, x_N=1, tagged with n.

    On the n-th interval D(t) = n - N t.  Degenerate intervals are kept so
    that indices stay aligned with n.
    """
    xs = (Fraction(0),) + ps.points + (Fraction(1),)
    return [(xs[n], xs[n + 1], n) for n in range(ps.n_points + 1)]


def curve_of_D(ps: PointSet) -> PiecewisePoly:
    n_pts = ps.n_points
    return PiecewisePoly.from_pieces(
        (a, b, P.make((n, -n_pts))) for a, b, n in cells(ps)
    )


def _limits(ps: PointSet) -> List[Fraction]:
    """One-sided limits of D at the ends of every non-degenerate piece."""
    out = []
    for a, b, p in curve_of_D(ps).intervals():
        out.append(P.evaluate(p, a))
        out.append(P.evaluate(p, b))
    return out


def star_discrepancy_direct(ps: PointSet) -> Fraction:
    return max(abs(v) for v in _limits(ps))


def closed_form_star(ps: PointSet) -> Fraction:
    n = ps.n_points
    return n * max(abs(x - Fraction(2 * k + 1, 2 * n)) for k, x in enumerate(ps.points)) + Fraction(1, 2)


def closed_form_l2_sq(ps: PointSet) -> Fraction:
    """Squared L2 norm of D."""
    n = ps.n_points
    return n * sum((x - Fraction(2 * k + 1, 2 * n)) ** 2 for k, x in enumerate(ps.points)) + Fraction(1, 12)


def l2_sq_direct(ps: PointSet) -> Fraction:
    d = curve_of_D(ps)
    return (d * d).integrate(0, 1)


def lp_pow_direct(ps: PointSet, p: int) -> Fraction:
    """Integral of |D|^p over [0, 1] for a positive integer p, from the curve."""
    if p < 1 or int(p) != p:
        raise ValueError("p must be a positive integer")
    total = Fraction(0)
    for a, b, piece in curve_of_D(ps).intervals():
        cuts = [a] + P.roots_in(piece, a, b, Fraction(0)) + [b]
        for lo, hi in zip(cuts, cuts[1:]):
            sign = 1 if P.evaluate(piece, (lo + hi) / 2) >= 0 else -1
            total += P.definite(P.power(P.scale(piece, sign), int(p)), lo, hi)
    return total


def closed_form_extreme_star(ps: PointSet) -> Fraction:
    n = ps.n_points
    offs = [Fraction(k, n) - x for k, x in enumerate(ps.points)]
    return 1 + n * max(offs) - n * min(offs)


def extreme_star_direct(ps: PointSet) -> Fraction:
    lim = _limits(ps)
    return max(lim) - min(lim)


def closed_form_extreme_l2_sq(ps: PointSet, region=Region.TRIANGLE) -> Fraction:
    """Squared extreme L2 discrepancy over the triangle t1 <= t2 or the full square."""
    region = Region(region)
    n = ps.n_points
    xs = ps.points
    s = sum(
        (xs[i] - xs[j] - Fraction(i - j, n)) ** 2
        for i in range(n)
        for j in range(n)
    )
    tri = Fraction(1, 12) + s / 2
    return tri if region is Region.TRIANGLE else 2 * tri


def extreme_l2_sq_direct(ps: PointSet) -> Fraction:
    """Double integral of (D(t2) - D(t1))^2 over [0,1]^2, cell by cell.

    On a cell D~ = (j - i) - N t2 + N t1 is affine; with uniform t1, t2 on the
    cell sides its square integrates to area * (mean^2 + variance).
    """
    n = ps.n_points
    cs = [(a, b, k) for a, b, k in cells(ps) if b > a]
    total = Fraction(0)
    for a1, b1, i in cs:
        w1, m1 = b1 - a1, (a1 + b1) / 2
        for a2, b2, j in cs:
            w2, m2 = b2 - a2, (a2 + b2) / 2
            mean = (j - i) - n * m2 + n * m1
            var = n * n * (w1 * w1 + w2 * w2) / 12
            total += w1 * w2 * (mean * mean + var)
    return total
