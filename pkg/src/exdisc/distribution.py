"""Exact distribution profiles alpha -> P(|f| < alpha) of the discrepancy functions.

Profiles are stored through their survival function S(alpha) = P(|f| >= alpha),
which is compactly supported on [0, alpha_max] and therefore fits the
PiecewisePoly representation; F = 1 - S on [0, inf).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections import defaultdict
from math import lcm
from typing import Dict, List, Sequence, Tuple

from . import poly as P
from .discrepancy import Region, cells, closed_form_extreme_star
from .piecewise import PiecewisePoly, make_step
from .pointset import PointSet
from .rational import fmt, to_fraction


@dataclass(frozen=True)
class DistributionProfile:
    survival: PiecewisePoly

    def __call__(self, alpha) -> Fraction:
        """F(alpha) = P(|f| < alpha)."""
        alpha = to_fraction(alpha)
        if alpha <= 0:
            return Fraction(0)
        return 1 - self.survival(alpha)

    cdf = __call__

    @property
    def alpha_max(self) -> Fraction:
        """Plateau onset: F(alpha) = 1 for alpha >= alpha_max."""
        sup = self.survival.support()
        return sup[1] if sup else Fraction(0)

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return self.survival.breakpoints

    def gap_to(self, reference: "DistributionProfile") -> PiecewisePoly:
        """alpha -> F_reference(alpha) - F_self(alpha) on [0, inf)."""
        return self.survival - reference.survival

    def to_json(self) -> dict:
        return {"survival": self.survival.to_json(), "alpha_max": fmt(self.alpha_max)}


def density_of_D(ps: PointSet) -> PiecewisePoly:
    """Density g of D: (1/N) times the sum of the indicators of I_n = (n - N x_n, n - N x_{n-1})."""
    n = ps.n_points
    intervals = [(k - n * b, k - n * a) for a, b, k in cells(ps)]
    return make_step(intervals, [Fraction(1, n)] * len(intervals))


def profile_from_density(density: PiecewisePoly) -> DistributionProfile:
    """Profile of |X| for a random variable X with the given density."""
    folded = density + density.reflect()
    return DistributionProfile(folded.tail_integral(0))


def dist_D(ps: PointSet) -> DistributionProfile:
    return profile_from_density(density_of_D(ps))


def dtilde_density(ps: PointSet) -> PiecewisePoly:
    """Density of D(t2) - D(t1) on the unit square: g * g(-.)."""
    g = density_of_D(ps)
    return g.convolve(g.reflect())


def dist_Dtilde(ps: PointSet) -> DistributionProfile:
    return profile_from_density(dtilde_density(ps))


def grid_profile_D() -> DistributionProfile:
    """F(alpha) = min(2 alpha, 1), shared by every centered grid."""
    return DistributionProfile(PiecewisePoly.from_pieces([(0, Fraction(1, 2), P.make((1, -2)))]))


def grid_profile_Dtilde() -> DistributionProfile:
    """F(alpha) = 1 - (1 - min(alpha, 1))^2, shared by every translated grid."""
    return DistributionProfile(PiecewisePoly.from_pieces([(0, 1, P.make((1, -2, 1)))]))


# ------------------------------------------------------------ direct oracles


def sublevel_measure_D_direct(ps: PointSet, alpha) -> Fraction:
    """|{t in [0,1] : |D(t)| < alpha}| read off the linear pieces of D."""
    alpha = to_fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    n = ps.n_points
    total = Fraction(0)
    for a, b, k in cells(ps):
        # n - N t in (-alpha, alpha)  <=>  t in ((k - alpha)/N, (k + alpha)/N)
        lo = max(a, (k - alpha) / n)
        hi = min(b, (k + alpha) / n)
        if hi > lo:
            total += hi - lo
    return total


def _clip(poly: List[Tuple], c: int, keep_above: bool) -> List[Tuple]:
    """Clip a polygon in (t1, t2) against t2 - t1 > c (or < c)."""
    def inside(p):
        u = p[1] - p[0]
        return u > c if keep_above else u < c

    out = []
    m = len(poly)
    for idx in range(m):
        cur, nxt = poly[idx], poly[(idx + 1) % m]
        cin, nin = inside(cur), inside(nxt)
        if cin:
            out.append(cur)
        if cin != nin:
            fc = cur[1] - cur[0] - c
            den = fc - (nxt[1] - nxt[0] - c)
            out.append((cur[0] + _ratio((nxt[0] - cur[0]) * fc, den),
                        cur[1] + _ratio((nxt[1] - cur[1]) * fc, den)))
    return out


def _ratio(num, den):
    # integer whenever the clipped edge is axis-parallel and c is an integer
    q, r = divmod(num, den)
    return q if r == 0 else Fraction(num, den)


def _twice_area(poly: Sequence[Tuple]) -> Fraction:
    s = 0
    m = len(poly)
    for idx in range(m):
        x0, y0 = poly[idx]
        x1, y1 = poly[(idx + 1) % m]
        s += x0 * y1 - x1 * y0
    return abs(s)


def sublevel_measure_Dtilde_direct(ps: PointSet, alpha, region=Region.SQUARE) -> Fraction:
    """Normalized area of {|D(t2) - D(t1)| < alpha} by exact polygon clipping.

    On each cell (x_{i-1}, x_i) x (x_{j-1}, x_j) the function equals
    (j - i) - N (t2 - t1), so the sublevel set is the part of the rectangle
    between two lines of slope 1.  Coordinates are scaled to integers so the
    clipping runs on exact integer vertices.
    """
    alpha = to_fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    region = Region(region)
    n = ps.n_points
    cs = [(a, b, k) for a, b, k in cells(ps) if b > a]
    scale = n * alpha.denominator
    for x in ps.points:
        scale = lcm(scale, x.denominator)
    sa = int(alpha * scale)  # alpha * scale is an integer multiple of n

    def sc(x):
        return int(x * scale)

    rects = [(sc(a), sc(b), k) for a, b, k in cs]
    twice = 0
    for a1, b1, i in rects:
        for a2, b2, j in rects:
            k = j - i
            # |k - N u| < alpha  <=>  u in ((k - alpha)/N, (k + alpha)/N), u = t2 - t1
            lo = (k * scale - sa) // n
            hi = (k * scale + sa) // n
            if region is Region.TRIANGLE:
                lo = max(lo, 0)
            umin, umax = a2 - b1, b2 - a1
            if hi <= umin or lo >= umax or hi <= lo:
                continue
            if lo <= umin and hi >= umax:
                twice += 2 * (b1 - a1) * (b2 - a2)
                continue
            poly = [(a1, a2), (b1, a2), (b1, b2), (a1, b2)]
            poly = _clip(poly, lo, True)
            if poly:
                poly = _clip(poly, hi, False)
            if len(poly) >= 3:
                twice += _twice_area(poly)
    area = Fraction(twice) / (2 * scale * scale)
    return area if region is Region.SQUARE else 2 * area


def direct_profile_Dtilde(ps: PointSet) -> DistributionProfile:
    """Whole profile of |D~| from cell geometry, without densities or convolution.

    A rectangle [a1,b1] x [a2,b2] is a signed sum of four upper-left quadrants
    {t1 <= p, t2 >= q}; each quadrant meets the half-plane t2 - t1 < c in a
    right isosceles triangle of area (p + c - q)_+^2 / 2.  Summing these
    triangle areas over all cells gives F(alpha) as a sum of truncated
    quadratics in alpha.
    """
    n = ps.n_points
    cap = closed_form_extreme_star(ps)  # F = 1 from here on
    cs = [(a, b, k) for a, b, k in cells(ps) if b > a]
    # weight[beta]: signed count of triangle corners whose apex sits at beta
    weight: Dict[Fraction, int] = defaultdict(int)
    for a1, b1, i in cs:
        for a2, b2, j in cs:
            k = j - i
            weight[-(k + n * (b1 - a2))] += 1
            weight[-(k + n * (a1 - a2))] -= 1
            weight[-(k + n * (b1 - b2))] -= 1
            weight[-(k + n * (a1 - b2))] += 1
    # F(alpha) = sum_beta m_beta [(alpha - beta)_+^2 - (-beta - alpha)_+^2] / (2 N^2)
    events: Dict[Fraction, List[Fraction]] = defaultdict(lambda: [Fraction(0)] * 3)
    zero = Fraction(0)
    for beta, m in weight.items():
        if m == 0:
            continue
        if beta < cap:
            ev = events[max(beta, zero)]
            ev[0] += m * beta * beta
            ev[1] -= 2 * m * beta
            ev[2] += m
        if beta < 0:
            for pos, sgn in ((zero, -1), (min(-beta, cap), 1)):
                ev = events[pos]
                ev[0] += sgn * m * beta * beta
                ev[1] += sgn * 2 * m * beta
                ev[2] += sgn * m
    events[cap]  # make sure the cap is a breakpoint
    keys = sorted(k for k in events if k <= cap)
    w = Fraction(1, 2 * n * n)
    run = [Fraction(0)] * 3
    items = []
    for lo, hi in zip(keys, keys[1:]):
        run = [r + e for r, e in zip(run, events[lo])]
        surv = P.make((1 - w * run[0], -w * run[1], -w * run[2]))
        items.append((lo, hi, surv))
    return DistributionProfile(PiecewisePoly.from_pieces(items))


def ladder(k: int = 20, top=Fraction(2)) -> List[Fraction]:
    """k rational alphas spread over (0, top], avoiding trivially aligned values."""
    top = to_fraction(top)
    return [top * Fraction(2 * m + 1, 2 * k + 1) for m in range(k)]
