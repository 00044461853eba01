"""Exact compactly supported piecewise polynomials on the real line.

Functions are treated as equivalence classes modulo null sets: only the
polynomial on each open interval between breakpoints matters.  Every
constructor returns the canonical form (adjacent equal pieces merged,
zero pieces at either end of the support trimmed), so ``==`` on two
values decides equality almost everywhere.

Piece polynomials are expressed in the global variable ``t`` (not in a
coordinate local to the piece).
"""
from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import poly as P
from .errors import MalformedInterval, NegativeValues
from .rational import fmt, to_fraction

Piece = Tuple[Fraction, Fraction, P.Poly]


@dataclass(frozen=True)
class PiecewisePoly:
    breakpoints: Tuple[Fraction, ...] = ()
    pieces: Tuple[P.Poly, ...] = ()

    def __post_init__(self):
        if self.breakpoints and len(self.pieces) != len(self.breakpoints) - 1:
            raise ValueError("need exactly one piece per breakpoint interval")
        if not self.breakpoints and self.pieces:
            raise ValueError("pieces given without breakpoints")

    # ------------------------------------------------------------------ build

    @classmethod
    def zero(cls) -> "PiecewisePoly":
        return cls()

    @classmethod
    def from_pieces(cls, items: Iterable[Tuple[object, object, P.Poly]]) -> "PiecewisePoly":
        """Sum of ``poly * indicator((a, b))`` over ``items``; overlaps add up."""
        events: Dict[Fraction, P.Poly] = defaultdict(tuple)
        for a, b, p in items:
            a = Fraction(a)
            b = Fraction(b)
            if b < a:
                raise MalformedInterval(f"interval ({a}, {b}) has lower > upper")
            if b == a or not p:
                continue
            events[a] = P.add(events[a], p)
            events[b] = P.sub(events[b], p)
        if not events:
            return cls()
        keys = sorted(events)
        running: P.Poly = P.ZERO
        pieces = []
        for k in keys[:-1]:
            running = P.add(running, events[k])
            pieces.append(running)
        return cls._canonical(keys, pieces)

    @classmethod
    def _canonical(cls, bps: Sequence[Fraction], pieces: Sequence[P.Poly]) -> "PiecewisePoly":
        out_b: List[Fraction] = [bps[0]]
        out_p: List[P.Poly] = []
        for b, p in zip(bps[1:], pieces):
            if out_p and out_p[-1] == p:
                out_b[-1] = b
            else:
                out_p.append(p)
                out_b.append(b)
        lo, hi = 0, len(out_p)
        while lo < hi and not out_p[lo]:
            lo += 1
        while hi > lo and not out_p[hi - 1]:
            hi -= 1
        if lo == hi:
            return cls()
        return cls(tuple(out_b[lo : hi + 1]), tuple(out_p[lo:hi]))

    # ------------------------------------------------------------- inspection

    def intervals(self) -> Iterator[Piece]:
        for i, p in enumerate(self.pieces):
            yield self.breakpoints[i], self.breakpoints[i + 1], p

    def is_zero(self) -> bool:
        return not self.pieces

    def is_step(self) -> bool:
        return all(P.degree(p) <= 0 for p in self.pieces)

    def degree(self) -> int:
        return max((P.degree(p) for p in self.pieces), default=-1)

    def support(self) -> Optional[Tuple[Fraction, Fraction]]:
        if not self.breakpoints:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, t) -> Fraction:
        """Value at ``t``; at a breakpoint the right limit is returned."""
        t = Fraction(t)
        i = bisect.bisect_right(self.breakpoints, t)
        if i == 0 or i >= len(self.breakpoints):
            return Fraction(0)
        return P.evaluate(self.pieces[i - 1], t)

    def left_limit(self, t) -> Fraction:
        t = Fraction(t)
        i = bisect.bisect_left(self.breakpoints, t)
        if i == 0 or i > len(self.pieces):
            return Fraction(0)
        return P.evaluate(self.pieces[i - 1], t)

    def values(self) -> List[Fraction]:
        """Constant values of a step function, piece by piece."""
        return [p[0] if p else Fraction(0) for p in self.pieces]

    # ------------------------------------------------------------- arithmetic

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return PiecewisePoly.from_pieces(list(self.intervals()) + list(other.intervals()))

    def __neg__(self) -> "PiecewisePoly":
        return PiecewisePoly(self.breakpoints, tuple(P.neg(p) for p in self.pieces))

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._product(other)
        c = to_fraction(other)
        if c == 0:
            return PiecewisePoly()
        return PiecewisePoly(self.breakpoints, tuple(P.scale(p, c) for p in self.pieces))

    __rmul__ = __mul__

    def _product(self, other: "PiecewisePoly") -> "PiecewisePoly":
        items = [(a, b, P.mul(p, q)) for a, b, p, q in _overlay(self, other)]
        return PiecewisePoly.from_pieces(items)

    def reflect(self) -> "PiecewisePoly":
        """t -> f(-t)."""
        items = [(-b, -a, P.compose_affine(p, -1, 0)) for a, b, p in self.intervals()]
        return PiecewisePoly.from_pieces(items)

    def shift(self, c) -> "PiecewisePoly":
        """t -> f(t - c)."""
        c = Fraction(c)
        items = [(a + c, b + c, P.compose_affine(p, 1, -c)) for a, b, p in self.intervals()]
        return PiecewisePoly.from_pieces(items)

    def even_part(self) -> "PiecewisePoly":
        return (self + self.reflect()) * Fraction(1, 2)

    def restrict(self, lo=None, hi=None) -> "PiecewisePoly":
        """Multiply by the indicator of (lo, hi); ``None`` leaves a side open."""
        lo = None if lo is None else Fraction(lo)
        hi = None if hi is None else Fraction(hi)
        items = []
        for a, b, p in self.intervals():
            a2 = a if lo is None else max(a, lo)
            b2 = b if hi is None else min(b, hi)
            if a2 < b2:
                items.append((a2, b2, p))
        return PiecewisePoly.from_pieces(items)

    def power(self, k: int) -> "PiecewisePoly":
        return PiecewisePoly.from_pieces((a, b, P.power(p, k)) for a, b, p in self.intervals())

    def integrate(self, a=None, b=None) -> Fraction:
        """Exact integral over (a, b); ``None`` stands for -inf / +inf."""
        total = Fraction(0)
        lo = None if a is None else Fraction(a)
        hi = None if b is None else Fraction(b)
        for s, e, p in self.intervals():
            if lo is not None:
                s = max(s, lo)
            if hi is not None:
                e = min(e, hi)
            if s < e:
                total += P.definite(p, s, e)
        return total

    def tail_integral(self, start=0) -> "PiecewisePoly":
        """x -> integral of f over (x, inf), for x >= start; zero beyond the support."""
        start = Fraction(start)
        items = []
        acc = Fraction(0)
        for a, b, p in reversed(list(self.restrict(start, None).intervals())):
            F = P.antideriv(p)
            piece = P.add(P.neg(F), P.const(P.evaluate(F, b) + acc))
            items.append((a, b, piece))
            acc += P.evaluate(F, b) - P.evaluate(F, a)
        # constant stretch between ``start`` and the first piece
        if self.pieces:
            first = max(self.breakpoints[0], start)
            if first > start:
                items.append((start, first, P.const(acc)))
        return PiecewisePoly.from_pieces(items)

    def jumps(self) -> List[Tuple[Fraction, Fraction]]:
        """(position, right value - left value) at every breakpoint of a step function."""
        vals = [Fraction(0)] + self.values() + [Fraction(0)]
        return [(b, vals[i + 1] - vals[i]) for i, b in enumerate(self.breakpoints)]

    def convolve(self, other: "PiecewisePoly") -> "PiecewisePoly":
        """(f*g)(x) = integral of f(x - y) g(y) dy, exactly."""
        if self.is_step() and other.is_step():
            return _convolve_steps(self, other)
        items: List[Piece] = []
        for a, b, p in self.intervals():
            if not p:
                continue
            for c, d, q in other.intervals():
                if q:
                    items.extend(_convolve_pieces(a, b, p, c, d, q))
        return PiecewisePoly.from_pieces(items)

    # ---------------------------------------------------------- serialization

    def to_json(self) -> dict:
        return {
            "breakpoints": [fmt(b) for b in self.breakpoints],
            "pieces": [[fmt(c) for c in p] for p in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PiecewisePoly":
        bps = [to_fraction(b) for b in data.get("breakpoints", [])]
        pieces = [P.from_json(c) for c in data.get("pieces", [])]
        if len(bps) and len(pieces) != len(bps) - 1:
            raise MalformedInterval("pieces/breakpoints length mismatch")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise MalformedInterval("breakpoints must be strictly increasing")
        return cls.from_pieces(zip(bps, bps[1:], pieces))

    def sample(self, lo, hi, n: int) -> List[Tuple[Fraction, Fraction]]:
        """``n + 1`` equally spaced samples (t, f(t)) on [lo, hi], for plotting."""
        lo = Fraction(lo)
        hi = Fraction(hi)
        return [(lo + (hi - lo) * k / n, self(lo + (hi - lo) * k / n)) for k in range(n + 1)]

    def __repr__(self) -> str:
        parts = [f"({a}, {b}): {P.to_str(p)}" for a, b, p in self.intervals()]
        return "PiecewisePoly{" + "; ".join(parts) + "}"


def _overlay(f: PiecewisePoly, g: PiecewisePoly):
    """Common refinement of two piecewise functions: yields (a, b, pf, pg)."""
    bps = sorted(set(f.breakpoints) | set(g.breakpoints))
    for a, b in zip(bps, bps[1:]):
        m = (a + b) / 2
        yield a, b, _piece_at(f, m), _piece_at(g, m)


def _piece_at(f: PiecewisePoly, t: Fraction) -> P.Poly:
    i = bisect.bisect_right(f.breakpoints, t)
    if i == 0 or i >= len(f.breakpoints):
        return P.ZERO
    return f.pieces[i - 1]


# ---------------------------------------------------------------- convolution


def _convolve_pieces(a, b, p, c, d, q) -> List[Piece]:
    """Convolution of p*1_(a,b) with q*1_(c,d) as (lo, hi, poly) pieces."""
    s1 = a + c
    s2 = min(a + d, b + c)
    s3 = max(a + d, b + c)
    s4 = b + d
    if len(p) == 1 and len(q) == 1:
        k = p[0] * q[0]
        # trapezoid: rise, plateau, fall
        return [
            (s1, s2, (-k * s1, k)),
            (s2, s3, (k * (s2 - s1),)),
            (s3, s4, (k * s4, -k)),
        ]
    H = _bivariate_antiderivative(p, q)
    narrow_g = a + d <= b + c  # the (c, d) piece is the shorter one
    out = [(s1, s2, P.sub(_at_shift(H, c), _at_const(H, a)))]
    if narrow_g:
        out.append((s2, s3, P.sub(_at_shift(H, c), _at_shift(H, d))))
    else:
        out.append((s2, s3, P.sub(_at_const(H, b), _at_const(H, a))))
    out.append((s3, s4, P.sub(_at_const(H, b), _at_shift(H, d))))
    return out


def _convolve_steps(f: PiecewisePoly, g: PiecewisePoly) -> PiecewisePoly:
    """Step * step via jumps: H(.-s) * H(.-t) is the ramp (x - s - t)_+."""
    slopes: Dict[Fraction, Fraction] = defaultdict(Fraction)
    for s, u in f.jumps():
        for t, v in g.jumps():
            slopes[s + t] += u * v
    keys = sorted(slopes)
    if not keys:
        return PiecewisePoly()
    pieces = []
    a = b = Fraction(0)  # running value b + a*x
    for k in keys[:-1]:
        w = slopes[k]
        a += w
        b -= w * k
        pieces.append(P.make((b, a)))
    return PiecewisePoly._canonical(keys, pieces)


def _bivariate_antiderivative(p: P.Poly, q: P.Poly) -> Dict[Tuple[int, int], Fraction]:
    """Coefficients H[(i, s)] of x^i y^s with dH/dy = p(y) q(x - y)."""
    H: Dict[Tuple[int, int], Fraction] = defaultdict(Fraction)
    for k, qk in enumerate(q):
        if qk == 0:
            continue
        for j in range(k + 1):
            base = qk * comb(k, j) * (-1) ** j
            for m, pm in enumerate(p):
                if pm == 0:
                    continue
                s = j + m + 1
                H[(k - j, s)] += base * pm / s
    return H


def _at_const(H, e) -> P.Poly:
    """H(x, e) as a polynomial in x."""
    e = Fraction(e)
    out: Dict[int, Fraction] = defaultdict(Fraction)
    for (i, s), c in H.items():
        out[i] += c * e**s
    return P.make(out[i] for i in range(max(out, default=-1) + 1))


def _at_shift(H, e) -> P.Poly:
    """H(x, x - e) as a polynomial in x."""
    e = Fraction(e)
    acc = P.ZERO
    for (i, s), c in H.items():
        term = P.compose_affine((Fraction(0),) * s + (c,), 1, -e)  # c (x - e)^s
        acc = P.add(acc, (Fraction(0),) * i + term if term else P.ZERO)
    return acc


# ---------------------------------------------------------------- named ops


def make_step(intervals: Sequence[Tuple[object, object]], values: Sequence[object]) -> PiecewisePoly:
    if len(intervals) != len(values):
        raise ValueError("intervals and values differ in length")
    items = []
    for (a, b), v in zip(intervals, values):
        a, b, v = to_fraction(a), to_fraction(b), to_fraction(v)
        if b < a:
            raise MalformedInterval(f"interval ({a}, {b}) has lower > upper")
        items.append((a, b, P.const(v)))
    return PiecewisePoly.from_pieces(items)


def indicator(a, b, value=1) -> PiecewisePoly:
    return make_step([(a, b)], [value])


def evaluate(f: PiecewisePoly, t) -> Fraction:
    return f(t)


def add(f: PiecewisePoly, g: PiecewisePoly) -> PiecewisePoly:
    return f + g


def scale(f: PiecewisePoly, c) -> PiecewisePoly:
    return f * c


def reflect(f: PiecewisePoly) -> PiecewisePoly:
    return f.reflect()


def integrate(f: PiecewisePoly, a=None, b=None) -> Fraction:
    if a is not None and b is not None and Fraction(a) > Fraction(b):
        raise ValueError("integration bounds must satisfy a <= b")
    return f.integrate(a, b)


def convolve(f: PiecewisePoly, g: PiecewisePoly) -> PiecewisePoly:
    return f.convolve(g)


def multiply(f: PiecewisePoly, g: PiecewisePoly) -> PiecewisePoly:
    return f * g


@lru_cache(maxsize=None)
def bspline(n: int) -> PiecewisePoly:
    """Centered cardinal B-spline of order n (n-fold convolution power of M_1)."""
    if n < 1:
        raise ValueError("B-spline order must be >= 1")
    m1 = indicator(Fraction(-1, 2), Fraction(1, 2))
    out = m1
    for _ in range(n - 1):
        out = out.convolve(m1)
    return out


def sd_rearrange(f: PiecewisePoly) -> PiecewisePoly:
    """Symmetric decreasing rearrangement of a non-negative step function."""
    if not f.is_step():
        raise ValueError("sd_rearrange is defined for step functions only")
    levels: Dict[Fraction, Fraction] = defaultdict(Fraction)
    for a, b, p in f.intervals():
        v = p[0] if p else Fraction(0)
        if v < 0:
            raise NegativeValues(f"negative value {v} on ({a}, {b})")
        if v > 0:
            levels[v] += b - a
    items = []
    width = Fraction(0)
    for v in sorted(levels, reverse=True):
        inner = width
        width += levels[v]
        items.append((-width / 2, -inner / 2, P.const(v)))
        items.append((inner / 2, width / 2, P.const(v)))
    return PiecewisePoly.from_pieces(items)


def is_sd(f: PiecewisePoly) -> bool:
    """Symmetric about 0 and non-increasing on (0, inf), almost everywhere."""
    if f != f.reflect():
        return False
    prev_right: Optional[Fraction] = None
    for a, b, p in f.intervals():
        if b <= 0:
            continue
        a = max(a, Fraction(0))
        if prev_right is not None and P.evaluate(p, a) > prev_right:
            return False
        if P.degree(p) >= 1 and not P.nonneg_on(P.neg(P.deriv(p)), a, b):
            return False
        prev_right = P.evaluate(p, b)
    return prev_right is None or prev_right >= 0


def level_measure(f: PiecewisePoly, lam, tol=Fraction(1, 10**30)) -> Fraction:
    """Lebesgue measure of {t : f(t) >= lam} for lam > 0.

    Exact whenever every crossing point of the level is rational (always
    the case for pieces of degree <= 1); otherwise irrational crossings are
    located by exact-sign bisection to within ``tol``.
    """
    lam = to_fraction(lam)
    if lam <= 0:
        raise ValueError("level must be positive")
    total = Fraction(0)
    for a, b, p in f.intervals():
        q = P.sub(p, P.const(lam))
        if P.degree(q) <= 0:
            if (q[0] if q else 0) >= 0:
                total += b - a
            continue
        cuts = [a] + P.roots_in(q, a, b, tol) + [b]
        for lo, hi in zip(cuts, cuts[1:]):
            if P.evaluate(q, (lo + hi) / 2) >= 0:
                total += hi - lo
    return total


M1 = indicator(Fraction(-1, 2), Fraction(1, 2))
