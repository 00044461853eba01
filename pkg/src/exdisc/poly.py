"""Dense univariate polynomials over Q.

A polynomial is a tuple of Fractions in ascending degree with no trailing
zeros; the zero polynomial is the empty tuple.  Plain tuples keep the
piecewise layer cheap to hash and compare.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, List, Optional, Sequence, Tuple

Poly = Tuple[Fraction, ...]

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)


def make(coeffs: Iterable) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def const(c) -> Poly:
    return make((c,))


def degree(p: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return ZERO
    return tuple(a * c for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return make(out)


def power(p: Poly, k: int) -> Poly:
    out = ONE
    for _ in range(k):
        out = mul(out, p)
    return out


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p: Poly) -> Poly:
    return make(i * c for i, c in enumerate(p) if i > 0)


def antideriv(p: Poly) -> Poly:
    """Antiderivative vanishing at 0."""
    if not p:
        return ZERO
    return (Fraction(0),) + tuple(c / (i + 1) for i, c in enumerate(p))


def definite(p: Poly, a, b) -> Fraction:
    P = antideriv(p)
    return evaluate(P, b) - evaluate(P, a)


def compose_affine(p: Poly, a, b) -> Poly:
    """Return the polynomial x -> p(a*x + b)."""
    a = Fraction(a)
    b = Fraction(b)
    out = [Fraction(0)] * len(p)
    # (a x + b)^k expanded binomially
    for k, c in enumerate(p):
        if c == 0:
            continue
        for j in range(k + 1):
            out[j] += c * comb(k, j) * a**j * b ** (k - j)
    return make(out)


def to_str(p: Poly, var: str = "t") -> str:
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}*{var}")
        else:
            terms.append(f"{c}*{var}^{i}")
    return " + ".join(terms)


# --------------------------------------------------------------------------
# exact sign analysis


def _sympy_poly(p: Poly):
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p)], x, domain="QQ")


def _odd_part(p: Poly):
    """Product of the odd-multiplicity square-free factors of p (as sympy Poly)."""
    P = _sympy_poly(p)
    _, factors = P.sqf_list()
    h = None
    for f, mult in factors:
        if mult % 2 == 1:
            h = f if h is None else h * f
    return h


def _count_open(h, lo: Fraction, hi: Optional[Fraction]) -> int:
    import sympy

    a = sympy.Rational(lo.numerator, lo.denominator)
    if hi is None:
        n = h.count_roots(a, sympy.oo)
    else:
        b = sympy.Rational(hi.numerator, hi.denominator)
        n = h.count_roots(a, b)
        if h.eval(b) == 0:
            n -= 1
    if h.eval(a) == 0:
        n -= 1
    return n


def _nonzero_sample(p: Poly, lo: Fraction, hi: Optional[Fraction]) -> Fraction:
    """Some rational point in (lo, hi) where p does not vanish."""
    if hi is None:
        x, step = lo + 1, Fraction(1)
        while evaluate(p, x) == 0:
            step *= 2
            x = lo + step
        return x
    x = (lo + hi) / 2
    k = 3
    while evaluate(p, x) == 0:
        x = lo + (hi - lo) / k
        k += 1
    return x


def nonneg_on(p: Poly, lo, hi=None) -> bool:
    """Decide exactly whether p >= 0 on [lo, hi] (hi=None means +infinity)."""
    lo = Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if not p:
        return True
    d = degree(p)
    if d == 0:
        return p[0] >= 0
    if hi is None and p[-1] < 0:
        return False
    if evaluate(p, lo) < 0 or (hi is not None and evaluate(p, hi) < 0):
        return False
    if d == 1:
        return True
    if d == 2:
        vertex = -p[1] / (2 * p[2])
        if vertex > lo and (hi is None or vertex < hi):
            return evaluate(p, vertex) >= 0
        return True
    if hi is not None and hi <= lo:
        return True
    h = _odd_part(p)
    if h is not None and h.degree() > 0 and _count_open(h, lo, hi) > 0:
        return False
    return evaluate(p, _nonzero_sample(p, lo, hi)) > 0


def roots_in(p: Poly, lo: Fraction, hi: Fraction, tol: Fraction) -> List[Fraction]:
    """Distinct real roots of p in the open interval (lo, hi), sorted.

    Rational roots of degree <= 2 polynomials (and rational roots found by
    sympy) are exact; irrational roots are returned as rational
    approximations within ``tol``.
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    if not p or degree(p) == 0 or hi <= lo:
        return []
    if degree(p) == 1:
        r = -p[0] / p[1]
        return [r] if lo < r < hi else []
    if degree(p) == 2:
        a, b, c = p[2], p[1], p[0]
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        sq = _exact_sqrt(disc)
        if sq is not None:
            cand = sorted({(-b - sq) / (2 * a), (-b + sq) / (2 * a)})
            return [r for r in cand if lo < r < hi]
    import sympy

    P = _sympy_poly(p).sqf_part()
    a = sympy.Rational(lo.numerator, lo.denominator)
    b = sympy.Rational(hi.numerator, hi.denominator)
    eps = sympy.Rational(tol.numerator, tol.denominator)
    out = []
    for (l, r), _ in P.intervals(inf=a, sup=b, eps=eps):
        mid = (Fraction(int(l.p), int(l.q)) + Fraction(int(r.p), int(r.q))) / 2
        if lo < mid < hi:
            out.append(mid)
    return sorted(out)


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    from math import isqrt

    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def from_json(coeffs: Sequence) -> Poly:
    from .rational import to_fraction

    return make(to_fraction(c) for c in coeffs)
