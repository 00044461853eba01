"""Rearrangement-invariant norms computed from distribution profiles.

Every norm here only sees a function through its survival function
S(alpha) = P(|f| >= alpha), via the layer-cake identity

    integral psi(|f| / K) = integral_0^inf psi'(alpha) S(K alpha) d alpha.

Results are exact rationals whenever the integrals close over Q; the rest
is evaluated with mpmath at 40 significant digits.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional, Tuple, Union

import mpmath

from . import poly as P
from .distribution import DistributionProfile
from .errors import InvalidExponent, ParseError, ToleranceInvalid
from .piecewise import PiecewisePoly
from .rational import fmt, to_fraction

_DPS = 40
Number = Union[Fraction, float]


@dataclass(frozen=True)
class NormValue:
    kind: str
    approx: float
    exact: Optional[Fraction] = None
    error_bound: float = 0.0
    bracket: Optional[Tuple[Fraction, Fraction]] = None

    @classmethod
    def of_exact(cls, kind: str, value: Fraction) -> "NormValue":
        return cls(kind, float(value), Fraction(value), 0.0)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "approx": repr(self.approx), "error_bound": repr(self.error_bound)}
        if self.exact is not None:
            out["exact"] = fmt(self.exact)
        if self.bracket is not None:
            out["bracket"] = [fmt(self.bracket[0]), fmt(self.bracket[1])]
        return out


def _exponent(x, name: str = "p") -> Fraction:
    x = Fraction(x) if isinstance(x, float) else to_fraction(x)
    if x <= 0:
        raise InvalidExponent(f"{name} must be positive, got {x}")
    return x


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


# ------------------------------------------------------------------ psi specs


@dataclass(frozen=True)
class PsiSpec:
    """Strictly increasing psi with psi(0) = 0, piecewise polynomial.

    ``pieces[i]`` applies on [knots[i], knots[i+1]); the last piece extends to
    infinity.  Polynomials are in the global variable s.
    """

    knots: Tuple[Fraction, ...]
    pieces: Tuple[P.Poly, ...]
    name: str = "custom"

    def __post_init__(self):
        if not self.knots or self.knots[0] != 0 or len(self.knots) != len(self.pieces):
            raise ValueError("psi needs knots starting at 0 and one piece per knot")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise ValueError("psi knots must be strictly increasing")
        if P.evaluate(self.pieces[0], 0) != 0:
            raise ValueError("psi(0) must be 0")
        for i in range(1, len(self.knots)):
            s = self.knots[i]
            if P.evaluate(self.pieces[i - 1], s) != P.evaluate(self.pieces[i], s):
                raise ValueError(f"psi must be continuous; jump at s={s}")
        for i, p in enumerate(self.pieces):
            d = P.deriv(p)
            hi = self.knots[i + 1] if i + 1 < len(self.knots) else None
            if not d or not P.nonneg_on(d, self.knots[i], hi):
                raise ValueError(f"psi is not strictly increasing on piece {i}")

    def _segments(self):
        for i, p in enumerate(self.pieces):
            hi = self.knots[i + 1] if i + 1 < len(self.knots) else None
            yield self.knots[i], hi, p

    @cached_property
    def antiderivatives(self) -> Tuple[Tuple[P.Poly, ...], Tuple[P.Poly, ...]]:
        """Piecewise polynomials of Psi (Psi' = psi) and T (T' = Psi), both 0 at 0."""
        def integrate(pieces):
            out, acc = [], Fraction(0)
            for (a, _, _), p in zip(self._segments(), pieces):
                F = P.antideriv(p)
                out.append(P.add(F, P.const(acc - P.evaluate(F, a))))
                nxt = self.knots.index(a) + 1
                if nxt < len(self.knots):
                    acc = P.evaluate(out[-1], self.knots[nxt])
            return tuple(out)

        psi_int = integrate(self.pieces)
        return psi_int, integrate(psi_int)

    def _eval(self, pieces, x) -> Fraction:
        x = Fraction(x)
        if x < 0:
            raise ValueError("psi is defined on [0, inf)")
        i = max(k for k, s in enumerate(self.knots) if s <= x)
        return P.evaluate(pieces[i], x)

    def psi(self, x) -> Fraction:
        return self._eval(self.pieces, x)

    def Psi(self, x) -> Fraction:
        return self._eval(self.antiderivatives[0], x)

    def T(self, x) -> Fraction:
        return self._eval(self.antiderivatives[1], x)

    def derivative_pieces(self):
        """(lo, hi or None, psi') segments."""
        for a, b, p in self._segments():
            yield a, b, P.deriv(p)

    def to_json(self) -> dict:
        return {"name": self.name, "knots": [fmt(k) for k in self.knots],
                "pieces": [[fmt(c) for c in p] for p in self.pieces]}


def psi_power(p: int) -> PsiSpec:
    p = int(p)
    if p < 1:
        raise InvalidExponent("power presets need an integer p >= 1")
    return PsiSpec((Fraction(0),), (P.make([0] * p + [1]),), name=f"power:{p}")


PSI_PRESETS = {
    # s^2 up to 1, then its tangent line: convex, Huber-like
    "huber": lambda: PsiSpec((Fraction(0), Fraction(1)), (P.make((0, 0, 1)), P.make((-1, 2))), "huber"),
    # convex piecewise linear
    "kink": lambda: PsiSpec((Fraction(0), Fraction(1)), (P.make((0, 1)), P.make((-2, 3))), "kink"),
    # concave piecewise linear: allowed, since only monotonicity is required
    "concave": lambda: PsiSpec((Fraction(0), Fraction(1)), (P.make((0, 2)), P.make((1, 1))), "concave"),
    "cubic": lambda: PsiSpec((Fraction(0),), (P.make((0, 1, 0, 1)),), "cubic"),
}


def parse_psi(spec) -> PsiSpec:
    """``power:p``, a preset name, ``poly:c0,c1,...`` or a JSON object with knots/pieces."""
    if isinstance(spec, PsiSpec):
        return spec
    if isinstance(spec, dict):
        data = spec
    else:
        s = str(spec).strip()
        if s.startswith("power:"):
            try:
                return psi_power(int(s.split(":", 1)[1]))
            except ValueError as exc:
                raise ParseError(f"bad power preset {s!r}") from exc
        if s in PSI_PRESETS:
            return PSI_PRESETS[s]()
        if s.startswith("poly:"):
            coeffs = [to_fraction(c) for c in s.split(":", 1)[1].split(",")]
            try:
                return PsiSpec((Fraction(0),), (P.make(coeffs),), name=s)
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"unrecognised psi spec {s!r}") from exc
    try:
        knots = tuple(to_fraction(k) for k in data["knots"])
        pieces = tuple(P.from_json(c) for c in data["pieces"])
        return PsiSpec(knots, pieces, name=data.get("name", "custom"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid psi spec: {exc}") from exc


# -------------------------------------------------------------------- L_p


def _power_moment(S: PiecewisePoly, q: Fraction) -> Number:
    """integral_0^inf alpha^(q-1) S(alpha) d alpha for S piecewise polynomial on [0, inf)."""
    if _is_int(q):
        weight = PiecewisePoly.from_pieces(
            [(a, b, P.make([0] * (int(q) - 1) + [1])) for a, b, _ in S.intervals()]
        )
        return (S * weight).integrate(0, None)
    with mpmath.workdps(_DPS):
        total = mpmath.mpf(0)
        qm = _mpf(q)
        for a, b, p in S.intervals():
            a = max(a, Fraction(0))
            if b <= a:
                continue
            am, bm = _mpf(a), _mpf(b)
            for k, c in enumerate(p):
                e = qm + k
                total += _mpf(c) * (mpmath.power(bm, e) - (mpmath.power(am, e) if a > 0 else 0)) / e
        return float(total)


def lp_norm_pow(profile: DistributionProfile, p) -> NormValue:
    """||f||_p^p = integral p alpha^(p-1) P(|f| >= alpha) d alpha."""
    p = _exponent(p)
    m = _power_moment(profile.survival, p)
    if isinstance(m, Fraction):
        return NormValue.of_exact(f"L{fmt(p)}^p", p * m)
    return NormValue(f"L{fmt(p)}^p", float(p) * m, None, 1e-14 * max(1.0, abs(m)))


# ---------------------------------------------------------------- Lorentz


def lorentz_norm_pow(profile: DistributionProfile, p, q) -> NormValue:
    """||f||_{p,q}^q = p integral alpha^(q-1) S(alpha)^(q/p) d alpha."""
    p = _exponent(p, "p")
    q = _exponent(q, "q")
    r = q / p
    kind = f"Lorentz({fmt(p)},{fmt(q)})^q"
    S = profile.survival
    if _is_int(r):
        m = _power_moment(S.power(int(r)), q)
        if isinstance(m, Fraction):
            return NormValue.of_exact(kind, p * m)
        return NormValue(kind, float(p) * m, None, 1e-14 * max(1.0, abs(m)))
    with mpmath.workdps(_DPS):
        qm, rm = _mpf(q), _mpf(r)
        total, err = mpmath.mpf(0), mpmath.mpf(0)
        for a, b, piece in S.intervals():
            a = max(a, Fraction(0))
            if b <= a:
                continue
            cs = [_mpf(c) for c in piece]

            def integrand(x, cs=cs):
                v = mpmath.polyval(cs[::-1], x)
                return x ** (qm - 1) * (v ** rm if v > 0 else 0)

            val, e = mpmath.quad(integrand, [_mpf(a), _mpf(b)], error=True, maxdegree=10)
            total += val
            err += e
        value = _mpf(p) * total
        bound = float(_mpf(p) * err) + 1e-15
    return NormValue(kind, float(value), None, bound)


def beta(x, y) -> Number:
    """Beta function; exact when one argument is a positive integer and the other rational."""
    x = to_fraction(x) if not isinstance(x, float) else x
    y = to_fraction(y) if not isinstance(y, float) else y
    for m, other in ((x, y), (y, x)):
        if isinstance(m, Fraction) and _is_int(m) and m > 0 and isinstance(other, Fraction):
            out = Fraction(math.factorial(int(m) - 1))
            for i in range(int(m)):
                out /= other + i
            return out
    x, y = float(x), float(y)
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def _two_pow(q: Fraction) -> Number:
    return Fraction(2) ** int(q) if _is_int(q) else 2.0 ** float(q)


def _as_norm(kind: str, v: Number) -> NormValue:
    if isinstance(v, Fraction):
        return NormValue.of_exact(kind, v)
    return NormValue(kind, float(v), None, 1e-12 * abs(v))


def min_lorentz_pow_D(p, q) -> NormValue:
    p, q = _exponent(p, "p"), _exponent(q, "q")
    b = beta(q, 1 + q / p)
    two = _two_pow(q)
    if isinstance(b, Fraction) and isinstance(two, Fraction):
        return _as_norm("min Lorentz D", p / two * b)
    return _as_norm("min Lorentz D", float(p) / float(two) * float(b))


def min_lorentz_pow_Dtilde(p, q) -> NormValue:
    p, q = _exponent(p, "p"), _exponent(q, "q")
    b = beta(q, 1 + 2 * q / p)
    if isinstance(b, Fraction):
        return _as_norm("min Lorentz Dtilde", p * b)
    return _as_norm("min Lorentz Dtilde", float(p) * b)


def min_lp_pow_D(p) -> NormValue:
    """p-th power of the smallest L_p norm of D over N-point sets: 1 / (2^p (p + 1))."""
    p = _exponent(p)
    two = _two_pow(p)
    if isinstance(two, Fraction):
        return _as_norm("min Lp D", 1 / (two * (p + 1)))
    return _as_norm("min Lp D", 1.0 / (two * float(p + 1)))


def min_lp_pow_Dtilde(p) -> NormValue:
    p = _exponent(p)
    return _as_norm("min Lp Dtilde", 2 / ((p + 1) * (p + 2)))


# ------------------------------------------------------------------ psi norm


def _tolerance(tol) -> Fraction:
    t = Fraction(tol) if isinstance(tol, float) else to_fraction(tol)
    if t <= 0:
        raise ToleranceInvalid(f"tolerance must be positive, got {tol}")
    return t


def membership_integral(profile: DistributionProfile, psi: PsiSpec, K) -> Fraction:
    """integral psi(|f|/K) = integral_0^inf psi'(alpha) S(K alpha) d alpha, exactly."""
    K = to_fraction(K)
    total = Fraction(0)
    for a, b, sp in profile.survival.intervals():
        a = max(a, Fraction(0))
        if b <= a:
            continue
        s_scaled = P.compose_affine(sp, K, 0)  # alpha -> S(K alpha)
        lo_a, hi_a = a / K, b / K
        for pa, pb, dpsi in psi.derivative_pieces():
            lo = max(lo_a, pa)
            hi = hi_a if pb is None else min(hi_a, pb)
            if lo < hi:
                total += P.definite(P.mul(dpsi, s_scaled), lo, hi)
    return total


def _bisect_decreasing(G: Callable[[Fraction], Fraction], start: Fraction, tol: Fraction) -> Tuple[Fraction, Fraction]:
    """Bracket [lo, hi] of inf{K > 0 : G(K) <= 1} for non-increasing G, width <= tol."""
    hi = start
    while G(hi) > 1:
        hi *= 2
    lo = hi / 2
    while G(lo) <= 1:
        hi, lo = lo, lo / 2
    if not (G(lo) > 1 >= G(hi)):
        raise AssertionError("bisection bracket lost")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if G(mid) <= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _bracket_value(kind: str, lo: Fraction, hi: Fraction) -> NormValue:
    mid = (lo + hi) / 2
    return NormValue(kind, float(mid), None, float(hi - lo) / 2, (lo, hi))


def psi_norm(profile: DistributionProfile, psi, tol=1e-12) -> NormValue:
    """inf{K > 0 : integral psi(|f|/K) <= 1} by bisection on exact membership integrals.

    The defining set is never empty here: |f| is bounded, so the integral
    tends to 0 as K grows.
    """
    psi = parse_psi(psi)
    tol = _tolerance(tol)
    if profile.survival.is_zero():
        return NormValue.of_exact(f"psi[{psi.name}]", Fraction(0))
    lo, hi = _bisect_decreasing(lambda K: membership_integral(profile, psi, K), profile.alpha_max, tol)
    return _bracket_value(f"psi[{psi.name}]", lo, hi)


def min_psi_norm_D(psi, tol=1e-12) -> NormValue:
    """Smallest psi-norm of D: inf{K : 2K Psi(1/(2K)) <= 1}."""
    psi = parse_psi(psi)
    tol = _tolerance(tol)
    lo, hi = _bisect_decreasing(lambda K: 2 * K * psi.Psi(1 / (2 * K)), Fraction(1, 2), tol)
    return _bracket_value(f"min psi[{psi.name}] D", lo, hi)


def min_psi_norm_Dtilde(psi, tol=1e-12) -> NormValue:
    """Smallest psi-norm of D~: inf{K : 2K^2 T(1/K) <= 1}."""
    psi = parse_psi(psi)
    tol = _tolerance(tol)
    lo, hi = _bisect_decreasing(lambda K: 2 * K * K * psi.T(1 / K), Fraction(1), tol)
    return _bracket_value(f"min psi[{psi.name}] Dtilde", lo, hi)
