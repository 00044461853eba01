"""Parsing and formatting of exact rationals."""
from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import ParseError

RationalLike = Union[int, Fraction, str]


def to_fraction(value) -> Fraction:
    """Convert ``value`` to a Fraction without any rounding.

    Strings may be ``"p/q"``, integers or decimals (``"0.3"`` -> 3/10).
    Floats are rejected unless they are integral, since their binary
    expansion is almost never what the caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise ParseError(f"refusing inexact float {value!r}; pass a string")
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not s:
            raise ParseError("empty rational string")
        try:
            if "/" in s:
                num, den = s.split("/")
                den_i = int(den)
                if den_i == 0:
                    raise ParseError(f"zero denominator in {value!r}")
                return Fraction(int(num), den_i)
            d = Decimal(s)
            if not d.is_finite():
                raise ParseError(f"not a finite rational: {value!r}")
            return Fraction(d)
        except (ValueError, InvalidOperation) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def fmt(q: Fraction) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
