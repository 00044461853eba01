"""N-element point sets in [0, 1] with exact rational coordinates."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Tuple

from .errors import DeltaOutOfRange, EmptySet, OutOfRange, ParseError
from .rational import fmt, to_fraction


@dataclass(frozen=True)
class PointSet:
    """Sorted coordinates x_0 <= ... <= x_{N-1}; duplicates are allowed."""

    points: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.points:
            raise EmptySet("a point set needs at least one point")
        if any(b < a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("points must be sorted; use new() to normalize")
        if self.points[0] < 0 or self.points[-1] > 1:
            raise OutOfRange("coordinates must lie in [0, 1]")

    @property
    def n_points(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def to_json(self) -> dict:
        return {"points": [fmt(x) for x in self.points]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def new(points: Iterable) -> PointSet:
    xs = [to_fraction(x) for x in points]
    if not xs:
        raise EmptySet("a point set needs at least one point")
    for x in xs:
        if not 0 <= x <= 1:
            raise OutOfRange(f"coordinate {x} outside [0, 1]")
    return PointSet(tuple(sorted(xs)))


def from_json(data) -> PointSet:
    """Accepts ``{"points": [...]}`` as a dict or a JSON string."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("points"), list):
        raise ParseError('expected an object of the form {"points": [...]}')
    return new(data["points"])


def centered_grid(n: int) -> PointSet:
    if n < 1:
        raise ValueError("N must be >= 1")
    return PointSet(tuple(Fraction(2 * k + 1, 2 * n) for k in range(n)))


def translated_grid(n: int, delta) -> PointSet:
    if n < 1:
        raise ValueError("N must be >= 1")
    delta = to_fraction(delta)
    if not 0 <= delta < Fraction(1, n):
        raise DeltaOutOfRange(f"delta={delta} not in [0, 1/{n})")
    return PointSet(tuple(Fraction(k, n) + delta for k in range(n)))


class GridKind(enum.Enum):
    CENTERED = "centered_grid"
    TRANSLATED = "translated_grid"
    OTHER = "other"


class Classification(NamedTuple):
    kind: GridKind
    delta: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.delta is not None:
            out["delta"] = fmt(self.delta)
        return out


def classify(ps: PointSet) -> Classification:
    n = ps.n_points
    offsets = {x - Fraction(k, n) for k, x in enumerate(ps.points)}
    if len(offsets) != 1:
        return Classification(GridKind.OTHER)
    (delta,) = offsets
    if not 0 <= delta < Fraction(1, n):
        return Classification(GridKind.OTHER)
    if delta == Fraction(1, 2 * n):
        return Classification(GridKind.CENTERED, delta)
    return Classification(GridKind.TRANSLATED, delta)


def is_translated_grid(ps: PointSet) -> bool:
    return classify(ps).kind is not GridKind.OTHER


def random_set(n: int, seed: int, denominator_bound: int) -> PointSet:
    """N points drawn uniformly from {k/d : 0 <= k <= d}; reproducible per seed."""
    if n < 1:
        raise ValueError("N must be >= 1")
    if denominator_bound < 2:
        raise ValueError("denominator_bound must be >= 2")
    rng = random.Random(seed)
    d = denominator_bound
    return new(Fraction(rng.randint(0, d), d) for _ in range(n))
