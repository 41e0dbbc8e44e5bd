"""Finite stand-ins for the compact parameter space K.

Two realisations are supported: a sorted grid of points of an interval
``[a, b]`` and a convergent sequence ``a_1, a_2, ...`` together with its limit
point ``p`` (the one-point compactification of a countable discrete set,
whose neighbourhoods of ``p`` are the tails).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, Union


from .errors import UnknownPoint, ValidationError, Violation

Point = Hashable


def point_key(p: Point) -> str:
    """String key used for a domain point in JSON objects."""
    if isinstance(p, str):
        return p
    return repr(float(p))


@dataclass(frozen=True)
class IntervalGrid:
    a: float
    b: float
    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        problems = []
        if len(pts) < 1:
            problems.append(Violation("EmptyDomain", "grid has no points"))
        elif pts[0] != self.a or pts[-1] != self.b:
            problems.append(Violation("MissingEndpoint", "grid must include a and b"))
        if any(q <= p for p, q in zip(pts, pts[1:])):
            problems.append(Violation("NotIncreasing", "grid points must be strictly increasing"))
        if problems:
            raise ValidationError(problems)

    @classmethod
    def uniform(cls, a: float, b: float, n: int) -> "IntervalGrid":
        # i / (n - 1) is the correctly rounded fraction, so 0.3 stays 0.3 on [0, 1]
        a, b = float(a), float(b)
        pts = [a + (b - a) * i / (n - 1) for i in range(n)] if n > 1 else [a]
        pts[-1] = b
        return cls(a, b, tuple(pts))

    @property
    def kind(self) -> str:
        return "interval_grid"

    def __contains__(self, t: object) -> bool:
        return isinstance(t, (int, float)) and float(t) in self._index

    @cached_property
    def _index(self) -> dict[float, int]:
        return {p: i for i, p in enumerate(self.points)}

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def check(self, t: Point) -> float:
        if t not in self:
            raise UnknownPoint(f"{t!r} is not a grid point")
        return float(t)

    def neighbourhoods(self, t0: Point) -> list[list[float]]:
        """Nested neighbourhoods of ``t0``, largest first.

        The smallest one still holds the adjacent grid points: a grid
        samples a continuum, so ``{t0}`` alone is never open.
        """
        t0 = self.check(t0)
        i = self._index[t0]
        adj = [abs(self.points[j] - t0) for j in (i - 1, i + 1) if 0 <= j < len(self.points)]
        rmin = max(adj) if adj else 0.0
        radii = sorted({abs(p - t0) for p in self.points if abs(p - t0) >= rmin}, reverse=True)
        return [[p for p in self.points if abs(p - t0) <= r] for r in radii] or [[t0]]

    def approach(self, t0: Point) -> list[float]:
        """Other points ordered by decreasing distance to ``t0``."""
        t0 = self.check(t0)
        others = [p for p in self.points if p != t0]
        return sorted(others, key=lambda p: (-abs(p - t0), p))

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "a": self.a, "b": self.b, "points": list(self.points)}


@dataclass(frozen=True)
class ConvergentSequence:
    terms: tuple[Point, ...]
    limit: Point

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        problems = []
        if len(terms) < 1:
            problems.append(Violation("EmptyDomain", "sequence needs at least one term"))
        if len(set(terms)) != len(terms):
            problems.append(Violation("DuplicatePoint", "sequence terms must be distinct"))
        if self.limit in terms:
            problems.append(Violation("DuplicatePoint", "limit point must differ from every term"))
        if problems:
            raise ValidationError(problems)

    @classmethod
    def harmonic(cls, n: int) -> "ConvergentSequence":
        """Terms ``1/k`` for ``k = 1..n`` with limit 0."""
        return cls(tuple(1.0 / k for k in range(1, n + 1)), 0.0)

    @classmethod
    def labelled(cls, n: int, prefix: str = "a", limit: str = "p") -> "ConvergentSequence":
        return cls(tuple(f"{prefix}{k}" for k in range(1, n + 1)), limit)

    @property
    def kind(self) -> str:
        return "convergent_sequence"

    @property
    def points(self) -> tuple[Point, ...]:
        return self.terms + (self.limit,)

    @property
    def numeric(self) -> bool:
        return all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in self.points)

    def __contains__(self, t: object) -> bool:
        return t == self.limit or t in self.terms

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.terms) + 1

    def check(self, t: Point) -> Point:
        if t not in self:
            raise UnknownPoint(f"{t!r} is not a point of the sequence domain")
        return t

    def neighbourhoods(self, t0: Point) -> list[list[Point]]:
        """Tails ``{a_n : n >= m} + {p}`` at the limit; ``{a_n}`` at an isolated term."""
        self.check(t0)
        if t0 != self.limit:
            return [[t0]]
        return [list(self.terms[m:]) + [self.limit] for m in range(len(self.terms))]

    def approach(self, t0: Point) -> list[Point]:
        self.check(t0)
        if t0 != self.limit:
            return []
        return list(self.terms)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "terms": list(self.terms), "limit": self.limit}


CompactDomain = Union[IntervalGrid, ConvergentSequence]


def domain_from_json(obj: dict[str, Any]) -> CompactDomain:
    kind = obj.get("kind")
    if kind == "interval_grid":
        return IntervalGrid(float(obj["a"]), float(obj["b"]), tuple(obj["points"]))
    if kind == "convergent_sequence":
        return ConvergentSequence(tuple(obj["terms"]), obj["limit"])
    raise ValidationError([Violation("UnknownDomain", f"unknown domain kind {kind!r}")])


def resolve_key(domain: CompactDomain, key: str) -> Point:
    """Map a JSON object key back to the domain point it names."""
    for p in domain.points:
        if point_key(p) == key:
            return p
    raise UnknownPoint(f"key {key!r} names no point of the domain")


def is_numeric_point(p: Point) -> bool:
    return isinstance(p, (int, float)) and not isinstance(p, bool) and math.isfinite(float(p))
