"""Fuzzy numbers as pairs of level-set endpoint functions.

A fuzzy number ``u`` is stored as ``lower = u^-`` (nondecreasing) and
``upper = u^+`` (nonincreasing), so that ``[u]^lam = [lower(lam), upper(lam)]``.
Any pair of bounded monotone càglàd functions with ``lower(1) <= upper(1)``
is a fuzzy number, and every fuzzy number arises this way.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Any, Iterable

import numpy as np

from . import regulated as rg
from .errors import NonFinite, OrderViolation, OutOfDomain, ValidationError, Violation
from .regulated import Direction, PLJFunction

__all__ = [
    "FuzzyNumber",
    "Interval",
    "make",
    "crisp",
    "triangular",
    "trapezoidal",
    "level_set",
    "membership",
    "add",
    "scale",
    "d_infinity",
    "d_hausdorff_at",
    "sup_hausdorff",
    "is_continuous_fuzzy",
    "knot_lambdas",
    "level_curves_csv",
    "from_json",
]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise OrderViolation(f"interval [{self.lo}, {self.hi}] has lo > hi")

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def hausdorff(self, other: "Interval") -> float:
        return max(abs(self.lo - other.lo), abs(self.hi - other.hi))

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


def _as_direction(f: PLJFunction, direction: Direction) -> PLJFunction:
    if f.direction == direction:
        return f
    if f.is_constant:
        return PLJFunction(f.lambdas.copy(), f.values.copy(), f.rights.copy(), direction)
    raise ValidationError([Violation("DirectionMismatch", f"expected a {direction.value} endpoint function")])


@dataclass(frozen=True)
class FuzzyNumber:
    """Validated fuzzy number; construct through :func:`make` or the helpers."""

    lower: PLJFunction
    upper: PLJFunction

    def __post_init__(self):
        problems = []
        lower, upper = self.lower, self.upper
        try:
            lower = _as_direction(lower, Direction.NONDECREASING)
        except ValidationError as exc:
            problems += exc.violations
        try:
            upper = _as_direction(upper, Direction.NONINCREASING)
        except ValidationError as exc:
            problems += exc.violations
        if not problems and lower.values[-1] > upper.values[-1]:
            problems.append(
                Violation("EndpointOrderViolation", f"lower(1) = {float(lower.values[-1])!r} > upper(1) = {float(upper.values[-1])!r}")
            )
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def __call__(self, x: float) -> float:
        return membership(self, x)

    def level_set(self, lam: float) -> Interval:
        return level_set(self, lam)

    def __add__(self, other: "FuzzyNumber") -> "FuzzyNumber":
        return add(self, other)

    def __rmul__(self, k: float) -> "FuzzyNumber":
        return scale(k, self)

    def to_json(self) -> dict[str, Any]:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json()}


def make(lower: PLJFunction, upper: PLJFunction) -> FuzzyNumber:
    """Pair two endpoint functions; raises :class:`ValidationError` on failure."""
    return FuzzyNumber(lower, upper)


def _finite(*xs: float) -> None:
    for x in xs:
        if not math.isfinite(x):
            raise NonFinite(f"{x!r} is not finite")


def crisp(r: float) -> FuzzyNumber:
    """The real number ``r`` seen as a fuzzy number (indicator of ``{r}``)."""
    _finite(r)
    return FuzzyNumber(rg.constant(r, Direction.NONDECREASING), rg.constant(r, Direction.NONINCREASING))


def trapezoidal(a: float, b: float, c: float, d: float) -> FuzzyNumber:
    _finite(a, b, c, d)
    if not a <= b <= c <= d:
        raise OrderViolation(f"need a <= b <= c <= d, got {a}, {b}, {c}, {d}")
    lower = rg.validate([(0.0, a), (1.0, b)], Direction.NONDECREASING)
    upper = rg.validate([(0.0, d), (1.0, c)], Direction.NONINCREASING)
    return FuzzyNumber(lower, upper)


def triangular(a: float, b: float, c: float) -> FuzzyNumber:
    return trapezoidal(a, b, b, c)


def level_set(u: FuzzyNumber, lam: float) -> Interval:
    if not 0.0 <= lam <= 1.0:
        raise OutOfDomain(f"lambda {lam!r} outside [0, 1]")
    return Interval(rg.evaluate(u.lower, lam), rg.evaluate(u.upper, lam))


def _sup_at_most(f: rg.PiecewiseLinear, x: float) -> float:
    """``sup{lam : f(lam) <= x}`` for nondecreasing ``f`` with ``f(0) <= x``."""
    lam, val, right = f.lambdas, f.values, f.rights
    seq = np.empty(2 * len(lam) - 1)
    seq[0::2] = val
    seq[1::2] = right[:-1]
    p = int(np.searchsorted(seq, x, side="right"))
    if p >= len(seq):
        return 1.0
    k = p // 2
    if p % 2 == 1:
        # right limit at lam_k jumps above x
        return float(lam[k])
    a, b = lam[k - 1], lam[k]
    r, v = right[k - 1], val[k]
    return float(a + (x - r) / (v - r) * (b - a))


def membership(u: FuzzyNumber, x: float) -> float:
    """Membership grade ``u(x) = sup{lam : x in [u]^lam}``; 0 off the support."""
    _finite(x)
    if not u.lower.values[0] <= x <= u.upper.values[0]:
        return 0.0
    neg_upper = rg.scale(-1.0, u.upper)
    return min(_sup_at_most(u.lower, x), _sup_at_most(neg_upper, -x))


def add(u: FuzzyNumber, v: FuzzyNumber) -> FuzzyNumber:
    """Levelwise interval sum."""
    return FuzzyNumber(rg.add(u.lower, v.lower), rg.add(u.upper, v.upper))


def scale(k: float, u: FuzzyNumber) -> FuzzyNumber:
    """Levelwise ``k * [u]^lam``; a negative factor swaps the endpoint roles."""
    if k >= 0:
        return FuzzyNumber(rg.scale(k, u.lower), rg.scale(k, u.upper))
    return FuzzyNumber(rg.scale(k, u.upper), rg.scale(k, u.lower))


def d_infinity(u: FuzzyNumber, v: FuzzyNumber) -> float:
    """Supremum metric: the larger of the two endpoint sup-distances."""
    return max(rg.sup_distance(u.lower, v.lower), rg.sup_distance(u.upper, v.upper))


def d_hausdorff_at(u: FuzzyNumber, v: FuzzyNumber, lam: float) -> float:
    """Hausdorff distance between the ``lam``-level sets."""
    return level_set(u, lam).hausdorff(level_set(v, lam))


def knot_lambdas(*us: FuzzyNumber) -> np.ndarray:
    arrays = [a for u in us for a in (u.lower.lambdas, u.upper.lambdas)]
    return np.unique(np.concatenate(arrays)) if arrays else np.array([0.0, 1.0])


def sup_hausdorff(u: FuzzyNumber, v: FuzzyNumber) -> float:
    """``sup_lam d_H([u]^lam, [v]^lam)``, including one-sided limits at knots.

    Computed level set by level set, independently of :func:`d_infinity`.
    """
    best = 0.0
    for lam in knot_lambdas(u, v):
        lam = float(lam)
        best = max(best, d_hausdorff_at(u, v, lam))
        if lam < 1.0:
            ru = Interval(rg.right_limit(u.lower, lam), rg.right_limit(u.upper, lam))
            rv = Interval(rg.right_limit(v.lower, lam), rg.right_limit(v.upper, lam))
            best = max(best, ru.hausdorff(rv))
    return best


def is_continuous_fuzzy(u: FuzzyNumber) -> bool:
    return rg.is_continuous(u.lower) and rg.is_continuous(u.upper)


def level_curves_csv(u: FuzzyNumber, lambdas: Iterable[float] | None = None) -> str:
    """CSV with columns ``lambda, lower, upper``."""
    lams = knot_lambdas(u) if lambdas is None else np.asarray(list(lambdas), dtype=float)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "lower", "upper"])
    lo = rg.evaluate(u.lower, lams)
    hi = rg.evaluate(u.upper, lams)
    for a, b, c in zip(lams, np.atleast_1d(lo), np.atleast_1d(hi)):
        w.writerow([repr(float(a)), repr(float(b)), repr(float(c))])
    return buf.getvalue()


def from_json(obj: dict[str, Any]) -> FuzzyNumber:
    lower = rg.validate(obj["lower"]["knots"], obj["lower"].get("direction") or Direction.NONDECREASING)
    upper = rg.validate(obj["upper"]["knots"], obj["upper"].get("direction") or Direction.NONINCREASING)
    return FuzzyNumber(lower, upper)
