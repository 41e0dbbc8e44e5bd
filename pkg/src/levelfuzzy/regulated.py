"""Piecewise-linear càglàd functions on [0, 1].

A function is stored as knots ``(lam, value, right)``.  On every piece
``(lam_k, lam_{k+1}]`` it is the segment from ``(lam_k, right_k)`` (open end)
to ``(lam_{k+1}, value_{k+1})`` (closed end); at 0 it equals ``value_0``.
That makes every stored function left-continuous on (0, 1] with a right
limit everywhere on [0, 1), and the sup of any difference of two such
functions is reached (or approached) at a knot value or a knot right limit.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Iterable, NamedTuple

import numpy as np

from .errors import MixedDirections, NonFinite, OutOfDomain, ValidationError, Violation

__all__ = [
    "Direction",
    "Knot",
    "PiecewiseLinear",
    "PLJFunction",
    "SupResult",
    "Bounds",
    "validate",
    "raw",
    "as_monotone",
    "constant",
    "line",
    "evaluate",
    "right_limit",
    "sup_distance",
    "sup_distance_detail",
    "sup_norm",
    "add",
    "scale",
    "bounds",
    "is_continuous",
    "from_json",
    "DEFAULT_ATOL",
]

DEFAULT_ATOL = 1e-9


class Direction(str, Enum):
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"

    def flipped(self) -> "Direction":
        if self is Direction.NONDECREASING:
            return Direction.NONINCREASING
        return Direction.NONDECREASING


class Knot(NamedTuple):
    lam: float
    value: float
    right: float


class SupResult(NamedTuple):
    """Supremum with its location; ``kind`` is ``"value"`` or ``"right_limit"``."""

    value: float
    attained: bool
    lam: float
    kind: str


class Bounds(NamedTuple):
    min: float
    max: float
    min_attained: bool
    max_attained: bool


def _interleave(val: np.ndarray, right: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(val))
    out[0::2] = val
    out[1::2] = right
    return out


class PiecewiseLinear:
    """Left-continuous piecewise-linear function on [0, 1], not necessarily monotone.

    Use :func:`raw` to build one from knots, or :func:`validate` for the
    monotone subclass :class:`PLJFunction`.
    """

    __slots__ = ("_lam", "_val", "_right")

    def __init__(self, lam: np.ndarray, val: np.ndarray, right: np.ndarray):
        # trusted constructor: arrays already checked and canonical
        val = val + 0.0  # -0.0 -> 0.0 keeps hashing consistent with ==
        right = right + 0.0
        for arr in (lam, val, right):
            arr.flags.writeable = False
        self._lam = lam
        self._val = val
        self._right = right

    @property
    def lambdas(self) -> np.ndarray:
        return self._lam

    @property
    def values(self) -> np.ndarray:
        return self._val

    @property
    def rights(self) -> np.ndarray:
        return self._right

    @property
    def knots(self) -> list[Knot]:
        return [Knot(float(a), float(b), float(c)) for a, b, c in zip(self._lam, self._val, self._right)]

    def __len__(self) -> int:
        return len(self._lam)

    def __call__(self, x):
        return evaluate(self, x)

    def right_limit(self, x):
        return right_limit(self, x)

    @property
    def is_constant(self) -> bool:
        v0 = self._val[0]
        return bool(np.all(self._val == v0) and np.all(self._right == v0))

    @property
    def is_monotone(self) -> bool:
        return _monotone_direction(self._val, self._right) is not None

    def _key(self) -> tuple:
        return (self._lam.tobytes(), self._val.tobytes(), self._right.tobytes())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        if len(self) != len(other):
            return False
        same = (
            np.array_equal(self._lam, other._lam)
            and np.array_equal(self._val, other._val)
            and np.array_equal(self._right, other._right)
        )
        if not same:
            return False
        da = getattr(self, "direction", None)
        db = getattr(other, "direction", None)
        return da == db or self.is_constant

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        ks = ", ".join(f"({k.lam:g}, {k.value:g}, {k.right:g})" for k in self.knots[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"{type(self).__name__}([{ks}{more}])"

    def to_json(self) -> dict[str, Any]:
        knots = []
        for k in self.knots:
            item: dict[str, Any] = {"lambda": k.lam, "value": k.value}
            if k.right != k.value:
                item["right"] = k.right
            knots.append(item)
        direction = getattr(self, "direction", None)
        return {"direction": direction.value if direction else None, "knots": knots}


class PLJFunction(PiecewiseLinear):
    """Bounded monotone càglàd function on [0, 1] with a declared direction."""

    __slots__ = ("direction",)

    def __init__(self, lam: np.ndarray, val: np.ndarray, right: np.ndarray, direction: Direction):
        super().__init__(lam, val, right)
        self.direction = Direction(direction)

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return super().__repr__()[:-1] + f", {self.direction.value})"


# --------------------------------------------------------------------------
# construction


def _parse_knot(item: Any) -> tuple[float, float, float | None]:
    if isinstance(item, dict):
        lam = item["lambda"]
        value = item["value"]
        right = item.get("right")
    elif isinstance(item, Knot):
        lam, value, right = item
    else:
        seq = tuple(item)
        if len(seq) == 2:
            (lam, value), right = seq, None
        elif len(seq) == 3:
            lam, value, right = seq
        else:
            raise ValidationError([Violation("MalformedKnot", f"cannot read knot {item!r}")])
    return float(lam), float(value), None if right is None else float(right)


def _structural(raw_knots: Iterable[Any]) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[Violation]]:
    parsed = [_parse_knot(k) for k in raw_knots]
    violations: list[Violation] = []
    parsed.sort(key=lambda k: k[0])
    lam = np.array([k[0] for k in parsed], dtype=float)
    val = np.array([k[1] for k in parsed], dtype=float)
    right = np.array([k[1] if k[2] is None else k[2] for k in parsed], dtype=float)

    for i, (a, b, c) in enumerate(zip(lam, val, right)):
        if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
            violations.append(Violation("NonFinite", "knot has a non-finite entry", i))
        elif not 0.0 <= a <= 1.0:
            violations.append(Violation("OutOfDomain", f"lambda {a!r} outside [0, 1]", i))
    if violations:
        return lam, val, right, violations

    for i in range(1, len(lam)):
        if lam[i] == lam[i - 1]:
            violations.append(Violation("DuplicateLambda", f"lambda {float(lam[i])!r} repeated", i))
    if len(lam) == 0 or lam[0] != 0.0:
        violations.append(Violation("MissingEndpoint", "no knot at lambda = 0"))
    if len(lam) == 0 or lam[-1] != 1.0:
        violations.append(Violation("MissingEndpoint", "no knot at lambda = 1"))
    if len(lam) == 1:
        violations.append(Violation("MissingEndpoint", "a single knot cannot span [0, 1]"))
    if len(lam) and lam[0] == 0.0 and val[0] != right[0]:
        violations.append(Violation("RightDiscontinuityAtZero", "value and right limit differ at 0", 0))
    if len(lam) and lam[-1] == 1.0:
        # no right limit at 1; whatever was supplied carries no meaning
        right[-1] = val[-1]
    return lam, val, right, violations


def _monotone_direction(val: np.ndarray, right: np.ndarray) -> Direction | None:
    seq = _interleave(val, right)[:-1]
    d = np.diff(seq)
    if np.all(d >= 0):
        return Direction.NONDECREASING
    if np.all(d <= 0):
        return Direction.NONINCREASING
    return None


def _monotone_violation(val: np.ndarray, right: np.ndarray, direction: Direction) -> int | None:
    seq = _interleave(val, right)[:-1]
    d = np.diff(seq)
    bad = np.nonzero(d < 0 if direction is Direction.NONDECREASING else d > 0)[0]
    if len(bad) == 0:
        return None
    return int((bad[0] + 1) // 2)


def _canonical(lam: np.ndarray, val: np.ndarray, right: np.ndarray):
    """Drop interior jump-free knots lying on the segment through their neighbours."""
    if len(lam) <= 2:
        return lam, val, right
    l0, l1, l2 = lam[:-2], lam[1:-1], lam[2:]
    r0 = right[:-2]
    v1, r1, v2 = val[1:-1], right[1:-1], val[2:]
    pred = r0 + (v2 - r0) * ((l1 - l0) / (l2 - l0))
    # relative to the local values, so small-valued kinks survive
    local = np.maximum(np.maximum(np.abs(r0), np.abs(v1)), np.abs(v2))
    drop = (v1 == r1) & (np.abs(pred - v1) <= 4 * np.finfo(float).eps * local)
    if not drop.any():
        return lam, val, right
    keep = np.concatenate(([True], ~drop, [True]))
    return lam[keep], val[keep], right[keep]


def raw(raw_knots: Iterable[Any]) -> PiecewiseLinear:
    """Build a possibly non-monotone piecewise-linear function from knots."""
    lam, val, right, violations = _structural(raw_knots)
    if violations:
        raise ValidationError(violations)
    return PiecewiseLinear(*_canonical(lam, val, right))


def validate(raw_knots: Iterable[Any], direction: Direction | str) -> PLJFunction:
    """Check and canonicalise knots into a monotone :class:`PLJFunction`.

    Raises :class:`ValidationError` listing every violation found.
    """
    direction = Direction(direction)
    lam, val, right, violations = _structural(raw_knots)
    if not any(v.code in ("NonFinite", "OutOfDomain", "DuplicateLambda") for v in violations) and len(lam) > 1:
        idx = _monotone_violation(val, right, direction)
        if idx is not None:
            violations.append(Violation("NonMonotone", f"not {direction.value} at knot {idx}", idx))
    if violations:
        raise ValidationError(violations)
    return PLJFunction(*_canonical(lam, val, right), direction)


def as_monotone(f: PiecewiseLinear, direction: Direction | str | None = None) -> PLJFunction:
    """Promote a raw function to :class:`PLJFunction`, detecting the direction if not given."""
    if isinstance(f, PLJFunction) and (direction is None or f.direction == Direction(direction) or f.is_constant):
        return f
    if direction is None:
        direction = _monotone_direction(f.values, f.rights)
        if direction is None:
            raise ValidationError([Violation("NonMonotone", "function is not monotone")])
    direction = Direction(direction)
    idx = _monotone_violation(f.values, f.rights, direction)
    if idx is not None:
        raise ValidationError([Violation("NonMonotone", f"not {direction.value} at knot {idx}", idx)])
    return PLJFunction(f.lambdas.copy(), f.values.copy(), f.rights.copy(), direction)


def constant(c: float, direction: Direction | str = Direction.NONDECREASING) -> PLJFunction:
    if not math.isfinite(c):
        raise NonFinite(f"constant {c!r} is not finite")
    return PLJFunction(np.array([0.0, 1.0]), np.array([c, c], dtype=float), np.array([c, c], dtype=float), Direction(direction))


def line(start: float, end: float) -> PLJFunction:
    """Straight line from ``(0, start)`` to ``(1, end)``."""
    d = Direction.NONDECREASING if end >= start else Direction.NONINCREASING
    return validate([(0.0, start), (1.0, end)], d)


# --------------------------------------------------------------------------
# evaluation


def _eval_array(f: PiecewiseLinear, x: np.ndarray) -> np.ndarray:
    lam, val, right = f._lam, f._val, f._right
    i = np.clip(np.searchsorted(lam, x, side="left"), 1, len(lam) - 1)
    lo, hi = lam[i - 1], lam[i]
    y = right[i - 1] + (val[i] - right[i - 1]) * ((x - lo) / (hi - lo))
    y = np.where(x == hi, val[i], y)
    return np.where(x == 0.0, val[0], y)


def _right_array(f: PiecewiseLinear, x: np.ndarray) -> np.ndarray:
    lam, val, right = f._lam, f._val, f._right
    i = np.clip(np.searchsorted(lam, x, side="right"), 1, len(lam) - 1)
    lo, hi = lam[i - 1], lam[i]
    y = right[i - 1] + (val[i] - right[i - 1]) * ((x - lo) / (hi - lo))
    y = np.where(x == lo, right[i - 1], y)
    return np.where(x >= 1.0, val[-1], y)


def _check_domain(x: np.ndarray, upper_open: bool) -> None:
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0) or (upper_open and np.any(x >= 1.0)):
        bound = ")" if upper_open else "]"
        raise OutOfDomain(f"lambda outside [0, 1{bound}: {x!r}")


def evaluate(f: PiecewiseLinear, lam):
    """Value of ``f`` at ``lam`` (scalar or array) in [0, 1]."""
    x = np.asarray(lam, dtype=float)
    _check_domain(x, upper_open=False)
    y = _eval_array(f, x)
    return float(y) if y.ndim == 0 else y


def right_limit(f: PiecewiseLinear, lam):
    """Limit of ``f`` from the right at ``lam`` in [0, 1)."""
    x = np.asarray(lam, dtype=float)
    _check_domain(x, upper_open=True)
    y = _right_array(f, x)
    return float(y) if y.ndim == 0 else y


# --------------------------------------------------------------------------
# metric and algebra


def _union(f: PiecewiseLinear, g: PiecewiseLinear) -> np.ndarray:
    return np.union1d(f._lam, g._lam)


def sup_distance_detail(f: PiecewiseLinear, g: PiecewiseLinear) -> SupResult:
    """Exact ``sup |f - g|`` over [0, 1], with where it is reached.

    ``f - g`` is affine on each open piece of the union knot set, so the sup
    over each piece closure is at its right-limit start or its value end.
    """
    u = _union(f, g)
    dv = np.abs(_eval_array(f, u) - _eval_array(g, u))
    dr = np.abs(_right_array(f, u[:-1]) - _right_array(g, u[:-1]))
    iv = int(np.argmax(dv))
    ir = int(np.argmax(dr))
    if dv[iv] >= dr[ir]:
        return SupResult(float(dv[iv]), True, float(u[iv]), "value")
    return SupResult(float(dr[ir]), False, float(u[ir]), "right_limit")


def sup_distance(f: PiecewiseLinear, g: PiecewiseLinear) -> float:
    return sup_distance_detail(f, g).value


def sup_norm(f: PiecewiseLinear) -> SupResult:
    """Exact ``sup |f|`` with its location."""
    av = np.abs(f._val)
    ar = np.abs(f._right[:-1])
    iv = int(np.argmax(av))
    if len(ar) == 0 or av[iv] >= ar.max():
        return SupResult(float(av[iv]), True, float(f._lam[iv]), "value")
    ir = int(np.argmax(ar))
    return SupResult(float(ar[ir]), False, float(f._lam[ir]), "right_limit")


def _repair(val: np.ndarray, right: np.ndarray, direction: Direction):
    # interpolation at foreign knots can break monotonicity by an ulp
    seq = _interleave(val, right)
    seq = np.maximum.accumulate(seq) if direction is Direction.NONDECREASING else np.minimum.accumulate(seq)
    seq[-1] = seq[-2]
    return seq[0::2].copy(), seq[1::2].copy()


def add(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    """Pointwise sum on the union knot set.

    Two :class:`PLJFunction` operands must share a direction (a constant
    operand is compatible with either); the result is then a
    :class:`PLJFunction`.  Any raw operand gives a raw result.
    """
    u = _union(f, g)
    val = _eval_array(f, u) + _eval_array(g, u)
    right = _right_array(f, u) + _right_array(g, u)
    right[-1] = val[-1]
    if isinstance(f, PLJFunction) and isinstance(g, PLJFunction):
        if f.is_constant:
            direction = g.direction
        elif g.is_constant or f.direction == g.direction:
            direction = f.direction
        else:
            raise MixedDirections(f"cannot add {f.direction.value} and {g.direction.value} functions")
        val, right = _repair(val, right, direction)
        return PLJFunction(*_canonical(u, val, right), direction)
    return PiecewiseLinear(*_canonical(u, val, right))


def scale(k: float, f: PiecewiseLinear) -> PiecewiseLinear:
    """``k * f``; a negative factor flips the direction, zero gives the zero constant."""
    k = float(k)
    if not math.isfinite(k):
        raise NonFinite(f"scale factor {k!r} is not finite")
    if k == 0.0:
        zero = np.zeros(2)
        if isinstance(f, PLJFunction):
            return PLJFunction(np.array([0.0, 1.0]), zero, zero.copy(), f.direction)
        return PiecewiseLinear(np.array([0.0, 1.0]), zero, zero.copy())
    lam, val, right = f._lam.copy(), k * f._val, k * f._right
    if isinstance(f, PLJFunction):
        direction = f.direction if k > 0 else f.direction.flipped()
        return PLJFunction(*_canonical(lam, val, right), direction)
    return PiecewiseLinear(*_canonical(lam, val, right))


def bounds(f: PiecewiseLinear) -> Bounds:
    """Exact inf and sup over [0, 1]; either may be an unattained right limit."""
    vmin, vmax = float(f._val.min()), float(f._val.max())
    r = f._right[:-1]
    rmin = float(r.min()) if len(r) else vmin
    rmax = float(r.max()) if len(r) else vmax
    lo, hi = min(vmin, rmin), max(vmax, rmax)
    return Bounds(lo, hi, vmin == lo, vmax == hi)


def is_continuous(f: PiecewiseLinear) -> bool:
    return bool(np.all(f._val == f._right))


def from_json(obj: dict[str, Any]) -> PiecewiseLinear:
    direction = obj.get("direction")
    if direction is None:
        return raw(obj["knots"])
    return validate(obj["knots"], direction)
