"""Executable corpus of the worked examples and auxiliary counterexamples.

Analytic families are converted to piecewise-linear columns here.  Right
limits at hot knots are injected in closed form instead of being sampled,
because sampling systematically misses them when the column is steep.
"""

from __future__ import annotations

import functools
from typing import Any, Callable

import numpy as np

from . import regulated as rg
from .bivariate import AnalyticFunction, ColumnFunction, LCCFunction
from .domain import CompactDomain, ConvergentSequence, IntervalGrid, Point, is_numeric_point
from .errors import DomainOutOfRange, LevelFuzzyError
from .fuzzy import FuzzyNumber
from .fuzzymap import FuzzyMap
from .regulated import Direction

__all__ = [
    "power_column",
    "example_level_not_dinf",
    "level_not_dinf_sequence",
    "example_constant_noncontinuous",
    "example_alexandroff_unbounded",
    "example_separately_not_jointly",
    "example_sum_nonclosure",
    "FIXTURES",
    "RESAMPLERS",
    "build",
]

SAMPLING_TOL = 1e-6
# the first knot right of 1/2 sits one ulp away; nothing representable lies in between
_FIRST_OCTAVE = -53
_SAMPLES_PER_PIECE = 33


def _power_knots(t: float, per_octave: int) -> tuple[np.ndarray, np.ndarray]:
    exps = np.linspace(_FIRST_OCTAVE, -1, (-1 - _FIRST_OCTAVE) * per_octave + 1)
    lam = np.unique(0.5 + np.exp2(exps))
    return lam, (lam - 0.5) ** t


def _sampled_error(lam: np.ndarray, val: np.ndarray, t: float) -> float:
    theta = np.linspace(0.0, 1.0, _SAMPLES_PER_PIECE)[1:-1]
    x = (lam[:-1, None] + np.diff(lam)[:, None] * theta[None, :]).ravel()
    approx = np.interp(x, lam, val)
    return float(np.max(np.abs(approx - (x - 0.5) ** t))) if len(x) else 0.0


@functools.lru_cache(maxsize=4096)
def power_column(t: float, tol: float = SAMPLING_TOL) -> rg.PLJFunction:
    """PL version of ``lam -> 0 (lam <= 1/2), (lam - 1/2)**t (lam > 1/2)``.

    For ``t > 0`` the right limit 0 is put at the hot knot ``1/2`` and knots
    accumulate geometrically there; the knot density doubles until the sup
    error, measured on representable doubles, is below ``tol``.  ``t = 0``
    gives the exact jump to 1.
    """
    if t == 0:
        return rg.validate([(0.0, 0.0), (0.5, 0.0, 1.0), (1.0, 1.0)], Direction.NONDECREASING)
    per_octave = 1
    while True:
        lam, val = _power_knots(t, per_octave)
        err = _sampled_error(lam, val, t)
        if err < tol or per_octave >= 1 << 12:
            break
        per_octave *= 2
    if not err < tol:
        raise LevelFuzzyError(f"sampling of column t={t!r} stalled at error {err!r}")
    knots = [(0.0, 0.0), (0.5, 0.0, 0.0)] + list(zip(lam.tolist(), val.tolist()))
    return rg.validate(knots, Direction.NONDECREASING)


def _level_not_dinf_value(t: Point) -> FuzzyNumber:
    if not is_numeric_point(t) or not 0.0 <= float(t) <= 1.0:
        raise DomainOutOfRange(f"domain point {t!r} outside [0, 1]")
    return FuzzyNumber(power_column(float(t)), rg.constant(1.0, Direction.NONINCREASING))


def example_level_not_dinf(domain: CompactDomain | None = None) -> FuzzyMap:
    """``f(t)`` with upper endpoint 1 and lower endpoint ``(lam - 1/2)^t`` right of 1/2.

    Level-continuous everywhere, not supremum-continuous at ``t = 0``.  The
    default domain is ``{1/n : n <= 50} + {0}``.  The map carries a resampler,
    so continuity classification can look at points closer to ``t0`` than
    the stored ones.
    """
    if domain is None:
        domain = ConvergentSequence.harmonic(50)
    values = {t: _level_not_dinf_value(t) for t in domain.points}
    return FuzzyMap(domain, values, resampler=_level_not_dinf_value, hot_knots=(0.5,), name="example_level_not_dinf")


def level_not_dinf_sequence(ks: list[int] | None = None) -> tuple[list[FuzzyNumber], FuzzyNumber]:
    """The values ``f(1/k)`` and their would-be limit ``f(0)``.

    The default indices run up to ``10^8 + 4`` so that a tail test at
    moderate tolerance sees the level convergence.
    """
    if ks is None:
        ks = [10**j for j in range(8)] + [10**8 + i for i in range(5)]
    return [_level_not_dinf_value(1.0 / k) for k in ks], _level_not_dinf_value(0.0)


def _jump_number() -> FuzzyNumber:
    lower = rg.validate([(0.0, 0.0), (0.5, 0.25, 0.75), (1.0, 1.0)], Direction.NONDECREASING)
    upper = rg.validate([(0.0, 2.0), (1.0, 1.5)], Direction.NONINCREASING)
    return FuzzyNumber(lower, upper)


def example_constant_noncontinuous(domain: CompactDomain | None = None) -> FuzzyMap:
    """Constant map onto a fuzzy number whose lower endpoint jumps at 1/2."""
    if domain is None:
        domain = IntervalGrid.uniform(0.0, 1.0, 11)
    u = _jump_number()
    return FuzzyMap(domain, {t: u for t in domain.points}, resampler=lambda t: u, name="example_constant_noncontinuous")


def _spike(n: int) -> rg.PiecewiseLinear:
    end = min(0.5 + 1.0 / n, 1.0)
    top = -(n * n) * end + (n * n + 2 * n) / 2
    knots = [(0.0, 0.0), (0.5, 0.0, float(n)), (end, float(top))]
    if end < 1.0:
        knots.append((1.0, 0.0))
    return rg.raw(knots)


def example_alexandroff_unbounded(N: int) -> ColumnFunction:
    """Columns ``f_n`` on ``a_1..a_N`` and zero at the limit point ``p``.

    ``f_n`` falls linearly from right limit ``n`` at 1/2 to 0 at ``1/2 + 1/n``;
    the columns are not monotone, so the result is a raw sample.
    """
    if N < 1:
        raise LevelFuzzyError("N must be at least 1")
    domain = ConvergentSequence.labelled(N)
    cols: dict[Point, rg.PiecewiseLinear] = {f"a{n}": _spike(n) for n in range(1, N + 1)}
    cols[domain.limit] = rg.raw([(0.0, 0.0), (1.0, 0.0)])
    return ColumnFunction(domain, cols)


def _separate_grid() -> IntervalGrid:
    pts = {0.0, 1.0} | {2.0**-k for k in range(1, 31)} | {round(0.05 * i, 12) for i in range(21)}
    return IntervalGrid(0.0, 1.0, tuple(sorted(pts)))


def _h(lams: np.ndarray, t: Point) -> np.ndarray:
    x = np.asarray(lams, dtype=float) - 0.5
    t = float(t)
    den = x * x + t * t
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, x * t / np.where(den > 0, den, 1.0), 0.0)
    return out


def example_separately_not_jointly() -> AnalyticFunction:
    """``h(lam, t) = (lam - 1/2) t / ((lam - 1/2)^2 + t^2)``, ``h = 0`` at ``(1/2, 0)``.

    Continuous in each variable separately, not monotone in ``lam`` and not
    jointly continuous at ``(1/2, 0)``.
    """
    return AnalyticFunction(_separate_grid(), _h, hot_lambdas=(0.5,), name="separately_not_jointly")


def example_sum_nonclosure() -> tuple[LCCFunction, LCCFunction]:
    """A nondecreasing and a nonincreasing member whose sum is not monotone.

    ``F`` interpolates ``lam^2`` on quarter points, ``G = -lam``; the sum is
    0, -1/4, 0 at ``lam = 0, 1/2, 1``.
    """
    domain = IntervalGrid(0.0, 1.0, (0.0, 1.0))
    q = [0.0, 0.25, 0.5, 0.75, 1.0]
    F = rg.validate([(x, x * x) for x in q], Direction.NONDECREASING)
    G = rg.validate([(0.0, 0.0), (1.0, -1.0)], Direction.NONINCREASING)
    return LCCFunction(domain, {t: F for t in domain.points}), LCCFunction(domain, {t: G for t in domain.points})


def _domain_arg(params: dict[str, Any]) -> CompactDomain | None:
    if "n" in params:
        return ConvergentSequence.harmonic(int(params["n"]))
    if "grid" in params:
        return IntervalGrid.uniform(0.0, 1.0, int(params["grid"]))
    return None


FIXTURES: dict[str, Callable[[dict[str, Any]], Any]] = {
    "example_level_not_dinf": lambda p: example_level_not_dinf(_domain_arg(p)),
    "example_constant_noncontinuous": lambda p: example_constant_noncontinuous(_domain_arg(p)),
    "example_alexandroff_unbounded": lambda p: example_alexandroff_unbounded(int(p.get("N", 5))),
    "example_separately_not_jointly": lambda p: example_separately_not_jointly(),
    "example_sum_nonclosure": lambda p: example_sum_nonclosure(),
}


RESAMPLERS: dict[str, Callable[[Point], FuzzyNumber]] = {
    "example_level_not_dinf": _level_not_dinf_value,
    "example_constant_noncontinuous": lambda t: _jump_number(),
}


def build(name: str, params: dict[str, Any] | None = None) -> Any:
    """Materialise a fixture by name; ``params`` may hold ``n``, ``grid`` or ``N``."""
    try:
        factory = FIXTURES[name]
    except KeyError:
        raise LevelFuzzyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return factory(params or {})
