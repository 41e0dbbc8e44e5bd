"""Real functions on ``[0, 1] x K`` that are monotone in the first variable.

Elements are stored column by column: one piecewise-linear function of
``lam`` per domain point ``t``.  Membership in the left continuous -
continuous class (jointly left continuous - continuous on ``(0, 1] x K``,
jointly right continuous - continuous on ``{0} x K``, monotone columns) is
checked by witness-searching semi-decisions, never assumed.

All checkers return a :class:`CheckReport`.  A failing report always carries
witness points that :func:`reevaluate_witness` can recompute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import regulated as rg
from .domain import CompactDomain, Point, domain_from_json, point_key, resolve_key
from .errors import DomainMismatch, MixedDirections, NotUniformlyConvergent, OutOfDomain, UnknownPoint, ValidationError, Violation
from .regulated import Direction, PiecewiseLinear, PLJFunction

__all__ = [
    "Verdict",
    "WitnessPoint",
    "CheckReport",
    "ColumnFunction",
    "LCCFunction",
    "AnalyticFunction",
    "ProductElement",
    "evaluate",
    "right_limit_lambda",
    "column_direction",
    "check_monotone_first",
    "check_joint_left_continuity",
    "check_joint_right_continuity_at_zero",
    "check_joint_right_limit",
    "check_membership",
    "sup_bound",
    "sup_distance_bivar",
    "check_uniform_limit_membership",
    "check_right_limit_lemma1",
    "check_right_limit_lemma2",
    "product_distance",
    "add",
    "scale",
    "reevaluate_witness",
    "from_json",
    "to_csv",
    "DEFAULT_EPS",
    "SEARCH_DEPTH",
]

DEFAULT_EPS = (0.5, 0.25, 0.1)
SEARCH_DEPTH = 20
# probes run this many dyadic levels deeper than the smallest delta tried
PROBE_EXTRA = 10


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    PREMISE_FAILED = "premise_failed"
    GRID_LIMITED = "grid_limited"


@dataclass(frozen=True)
class WitnessPoint:
    lam: float
    t: Point
    residual: float
    # "value": F(lam, t); "right_limit": F(lam+, t); "left_limit": F(lam-, t)
    kind: str = "value"

    def to_json(self) -> dict[str, Any]:
        return {"lambda": self.lam, "t": self.t, "residual": self.residual, "kind": self.kind}


@dataclass
class CheckReport:
    verdict: Verdict
    resolution: str
    witness: list[WitnessPoint] | None = None
    eps: float | None = None
    reference: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.FAIL and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"verdict": self.verdict.value, "resolution": self.resolution}
        if self.eps is not None:
            out["eps"] = self.eps
        if self.reference is not None:
            out["reference"] = self.reference
        if self.witness:
            out["witness"] = [w.to_json() for w in self.witness]
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Enum):
        return obj.value
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


# --------------------------------------------------------------------------
# representations


class ColumnFunction:
    """A function on ``[0, 1] x K`` given by one piecewise-linear column per point.

    Columns may be non-monotone; such objects are raw samples, not members
    of the left continuous - continuous class.
    """

    def __init__(self, domain: CompactDomain, columns: Mapping[Point, PiecewiseLinear]):
        pts = list(domain.points)
        missing = [p for p in pts if p not in columns]
        extra = [p for p in columns if p not in domain]
        if missing or extra:
            raise ValidationError(
                [Violation("DomainCoverage", f"columns must cover the domain exactly (missing {missing[:3]}, extra {extra[:3]})")]
            )
        self.domain = domain
        self.columns: dict[Point, PiecewiseLinear] = {p: self._coerce(columns[p]) for p in pts}

    def _coerce(self, f: PiecewiseLinear) -> PiecewiseLinear:
        return f

    def column(self, t: Point) -> PiecewiseLinear:
        try:
            return self.columns[t]
        except KeyError:
            raise UnknownPoint(f"{t!r} is not a domain point") from None

    def eval_grid(self, lams: np.ndarray, points: Sequence[Point]) -> np.ndarray:
        """Values ``F(lam, t)`` as an array of shape ``(len(lams), len(points))``."""
        lams = np.asarray(lams, dtype=float)
        return np.column_stack([rg._eval_array(self.column(t), lams) for t in points]) if len(points) else np.empty((len(lams), 0))

    def right_grid(self, lams: np.ndarray, points: Sequence[Point]) -> np.ndarray:
        lams = np.asarray(lams, dtype=float)
        return np.column_stack([rg._right_array(self.column(t), lams) for t in points]) if len(points) else np.empty((len(lams), 0))

    def knots_at(self, t: Point) -> np.ndarray:
        return self.column(t).lambdas

    def directions(self) -> dict[Point, str | None]:
        return {t: column_direction(f) for t, f in self.columns.items()}

    @property
    def is_lcc_columns(self) -> bool:
        return all(f.is_monotone for f in self.columns.values())

    @property
    def in_nd_cone(self) -> bool:
        """Every column nondecreasing."""
        return all(d in ("nondecreasing", "constant") for d in self.directions().values())

    @property
    def in_ni_cone(self) -> bool:
        return all(d in ("nonincreasing", "constant") for d in self.directions().values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColumnFunction):
            return NotImplemented
        return self.domain == other.domain and all(self.columns[t] == other.columns[t] for t in self.columns)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.domain.kind}, {len(self.columns)} columns)"

    def to_json(self) -> dict[str, Any]:
        return {
            "domain": self.domain.to_json(),
            "columns": {point_key(t): f.to_json() for t, f in self.columns.items()},
        }


class LCCFunction(ColumnFunction):
    """Column function whose columns are all monotone :class:`PLJFunction` objects."""

    def _coerce(self, f: PiecewiseLinear) -> PLJFunction:
        return rg.as_monotone(f)


class AnalyticFunction:
    """A function on ``[0, 1] x K`` given in closed form.

    ``func(lams, t)`` must accept an array of lambdas.  ``right_func`` gives
    right limits in closed form where they differ from values (defaults to
    ``func``, i.e. continuity in ``lam``); ``hot_lambdas`` are lambdas the
    checkers always probe.
    """

    def __init__(
        self,
        domain: CompactDomain,
        func: Callable[[np.ndarray, Point], np.ndarray],
        right_func: Callable[[np.ndarray, Point], np.ndarray] | None = None,
        hot_lambdas: Iterable[float] = (),
        name: str = "analytic",
    ):
        self.domain = domain
        self.func = func
        self.right_func = right_func or func
        self.hot_lambdas = tuple(float(x) for x in hot_lambdas)
        self.name = name

    def eval_grid(self, lams: np.ndarray, points: Sequence[Point]) -> np.ndarray:
        lams = np.asarray(lams, dtype=float)
        cols = [np.broadcast_to(np.asarray(self.func(lams, t), dtype=float), lams.shape) for t in points]
        return np.column_stack(cols) if cols else np.empty((len(lams), 0))

    def right_grid(self, lams: np.ndarray, points: Sequence[Point]) -> np.ndarray:
        lams = np.asarray(lams, dtype=float)
        cols = [np.broadcast_to(np.asarray(self.right_func(lams, t), dtype=float), lams.shape) for t in points]
        return np.column_stack(cols) if cols else np.empty((len(lams), 0))

    def knots_at(self, t: Point) -> np.ndarray:
        return np.array(sorted({0.0, 1.0, *self.hot_lambdas}))

    def __repr__(self) -> str:
        return f"AnalyticFunction({self.name!r}, {self.domain.kind})"


Bivariate = ColumnFunction | AnalyticFunction


@dataclass(frozen=True, eq=False)
class ProductElement:
    first: ColumnFunction
    second: ColumnFunction

    def __post_init__(self):
        if self.first.domain != self.second.domain:
            raise DomainMismatch("product components must share a domain")

    @property
    def domain(self) -> CompactDomain:
        return self.first.domain

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProductElement):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def __add__(self, other: "ProductElement") -> "ProductElement":
        return ProductElement(add(self.first, other.first), add(self.second, other.second))

    def __rmul__(self, k: float) -> "ProductElement":
        return ProductElement(scale(k, self.first), scale(k, self.second))

    def to_json(self) -> dict[str, Any]:
        return {"first": self.first.to_json(), "second": self.second.to_json()}


# --------------------------------------------------------------------------
# evaluation


def _check_lam(lam: float, upper_open: bool = False) -> None:
    if not (0.0 <= lam <= 1.0) or (upper_open and lam >= 1.0):
        raise OutOfDomain(f"lambda {lam!r} outside [0, 1{')' if upper_open else ']'}")


def evaluate(F: Bivariate, lam: float, t: Point) -> float:
    _check_lam(lam)
    F.domain.check(t)
    return float(F.eval_grid(np.array([lam]), [t])[0, 0])


def right_limit_lambda(F: Bivariate, lam: float, t: Point) -> float:
    """``F(lam+, t)``: the right limit in the first variable."""
    _check_lam(lam, upper_open=True)
    F.domain.check(t)
    return float(F.right_grid(np.array([lam]), [t])[0, 0])


def _point_value(F: Bivariate, lam: float, t: Point, kind: str) -> float:
    if kind == "right_limit":
        return float(F.right_grid(np.array([lam]), [t])[0, 0])
    # a left limit of a left-continuous column is its value
    return float(F.eval_grid(np.array([lam]), [t])[0, 0])


def column_direction(f: PiecewiseLinear) -> str | None:
    """``"constant"``, ``"nondecreasing"``, ``"nonincreasing"`` or ``None`` (not monotone)."""
    if f.is_constant:
        return "constant"
    d = rg._monotone_direction(f.values, f.rights)
    return None if d is None else d.value


# --------------------------------------------------------------------------
# monotonicity


def _triple(seq: np.ndarray) -> tuple[int, int, int] | None:
    """Indices ``i < j < k`` with ``seq[j]`` a strict peak or valley, if any."""
    d = np.diff(seq)
    up = np.nonzero(d > 0)[0]
    down = np.nonzero(d < 0)[0]
    if len(up) == 0 or len(down) == 0:
        return None
    p, q = int(up[0]), int(down[0])
    if p < q:
        j = p + 1 + int(np.argmax(seq[p + 1 : q + 1]))
        return p, j, q + 1
    j = q + 1 + int(np.argmin(seq[q + 1 : p + 1]))
    return q, j, p + 1


def _sample_lambdas(F: Bivariate, t: Point, size: int = 201) -> np.ndarray:
    base = np.linspace(0.0, 1.0, size)
    hot = np.asarray(F.knots_at(t), dtype=float)
    near = np.concatenate([hot + s * 2.0**-k for s in (-1, 1) for k in (10, 20, 30)])
    lams = np.concatenate([base, hot, near])
    return np.unique(lams[(lams >= 0.0) & (lams <= 1.0)])


def check_monotone_first(F: Bivariate) -> tuple[CheckReport, dict[Point, str | None]]:
    """Monotonicity of every column ``F(., t)``; fails with a peak/valley triple."""
    directions: dict[Point, str | None] = {}
    for t in F.domain.points:
        if isinstance(F, ColumnFunction):
            f = F.column(t)
            directions[t] = column_direction(f)
            if directions[t] is not None:
                continue
            seq = rg._interleave(f.values, f.rights)[:-1]
            lam_of = np.repeat(f.lambdas, 2)[:-1]
            kinds = ["value", "right_limit"] * len(f)
            tri = _triple(seq)
            pts = [WitnessPoint(float(lam_of[i]), t, float(seq[i]), kinds[i]) for i in tri]
            resolution = "exact on knots"
        else:
            lams = _sample_lambdas(F, t)
            vals = F.eval_grid(lams, [t])[:, 0]
            tri = _triple(vals)
            if tri is None:
                d = np.diff(vals)
                directions[t] = "constant" if np.all(d == 0) else ("nondecreasing" if np.all(d >= 0) else "nonincreasing")
                continue
            directions[t] = None
            pts = [WitnessPoint(float(lams[i]), t, float(vals[i])) for i in tri]
            resolution = f"sampled on {len(lams)} lambdas"
        # residual slot holds the function value at each triple point
        return (
            CheckReport(Verdict.FAIL, resolution, witness=pts, details={"t": t, "note": "witness residuals are function values"}),
            directions,
        )
    res = "exact on knots" if isinstance(F, ColumnFunction) else "sampled"
    return CheckReport(Verdict.PASS, res, details={"directions": {point_key(t): d for t, d in directions.items()}}), directions


# --------------------------------------------------------------------------
# joint continuity searches


@dataclass
class _Rows:
    lam: np.ndarray
    kind: list[str]
    dist: np.ndarray  # distance from lam0 that decides window membership


def _probe_rows(F: Bivariate, lam0: float, side: str, points: Sequence[Point], depth: int) -> _Rows:
    offs = 2.0 ** -np.arange(1, depth + PROBE_EXTRA + 1)
    lam: list[np.ndarray] = []
    kind: list[str] = []
    dist: list[np.ndarray] = []

    def push(x: np.ndarray, d: np.ndarray, k: str):
        ok = (x >= 0.0) & (x <= 1.0)
        if k == "right_limit":
            ok &= x < 1.0
        lam.append(x[ok])
        dist.append(d[ok])
        kind.extend([k] * int(ok.sum()))

    if side == "left":
        push(lam0 - offs, offs, "value")
        push(lam0 - offs, offs, "right_limit")
        if isinstance(F, ColumnFunction):
            push(np.array([lam0]), np.array([0.0]), "left_limit")
    elif side == "right":
        push(lam0 + offs, offs, "value")
        push(lam0 + offs, offs, "right_limit")
        push(np.array([lam0]), np.array([0.0]), "right_limit")
    else:  # zero
        push(offs, offs, "value")
        push(offs, offs, "right_limit")
        push(np.array([0.0]), np.array([0.0]), "value")
        push(np.array([0.0]), np.array([0.0]), "right_limit")

    # knots of raw or analytic columns can hide interior extrema
    knots = [F.knots_at(t) for t in points if not isinstance(F, ColumnFunction) or not F.column(t).is_monotone]
    if isinstance(F, AnalyticFunction):
        knots.append(np.asarray(F.hot_lambdas, dtype=float))
    if knots:
        ks = np.unique(np.concatenate(knots))
        d = lam0 - ks if side == "left" else ks - lam0
        sel = (d > 0) & (d <= 0.5) if side != "zero" else (ks >= 0) & (ks <= 0.5)
        dd = d[sel] if side != "zero" else ks[sel]
        push(ks[sel], dd, "value")
        push(ks[sel], dd, "right_limit")
    return _Rows(np.concatenate(lam), kind, np.concatenate(dist))


def _window_masks(rows: _Rows, side: str, deltas: np.ndarray) -> np.ndarray:
    """Boolean (n_delta, n_rows): rows inside the open window of each delta."""
    d = rows.dist[None, :]
    kinds = np.array(rows.kind)
    dl = deltas[:, None]
    if side == "left":
        # values strictly inside; right limits may sit on the open left end
        inside = np.where(kinds == "value", (d > 0) & (d < dl), (d > 0) & (d <= dl))
        inside |= kinds == "left_limit"
    elif side == "right":
        # right limits at lam0 itself and strictly inside; values may sit on the open right end
        inside = np.where(kinds == "value", (d > 0) & (d <= dl), (d >= 0) & (d < dl))
    else:
        inside = np.where(kinds == "value", d <= dl, d < dl)
    return inside


def _joint_search(
    F: Bivariate,
    lam0: float,
    t0: Point,
    side: str,
    reference: float,
    ref_kind: str,
    eps_list: Sequence[float],
    depth: int,
) -> CheckReport:
    nbhds = F.domain.neighbourhoods(t0)
    cols = list(nbhds[0])
    col_index = {p: i for i, p in enumerate(cols)}
    nb_masks = np.zeros((len(nbhds), len(cols)), dtype=bool)
    for m, nb in enumerate(nbhds):
        nb_masks[m, [col_index[p] for p in nb]] = True

    rows = _probe_rows(F, lam0, side, cols, depth)
    is_right = np.array([k == "right_limit" for k in rows.kind])
    is_value = np.array([k == "value" for k in rows.kind])
    values = np.empty((len(rows.lam), len(cols)))
    if (~is_right).any():
        values[~is_right] = F.eval_grid(rows.lam[~is_right], cols)
    if is_right.any():
        values[is_right] = F.right_grid(rows.lam[is_right], cols)
    resid = np.abs(values - reference)

    deltas = 2.0 ** -np.arange(1, depth + 1)
    wmask = _window_masks(rows, side, deltas)
    # colmax[j, c]: max residual in window j for column c
    colmax = np.where(wmask[:, :, None], resid[None, :, :], -np.inf).max(axis=1)
    # table[j, m]: max residual over window j x neighbourhood m
    table = np.where(nb_masks[None, :, :], colmax[:, None, :], -np.inf).max(axis=2)
    table = np.maximum(table, 0.0)

    ref = {"lambda": lam0, "t": t0, "value": reference, "kind": ref_kind}
    resolution = f"deltas 2^-1..2^-{depth}, {len(nbhds)} nested neighbourhoods, {len(rows.lam)} lambda probes"
    found: list[dict[str, Any]] = []
    for eps in eps_list:
        hit = np.argwhere(table < eps)
        if len(hit) == 0:
            witness = []
            for j in range(depth):
                m = round(j * (len(nbhds) - 1) / max(depth - 1, 1))
                block = np.where(wmask[j][:, None] & nb_masks[m][None, :], resid, -np.inf)
                # an actual value inside the window beats a one-sided limit
                vblock = np.where(is_value[:, None], block, -np.inf)
                if vblock.max() >= eps:
                    block = vblock
                r, c = np.unravel_index(int(np.argmax(block)), block.shape)
                witness.append(WitnessPoint(float(rows.lam[r]), cols[c], float(resid[r, c]), rows.kind[r]))
            return CheckReport(
                Verdict.FAIL,
                resolution,
                witness=witness,
                eps=float(eps),
                reference=ref,
                details={"smallest_window_residual": float(table[-1, -1]), "passed_eps": found},
            )
        j, m = (int(x) for x in hit[0])
        found.append({"eps": float(eps), "delta": float(deltas[j]), "neighbourhood_size": int(nb_masks[m].sum())})
    return CheckReport(
        Verdict.PASS,
        resolution,
        reference=ref,
        details={"smallest_window_residual": float(table[-1, -1]), "passed_eps": found},
    )


def check_joint_left_continuity(
    F: Bivariate,
    point: tuple[float, Point],
    eps_list: Sequence[float] = DEFAULT_EPS,
    search_depth: int = SEARCH_DEPTH,
) -> CheckReport:
    """Search ``delta`` and a neighbourhood ``V`` of ``t0`` with
    ``|F(a, s) - F(lam0, t0)| < eps`` on ``(lam0 - delta, lam0) x V``."""
    lam0, t0 = point
    if not 0.0 < lam0 <= 1.0:
        raise OutOfDomain(f"lambda0 {lam0!r} outside (0, 1]")
    F.domain.check(t0)
    ref = float(F.eval_grid(np.array([lam0]), [t0])[0, 0])
    return _joint_search(F, lam0, t0, "left", ref, "value", eps_list, search_depth)


def check_joint_right_continuity_at_zero(
    F: Bivariate,
    t0: Point,
    eps_list: Sequence[float] = DEFAULT_EPS,
    search_depth: int = SEARCH_DEPTH,
) -> CheckReport:
    F.domain.check(t0)
    ref = float(F.eval_grid(np.array([0.0]), [t0])[0, 0])
    return _joint_search(F, 0.0, t0, "zero", ref, "value", eps_list, search_depth)


def check_joint_right_limit(
    F: Bivariate,
    point: tuple[float, Point],
    eps_list: Sequence[float] = DEFAULT_EPS,
    search_depth: int = SEARCH_DEPTH,
) -> CheckReport:
    """Search ``delta`` and ``V`` with ``|F(lam, t) - F(lam0+, t0)| < eps`` on ``(lam0, lam0 + delta) x V``."""
    lam0, t0 = point
    if not 0.0 <= lam0 < 1.0:
        raise OutOfDomain(f"lambda0 {lam0!r} outside [0, 1)")
    F.domain.check(t0)
    ref = float(F.right_grid(np.array([lam0]), [t0])[0, 0])
    return _joint_search(F, lam0, t0, "right", ref, "right_limit", eps_list, search_depth)


def reevaluate_witness(F: Bivariate, report: CheckReport) -> list[float]:
    """Recompute the residual of every witness point of a joint-continuity report."""
    if not report.witness or report.reference is None:
        return []
    ref = report.reference["value"]
    return [abs(_point_value(F, w.lam, w.t, w.kind) - ref) for w in report.witness]


def _probe_points(F: Bivariate, t: Point, n_uniform: int = 5) -> list[float]:
    lams = set(np.linspace(0.0, 1.0, n_uniform)[1:].tolist())
    if isinstance(F, ColumnFunction):
        f = F.column(t)
        jumps = f.lambdas[f.values != f.rights]
        lams.update(float(x) for x in jumps if x > 0)
        if len(f) <= 16:
            lams.update(float(x) for x in f.lambdas if x > 0)
    else:
        lams.update(x for x in F.hot_lambdas if 0 < x <= 1)
    return sorted(lams)


def check_membership(
    F: Bivariate,
    eps_list: Sequence[float] = DEFAULT_EPS,
    search_depth: int = SEARCH_DEPTH,
    probes: Mapping[Point, Iterable[float]] | None = None,
) -> CheckReport:
    """Run every class check: monotone columns, joint left continuity at the
    probe points, joint right continuity at ``lam = 0``."""
    report, directions = check_monotone_first(F)
    if not report.passed:
        report.details["check"] = "monotone_first"
        return report
    n_checks = 0
    for t in F.domain.points:
        r = check_joint_right_continuity_at_zero(F, t, eps_list, search_depth)
        n_checks += 1
        if not r.passed:
            r.details["check"] = "joint_right_continuity_at_zero"
            return r
        lams = probes[t] if probes is not None and t in probes else _probe_points(F, t)
        for lam0 in lams:
            r = check_joint_left_continuity(F, (lam0, t), eps_list, search_depth)
            n_checks += 1
            if not r.passed:
                r.details["check"] = "joint_left_continuity"
                return r
    return CheckReport(
        Verdict.PASS,
        f"{n_checks} joint checks at eps {list(eps_list)}",
        details={"directions": {point_key(t): d for t, d in directions.items()}},
    )


# --------------------------------------------------------------------------
# boundedness and distances


def sup_bound(F: Bivariate, samples: int = 1001) -> tuple[float, bool, tuple[float, Point, str]]:
    """``sup |F|`` with attainment flag and location ``(lam, t, kind)``.

    Exact (right-limit aware) for column functions; sampled for analytic ones.
    """
    best: tuple[float, bool, tuple[float, Point, str]] | None = None
    for t in F.domain.points:
        if isinstance(F, ColumnFunction):
            s = rg.sup_norm(F.column(t))
            cand = (s.value, s.attained, (s.lam, t, s.kind))
        else:
            lams = np.unique(np.concatenate([np.linspace(0, 1, samples), _sample_lambdas(F, t)]))
            v = np.abs(F.eval_grid(lams, [t])[:, 0])
            i = int(np.argmax(v))
            cand = (float(v[i]), True, (float(lams[i]), t, "value"))
        if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] and not best[1]):
            best = cand
    assert best is not None
    return best


def _same_domain(F: ColumnFunction, G: ColumnFunction) -> None:
    if F.domain != G.domain:
        raise DomainMismatch("functions live on different domains")


def sup_distance_bivar(F: ColumnFunction, G: ColumnFunction) -> float:
    """Exact ``sup |F - G|`` over ``[0, 1] x K``."""
    _same_domain(F, G)
    return max(rg.sup_distance(F.column(t), G.column(t)) for t in F.domain.points)


def product_distance(P: ProductElement, Q: ProductElement) -> float:
    """``max(||P.first - Q.first||, ||P.second - Q.second||)``."""
    return max(sup_distance_bivar(P.first, Q.first), sup_distance_bivar(P.second, Q.second))


def _wrap(domain: CompactDomain, cols: dict[Point, PiecewiseLinear]) -> ColumnFunction:
    if all(isinstance(f, PLJFunction) for f in cols.values()):
        return LCCFunction(domain, cols)
    return ColumnFunction(domain, cols)


def _plain(f: PiecewiseLinear) -> PiecewiseLinear:
    return PiecewiseLinear(f.lambdas, f.values, f.rights)


def add(F: ColumnFunction, G: ColumnFunction) -> ColumnFunction:
    """Columnwise sum.  Columns of opposite directions give raw (possibly
    non-monotone) columns, so the result may fall outside the class."""
    _same_domain(F, G)
    cols = {}
    for t in F.domain.points:
        f, g = F.column(t), G.column(t)
        try:
            cols[t] = rg.add(f, g)
        except MixedDirections:
            s = rg.add(_plain(f), g)
            cols[t] = rg.as_monotone(s) if s.is_monotone else s
    return _wrap(F.domain, cols)


def scale(k: float, F: ColumnFunction) -> ColumnFunction:
    return _wrap(F.domain, {t: rg.scale(k, F.column(t)) for t in F.domain.points})


# --------------------------------------------------------------------------
# closedness under uniform limits


def check_uniform_limit_membership(
    seq: Sequence[ColumnFunction],
    F: ColumnFunction,
    tol: float,
    eps_list: Sequence[float] = DEFAULT_EPS,
    search_depth: int = SEARCH_DEPTH,
) -> CheckReport:
    """Check that the uniform limit ``F`` of ``seq`` is in the class.

    Besides the class checks on ``F``, a column whose sequence directions
    keep alternating (both directions occur among the second half of the
    prefix) must be constant in the limit.
    """
    if not seq:
        raise NotUniformlyConvergent("empty sequence")
    for G in seq:
        _same_domain(G, F)
    dists = [sup_distance_bivar(G, F) for G in seq]
    if not dists[-1] < tol:
        raise NotUniformlyConvergent(f"last sup distance {dists[-1]!r} is not below tol {tol!r}")

    report = check_membership(F, eps_list, search_depth)
    half = list(seq[len(seq) // 2 :])
    forced: list[Point] = []
    for t in F.domain.points:
        dirs = {column_direction(G.column(t)) for G in half}
        if {"nondecreasing", "nonincreasing"} <= dirs:
            forced.append(t)
            f = F.column(t)
            if not f.is_constant:
                return CheckReport(
                    Verdict.FAIL,
                    "exact on knots",
                    witness=[WitnessPoint(float(k.lam), t, abs(k.value - f.values[0])) for k in f.knots if k.value != f.values[0]][:3]
                    or [WitnessPoint(0.0, t, 0.0)],
                    details={"check": "alternating_directions_force_constant", "t": t, "sup_distances": dists},
                )
    report.details.update({"sup_distances": dists, "constant_columns_forced": forced})
    return report


# --------------------------------------------------------------------------
# right-limit lemmas


def check_right_limit_lemma1(
    F: Bivariate,
    t0: Point,
    lambda0: float,
    step_count: int = 40,
    tol: float = 1e-9,
) -> CheckReport:
    """``F(lam+, t0) -> F(lambda0+, t0)`` as ``lam`` decreases to ``lambda0``.

    For piecewise-linear columns the limit is settled exactly from the affine
    piece right of ``lambda0``; the dyadic probe residuals are reported too.
    """
    if not 0.0 <= lambda0 < 1.0:
        raise OutOfDomain(f"lambda0 {lambda0!r} outside [0, 1)")
    F.domain.check(t0)
    ref = float(F.right_grid(np.array([lambda0]), [t0])[0, 0])
    steps = lambda0 + 2.0 ** -np.arange(1, step_count + 1)
    steps = steps[(steps > lambda0) & (steps < 1.0)]
    residuals = np.abs(F.right_grid(steps, [t0])[:, 0] - ref) if len(steps) else np.array([])
    reference = {"lambda": lambda0, "t": t0, "value": ref, "kind": "right_limit"}
    details: dict[str, Any] = {"probe_lambdas": steps.tolist(), "probe_residuals": residuals.tolist()}
    if isinstance(F, ColumnFunction):
        f = F.column(t0)
        k = int(np.searchsorted(f.lambdas, lambda0, side="right"))
        nxt = float(f.lambdas[k])
        slope = (f.values[k] - f.rights[k - 1]) / (nxt - f.lambdas[k - 1])
        delta = nxt - lambda0 if slope == 0 else min(nxt - lambda0, tol / abs(slope))
        details.update({"delta": delta, "slope": float(slope)})
        return CheckReport(Verdict.PASS, "exact: affine piece right of lambda0", reference=reference, details=details)
    if len(residuals) == 0 or residuals[-1] < tol:
        return CheckReport(Verdict.PASS, f"{len(steps)} dyadic probes", reference=reference, details=details)
    w = [WitnessPoint(float(x), t0, float(r), "right_limit") for x, r in zip(steps[-3:], residuals[-3:])]
    return CheckReport(Verdict.FAIL, f"{len(steps)} dyadic probes", witness=w, eps=tol, reference=reference, details=details)


def _lemma2_lambdas(F: Bivariate, t0: Point, tail: Sequence[Point]) -> np.ndarray:
    lams = [np.linspace(0.0, 1.0, 101), np.asarray(F.knots_at(t0), dtype=float)]
    if isinstance(F, ColumnFunction):
        for t in tail:
            f = F.column(t)
            lams.append(f.lambdas[f.values != f.rights])
    out = np.unique(np.concatenate(lams))
    return out[out < 1.0]


def check_right_limit_lemma2(
    F: Bivariate,
    t0: Point,
    tol: float = 1e-6,
    tail: int = 5,
) -> CheckReport:
    """Right limits ``F(lam0+, t) -> F(lam0+, t0)`` as ``t -> t0``, for every probed ``lam0``.

    The conclusion only follows when ``F(., t) -> F(., t0)`` uniformly in
    ``lam``; that premise is checked first on the last ``tail`` approach
    points, and its failure is reported as :attr:`Verdict.PREMISE_FAILED`
    together with the observed right-limit discrepancy.
    """
    approach = F.domain.approach(t0)
    if not approach:
        return CheckReport(Verdict.PASS, "isolated point: nothing approaches t0")
    pts = list(approach[-tail:])

    premise: list[WitnessPoint] = []
    for t in pts:
        if isinstance(F, ColumnFunction):
            s = rg.sup_distance_detail(F.column(t), F.column(t0))
            premise.append(WitnessPoint(s.lam, t, s.value, s.kind))
        else:
            lams = _sample_lambdas(F, t)
            d = np.abs(F.eval_grid(lams, [t])[:, 0] - F.eval_grid(lams, [t0])[:, 0])
            i = int(np.argmax(d))
            premise.append(WitnessPoint(float(lams[i]), t, float(d[i])))
    premise_ok = all(w.residual < tol for w in premise)

    lams = _lemma2_lambdas(F, t0, pts)
    ref = F.right_grid(lams, [t0])[:, 0]
    rl = F.right_grid(lams, pts)
    resid = np.abs(rl - ref[:, None])
    i = int(np.argmax(resid[:, -1]))
    conclusion = {
        "lambda0": float(lams[i]),
        "t": pts[-1],
        "right_limit_at_t": float(rl[i, -1]),
        "right_limit_at_t0": float(ref[i]),
        "residual": float(resid[i, -1]),
    }
    details = {
        "premise_residuals": [w.residual for w in premise],
        "conclusion": conclusion,
        "max_conclusion_residual": float(resid.max()),
    }
    resolution = f"last {len(pts)} approach points, {len(lams)} lambda0 probes"
    if not premise_ok:
        bad = [w for w in premise if w.residual >= tol]
        return CheckReport(Verdict.PREMISE_FAILED, resolution, witness=bad, eps=tol, details=details)
    if resid.max() < tol:
        return CheckReport(Verdict.PASS, resolution, details=details)
    r, c = np.unravel_index(int(np.argmax(resid)), resid.shape)
    w = [WitnessPoint(float(lams[r]), pts[c], float(resid[r, c]), "right_limit")]
    return CheckReport(Verdict.FAIL, resolution, witness=w, eps=tol, details=details)


# --------------------------------------------------------------------------
# serialisation


def from_json(obj: dict[str, Any]) -> ColumnFunction:
    domain = domain_from_json(obj["domain"])
    cols = {resolve_key(domain, k): rg.from_json(v) for k, v in obj["columns"].items()}
    return _wrap(domain, cols)


def to_csv(F: ColumnFunction) -> str:
    """Rows ``lambda, t, value, right_limit`` at every knot of every column."""
    lines = ["lambda,t,value,right_limit"]
    for t, f in F.columns.items():
        for k in f.knots:
            lines.append(f"{k.lam!r},{point_key(t)},{k.value!r},{k.right!r}")
    return "\n".join(lines) + "\n"
