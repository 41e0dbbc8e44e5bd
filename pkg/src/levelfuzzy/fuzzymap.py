"""Fuzzy-number-valued maps on a compact domain and their embedding.

A map ``f: K -> fuzzy numbers`` is stored pointwise.  Its representation is
the pair of bivariate functions ``f1(lam, t) = f(t)^-(lam)`` and
``f2(lam, t) = f(t)^+(lam)``.  The map ``f -> (f1, f2)`` is isometric for
``D(f, g) = sup_t d_infinity(f(t), g(t))`` and the product max-distance,
and additive and positively homogeneous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from . import bivariate as bv
from . import fuzzy
from . import regulated as rg
from .bivariate import CheckReport, LCCFunction, ProductElement, Verdict, WitnessPoint
from .domain import CompactDomain, ConvergentSequence, IntervalGrid, Point, domain_from_json, point_key, resolve_key
from .errors import DomainMismatch, InvalidEpsilon, NegativeCoefficient, OutOfDomain, ValidationError, Violation
from .fuzzy import FuzzyNumber

__all__ = [
    "FuzzyMap",
    "constant_map",
    "rep",
    "embed",
    "unembed",
    "metric_D",
    "cone_combine",
    "isometry_residual",
    "cone_residual",
    "classify_continuity",
    "check_image_conditions",
    "check_rep_properties",
    "from_json",
    "to_csv",
    "DEFAULT_RESOLUTION",
]

DEFAULT_RESOLUTION = 12


@dataclass(frozen=True, eq=False)
class FuzzyMap:
    domain: CompactDomain
    values: Mapping[Point, FuzzyNumber]
    # optional exact generator, used to look closer to a point than the stored samples
    resampler: Callable[[Point], FuzzyNumber] | None = field(default=None, repr=False)
    hot_knots: tuple[float, ...] = ()
    name: str | None = None

    def __post_init__(self):
        missing = [p for p in self.domain.points if p not in self.values]
        extra = [p for p in self.values if p not in self.domain]
        if missing or extra:
            raise ValidationError(
                [Violation("DomainCoverage", f"values must cover the domain exactly (missing {missing[:3]}, extra {extra[:3]})")]
            )
        object.__setattr__(self, "values", {p: self.values[p] for p in self.domain.points})
        object.__setattr__(self, "hot_knots", tuple(float(x) for x in self.hot_knots))

    def __call__(self, t: Point) -> FuzzyNumber:
        self.domain.check(t)
        return self.values[t]

    def at(self, t: Point) -> FuzzyNumber:
        """Value at ``t``, falling back to the resampler off the stored points."""
        if t in self.domain:
            return self.values[t]
        if self.resampler is None:
            raise OutOfDomain(f"{t!r} is not a stored point and the map has no resampler")
        return self.resampler(t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzyMap):
            return NotImplemented
        return self.domain == other.domain and all(self.values[t] == other.values[t] for t in self.values)

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "domain": self.domain.to_json(),
            "values": {point_key(t): u.to_json() for t, u in self.values.items()},
        }
        if self.hot_knots:
            out["hot_knots"] = list(self.hot_knots)
        if self.name:
            out["fixture"] = {"name": self.name}
        return out


def constant_map(domain: CompactDomain, u: FuzzyNumber) -> FuzzyMap:
    return FuzzyMap(domain, {t: u for t in domain.points}, resampler=lambda t: u)


def _same_domain(f: FuzzyMap, g: FuzzyMap) -> None:
    if f.domain != g.domain:
        raise DomainMismatch("maps live on different domains")


def rep(f: FuzzyMap) -> ProductElement:
    """The pair ``(f1, f2)`` of lower and upper endpoint functions."""
    first = LCCFunction(f.domain, {t: u.lower for t, u in f.values.items()})
    second = LCCFunction(f.domain, {t: u.upper for t, u in f.values.items()})
    return ProductElement(first, second)


embed = rep


def unembed(P: ProductElement) -> FuzzyMap:
    """Inverse of :func:`embed` on its image; raises :class:`ValidationError` off it."""
    values = {t: FuzzyNumber(P.first.column(t), P.second.column(t)) for t in P.domain.points}
    return FuzzyMap(P.domain, values)


def metric_D(f: FuzzyMap, g: FuzzyMap) -> float:
    """``sup_t d_infinity(f(t), g(t))``, computed one domain point at a time."""
    _same_domain(f, g)
    return max(fuzzy.d_infinity(f.values[t], g.values[t]) for t in f.domain.points)


def cone_combine(mu: float, f: FuzzyMap, eta: float, g: FuzzyMap) -> FuzzyMap:
    """Pointwise ``mu f(t) + eta g(t)`` for ``mu, eta >= 0``."""
    if mu < 0 or eta < 0:
        raise NegativeCoefficient(f"coefficients must be nonnegative, got {mu!r} and {eta!r}")
    _same_domain(f, g)
    values = {t: fuzzy.add(fuzzy.scale(mu, f.values[t]), fuzzy.scale(eta, g.values[t])) for t in f.domain.points}
    return FuzzyMap(f.domain, values)


def isometry_residual(f: FuzzyMap, g: FuzzyMap) -> float:
    return abs(metric_D(f, g) - bv.product_distance(embed(f), embed(g)))


def cone_residual(mu: float, f: FuzzyMap, eta: float, g: FuzzyMap) -> float:
    """Distance between ``embed(mu f + eta g)`` and ``mu embed(f) + eta embed(g)``."""
    lhs = embed(cone_combine(mu, f, eta, g))
    P, Q = embed(f), embed(g)
    rhs = ProductElement(
        bv.add(bv.scale(mu, P.first), bv.scale(eta, Q.first)),
        bv.add(bv.scale(mu, P.second), bv.scale(eta, Q.second)),
    )
    return bv.product_distance(lhs, rhs)


# --------------------------------------------------------------------------
# continuity classification


def _refined_points(domain: CompactDomain, t0: Point, level: int, tail: int) -> list[Point]:
    """Points strictly closer to ``t0`` than the stored ones, shrinking like ``2^-level``."""
    if isinstance(domain, ConvergentSequence):
        last, p = float(domain.terms[-1]), float(domain.limit)
        n = len(domain.terms)
        # for terms 1/k this continues the sequence at k = n 2^level + i
        return [p + (last - p) * n / (n * 2**level + i) for i in range(1, tail + 1)]
    i = domain.points.index(float(t0))
    gaps = [abs(domain.points[j] - t0) for j in (i - 1, i + 1) if 0 <= j < len(domain.points)]
    h = max(gaps) * 2.0**-level
    return [x for x in (t0 - h, t0 + h) if domain.a <= x <= domain.b and x != t0]


def _level_probes(f: FuzzyMap, u0: FuzzyNumber, grid_size: int) -> np.ndarray:
    lams = np.concatenate([np.linspace(0.0, 1.0, grid_size), fuzzy.knot_lambdas(u0), np.asarray(f.hot_knots, dtype=float)])
    return np.unique(lams[(lams >= 0.0) & (lams <= 1.0)])


def _residuals(
    f: FuzzyMap, t0: Point, points: Sequence[Point], mode: str, lams: np.ndarray
) -> list[WitnessPoint]:
    u0 = f.at(t0)
    out = []
    for t in points:
        u = f.at(t)
        if mode == "dinf":
            lo = rg.sup_distance_detail(u.lower, u0.lower)
            hi = rg.sup_distance_detail(u.upper, u0.upper)
            best = lo if lo.value >= hi.value else hi
            out.append(WitnessPoint(best.lam, t, best.value, best.kind))
        else:
            prof = np.maximum(
                np.abs(rg._eval_array(u.lower, lams) - rg._eval_array(u0.lower, lams)),
                np.abs(rg._eval_array(u.upper, lams) - rg._eval_array(u0.upper, lams)),
            )
            j = int(np.argmax(prof))
            out.append(WitnessPoint(float(lams[j]), t, float(prof[j])))
    return out


def classify_continuity(
    f: FuzzyMap,
    t0: Point,
    mode: str = "level",
    tol: float = 1e-6,
    resolution: int = DEFAULT_RESOLUTION,
    tail: int = 5,
    grid_size: int = 101,
) -> CheckReport:
    """Semi-decide continuity of ``f`` at ``t0`` for the level or supremum topology.

    The stored points nearest ``t0`` are tested first: every residual must be
    below ``tol`` (``d_infinity`` in ``"dinf"`` mode, the largest level-set
    Hausdorff distance over the probe lambdas in ``"level"`` mode).  When
    that fails and the map has a resampler, points ever closer to ``t0`` are
    generated for up to ``resolution`` halvings.  Without a resampler, a
    failing tail whose residuals are still strictly decreasing is reported
    as :attr:`Verdict.GRID_LIMITED`.
    """
    if mode not in ("level", "dinf"):
        raise ValueError(f"mode must be 'level' or 'dinf', got {mode!r}")
    if not tol > 0:
        raise InvalidEpsilon(f"tol must be positive, got {tol!r}")
    try:
        f.domain.check(t0)
    except KeyError:
        raise OutOfDomain(f"{t0!r} is not a domain point") from None
    reference = {"t0": t0, "mode": mode}
    approach = f.domain.approach(t0)
    if not approach:
        return CheckReport(Verdict.PASS, "isolated point: every map is continuous here", eps=tol, reference=reference)

    lams = _level_probes(f, f.at(t0), grid_size)
    probe_note = f"{len(lams)} lambda probes" if mode == "level" else "exact sup over lambda"
    data = _residuals(f, t0, approach[-tail:], mode, lams)
    details: dict[str, Any] = {"tail_points": [w.t for w in data], "tail_residuals": [w.residual for w in data]}
    if all(w.residual < tol for w in data):
        return CheckReport(Verdict.PASS, f"stored tail of {len(data)} points, {probe_note}", eps=tol, reference=reference, details=details)

    if f.resampler is None or not isinstance(f.domain, (ConvergentSequence, IntervalGrid)) or (
        isinstance(f.domain, ConvergentSequence) and not f.domain.numeric
    ):
        res = [w.residual for w in data]
        decreasing = all(b < a for a, b in zip(res, res[1:]))
        verdict = Verdict.GRID_LIMITED if decreasing and len(res) > 1 else Verdict.FAIL
        return CheckReport(verdict, f"stored tail of {len(data)} points, {probe_note}", witness=data, eps=tol, reference=reference, details=details)

    refined: list[list[float]] = []
    for level in range(1, resolution + 1):
        pts = _refined_points(f.domain, t0, level, tail)
        ws = _residuals(f, t0, pts, mode, lams)
        refined.append([w.residual for w in ws])
        if all(w.residual < tol for w in ws):
            details["refined_residuals"] = refined
            details["refined_points"] = pts
            return CheckReport(
                Verdict.PASS, f"resampled {level} halvings towards t0, {probe_note}", eps=tol, reference=reference, details=details
            )
    details["refined_residuals"] = refined
    return CheckReport(
        Verdict.FAIL, f"stored tail plus {resolution} resampled halvings, {probe_note}", witness=data, eps=tol, reference=reference, details=details
    )


# --------------------------------------------------------------------------
# structure of the representation


def check_image_conditions(P: ProductElement) -> CheckReport:
    """Necessary and (pointwise) sufficient conditions for ``P`` to be some ``embed(f)``.

    Each first column must be a nondecreasing, each second column a
    nonincreasing valid endpoint function, with ``first(1, t) <= second(1, t)``.
    """
    bad: list[WitnessPoint] = []
    for t in P.domain.points:
        lo, hi = P.first.column(t), P.second.column(t)
        if bv.column_direction(lo) not in ("nondecreasing", "constant"):
            bad.append(WitnessPoint(0.0, t, 0.0, "first_not_nondecreasing"))
        if bv.column_direction(hi) not in ("nonincreasing", "constant"):
            bad.append(WitnessPoint(0.0, t, 0.0, "second_not_nonincreasing"))
        gap = float(lo.values[-1] - hi.values[-1])
        if gap > 0:
            bad.append(WitnessPoint(1.0, t, gap, "endpoint_order"))
    if bad:
        return CheckReport(Verdict.FAIL, "exact on knots", witness=bad)
    return CheckReport(Verdict.PASS, "exact on knots")


def check_rep_properties(P: ProductElement, modulus: float | None = None) -> CheckReport:
    """Per-column structure of a representation pair.

    (i) first columns nondecreasing, second columns nonincreasing;
    (ii) columns left continuous, which piecewise-linear columns are by construction;
    (iii) columns right continuous at 0, likewise structural;
    (iv) ``first(1, t) <= second(1, t)``;
    (v) cross-sections continuous in ``t``: on an interval grid, adjacent
    columns differ in sup norm by at most ``modulus`` (when given); on a
    convergent sequence the columns converge uniformly along the tail.
    """
    base = check_image_conditions(P)
    if not base.passed:
        return base
    dom = P.domain
    details: dict[str, Any] = {}
    if isinstance(dom, IntervalGrid) and modulus is not None:
        worst = []
        for a, b in zip(dom.points, dom.points[1:]):
            d = max(rg.sup_distance(P.first.column(a), P.first.column(b)), rg.sup_distance(P.second.column(a), P.second.column(b)))
            worst.append(d)
            if d > modulus:
                return CheckReport(Verdict.FAIL, f"adjacent-column modulus {modulus!r}", witness=[WitnessPoint(0.0, b, d, "adjacent_sup")])
        details["max_adjacent_sup"] = max(worst) if worst else 0.0
    elif isinstance(dom, ConvergentSequence) and dom.numeric:
        d = [
            max(rg.sup_distance(P.first.column(t), P.first.column(dom.limit)), rg.sup_distance(P.second.column(t), P.second.column(dom.limit)))
            for t in dom.terms
        ]
        details["tail_sup_distances"] = d[-5:]
    return CheckReport(Verdict.PASS, "exact on knots", details=details)


# --------------------------------------------------------------------------
# serialisation


def from_json(obj: dict[str, Any]) -> FuzzyMap:
    """Parse the map JSON; a ``fixture`` entry reattaches that fixture's resampler."""
    domain = domain_from_json(obj["domain"])
    values = {resolve_key(domain, k): fuzzy.from_json(v) for k, v in obj["values"].items()}
    resampler = None
    name = (obj.get("fixture") or {}).get("name")
    if name:
        from . import fixtures

        resampler = fixtures.RESAMPLERS.get(name)
    return FuzzyMap(domain, values, resampler=resampler, hot_knots=tuple(obj.get("hot_knots", ())), name=name)


def to_csv(f: FuzzyMap, lambdas: Sequence[float] | None = None) -> str:
    """Rows ``t, lambda, f1, f2`` at the given lambdas (default: every knot of each value)."""
    lines = ["t,lambda,f1,f2"]
    for t, u in f.values.items():
        lams = fuzzy.knot_lambdas(u) if lambdas is None else np.asarray(lambdas, dtype=float)
        lo, hi = rg._eval_array(u.lower, lams), rg._eval_array(u.upper, lams)
        for a, b, c in zip(lams, lo, hi):
            lines.append(f"{point_key(t)},{float(a)!r},{float(b)!r},{float(c)!r}")
    return "\n".join(lines) + "\n"
