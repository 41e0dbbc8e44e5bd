"""Level convergence and supremum-metric convergence of fuzzy-number sequences.

Both oracles are semi-decisions: a sequence "converges" when every residual
in its final ``tail`` entries is below ``tol`` on the given lambda grid.
A verdict of convergence therefore means "no witness at this resolution".
Since ``d_H([u]^lam, [v]^lam) <= d_infinity(u, v)`` for every lambda, the
level verdict can never be stricter than the supremum verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import regulated as rg
from .errors import EmptySequence, InvalidEpsilon, LevelFuzzyError, OutOfDomain
from .fuzzy import FuzzyNumber, knot_lambdas

__all__ = [
    "LambdaSet",
    "ConvergenceReport",
    "in_neighborhood",
    "level_converges",
    "dinf_converges",
    "compare_convergence",
    "hausdorff_profile",
    "DEFAULT_TOL",
    "DEFAULT_TAIL",
    "RIGHT_PROBE",
]

DEFAULT_TOL = 1e-6
DEFAULT_TAIL = 5
DEFAULT_GRID_SIZE = 101
# offset used to sample just to the right of every knot
RIGHT_PROBE = 2.0**-20


@dataclass(frozen=True)
class LambdaSet:
    lambdas: tuple[float, ...]

    def __post_init__(self):
        lams = tuple(float(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lams)
        if not lams:
            raise OutOfDomain("lambda set is empty")
        if any(not 0.0 <= x <= 1.0 for x in lams):
            raise OutOfDomain("lambda set must lie in [0, 1]")
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise OutOfDomain("lambda set must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[float]) -> "LambdaSet":
        return cls(tuple(sorted({float(v) for v in values})))

    @classmethod
    def default(cls, *inputs: FuzzyNumber, size: int = DEFAULT_GRID_SIZE) -> "LambdaSet":
        """Uniform grid plus every knot of ``inputs`` and a probe right of each knot."""
        lams = [np.linspace(0.0, 1.0, size)]
        if inputs:
            knots = knot_lambdas(*inputs)
            probes = knots + RIGHT_PROBE
            lams += [knots, probes[probes < 1.0]]
        return cls.of(np.concatenate(lams))

    def __iter__(self):
        return iter(self.lambdas)

    def __len__(self) -> int:
        return len(self.lambdas)

    def array(self) -> np.ndarray:
        return np.asarray(self.lambdas)


@dataclass
class ConvergenceReport:
    converges: bool
    residuals: list[float]
    tail_indices: list[int]
    tol: float
    per_lambda_residuals: dict[float, float] = field(default_factory=dict)
    witness: tuple[float, int, float] | None = None

    def __post_init__(self):
        assert self.converges == (self.witness is None)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "converges": self.converges,
            "tol": self.tol,
            "tail_indices": self.tail_indices,
            "residuals": self.residuals,
        }
        if self.per_lambda_residuals:
            out["per_lambda_residuals"] = [[lam, r] for lam, r in self.per_lambda_residuals.items()]
        if self.witness is not None:
            lam, idx, r = self.witness
            out["witness"] = {"lambda": lam, "index": idx, "residual": r}
        return out


def in_neighborhood(v: FuzzyNumber, u: FuzzyNumber, lambdas: LambdaSet | Iterable[float], eps: float) -> bool:
    """Membership of ``v`` in the basic level-topology neighbourhood of ``u``."""
    if not eps > 0:
        raise InvalidEpsilon(f"eps must be positive, got {eps!r}")
    lams = lambdas.array() if isinstance(lambdas, LambdaSet) else LambdaSet.of(lambdas).array()
    dl = np.abs(rg.evaluate(v.lower, lams) - rg.evaluate(u.lower, lams))
    du = np.abs(rg.evaluate(v.upper, lams) - rg.evaluate(u.upper, lams))
    return bool(np.max(np.maximum(dl, du)) < eps)


def _check_args(seq: Sequence[FuzzyNumber], tol: float, tail: int) -> list[int]:
    if len(seq) == 0:
        raise EmptySequence("sequence is empty")
    if not tol > 0:
        raise InvalidEpsilon(f"tol must be positive, got {tol!r}")
    if not 1 <= tail <= len(seq):
        raise LevelFuzzyError(f"tail {tail} must be between 1 and the sequence length {len(seq)}")
    return list(range(len(seq) - tail, len(seq)))


def hausdorff_profile(v: FuzzyNumber, u: FuzzyNumber, lams: np.ndarray) -> np.ndarray:
    """``d_H([v]^lam, [u]^lam)`` for every entry of ``lams``."""
    dl = np.abs(rg.evaluate(v.lower, lams) - rg.evaluate(u.lower, lams))
    du = np.abs(rg.evaluate(v.upper, lams) - rg.evaluate(u.upper, lams))
    return np.maximum(dl, du)


def level_converges(
    seq: Sequence[FuzzyNumber],
    u: FuzzyNumber,
    grid: LambdaSet | None = None,
    tol: float = DEFAULT_TOL,
    tail: int = DEFAULT_TAIL,
) -> ConvergenceReport:
    """Per-lambda convergence of the level sets of ``seq`` to those of ``u``."""
    idx = _check_args(seq, tol, tail)
    if grid is None:
        grid = LambdaSet.default(u, *seq)
    lams = grid.array()
    table = np.array([hausdorff_profile(seq[k], u, lams) for k in idx])  # (tail, n_lambda)
    per_lam = table.max(axis=0)
    witness = None
    bad = np.nonzero(per_lam >= tol)[0]
    if len(bad):
        j = int(bad[0])
        row = int(np.nonzero(table[:, j] >= tol)[0][0])
        witness = (float(lams[j]), idx[row], float(table[row, j]))
    return ConvergenceReport(
        converges=witness is None,
        residuals=[float(x) for x in table.max(axis=1)],
        tail_indices=idx,
        tol=tol,
        per_lambda_residuals={float(a): float(b) for a, b in zip(lams, per_lam)},
        witness=witness,
    )


def dinf_converges(
    seq: Sequence[FuzzyNumber],
    u: FuzzyNumber,
    tol: float = DEFAULT_TOL,
    tail: int = DEFAULT_TAIL,
) -> ConvergenceReport:
    """Convergence of ``seq`` to ``u`` in the supremum metric."""
    idx = _check_args(seq, tol, tail)
    residuals = []
    witness = None
    for k in idx:
        lo = rg.sup_distance_detail(seq[k].lower, u.lower)
        hi = rg.sup_distance_detail(seq[k].upper, u.upper)
        best = lo if lo.value >= hi.value else hi
        residuals.append(best.value)
        if witness is None and best.value >= tol:
            witness = (best.lam, k, best.value)
    return ConvergenceReport(converges=witness is None, residuals=residuals, tail_indices=idx, tol=tol, witness=witness)


def compare_convergence(
    seq: Sequence[FuzzyNumber],
    u: FuzzyNumber,
    grid: LambdaSet | None = None,
    tol: float = DEFAULT_TOL,
    tail: int = DEFAULT_TAIL,
) -> dict[str, ConvergenceReport]:
    return {
        "level": level_converges(seq, u, grid, tol, tail),
        "dinf": dinf_converges(seq, u, tol, tail),
    }

