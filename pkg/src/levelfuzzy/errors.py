"""Exception types raised across the package."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class LevelFuzzyError(ValueError):
    """Base class for every error raised by this package."""


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    index: int | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.index is not None:
            out["index"] = self.index
        return out


class ValidationError(LevelFuzzyError):
    """Raw input failed validation; ``violations`` lists every problem found."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        text = "; ".join(f"{v.code}: {v.message}" for v in self.violations)
        super().__init__(text or "invalid input")

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


class OutOfDomain(LevelFuzzyError):
    pass


class NonFinite(LevelFuzzyError):
    pass


class MixedDirections(LevelFuzzyError):
    pass


class OrderViolation(LevelFuzzyError):
    pass


class InvalidEpsilon(LevelFuzzyError):
    pass


class EmptySequence(LevelFuzzyError):
    pass


class UnknownPoint(LevelFuzzyError, KeyError):
    pass


class DomainMismatch(LevelFuzzyError):
    pass


class NegativeCoefficient(LevelFuzzyError):
    pass


class NotUniformlyConvergent(LevelFuzzyError):
    pass


class DomainOutOfRange(LevelFuzzyError):
    pass
