"""JSON documents for every object kind, with kind detection."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import bivariate as bv
from . import fuzzy, fuzzymap
from . import regulated as rg
from .errors import LevelFuzzyError

__all__ = ["SchemaError", "detect_kind", "parse", "load", "dumps", "to_document"]


class SchemaError(LevelFuzzyError):
    """Input is not a document of any known kind."""


def detect_kind(obj: Any) -> str:
    if isinstance(obj, list):
        return "sequence"
    if not isinstance(obj, dict):
        raise SchemaError(f"expected a JSON object or array, got {type(obj).__name__}")
    if "sequence" in obj:
        return "sequence"
    if "values" in obj and "domain" in obj:
        return "fuzzy_map"
    if "first" in obj and "second" in obj:
        return "product"
    if "columns" in obj and "domain" in obj:
        return "bivariate"
    if "lower" in obj and "upper" in obj:
        return "fuzzy_number"
    if "knots" in obj:
        return "plj"
    raise SchemaError(f"unrecognised document with keys {sorted(obj)}")


def parse(obj: Any, expect: str | None = None) -> Any:
    """Build the object a JSON document describes.

    Validation failures propagate as :class:`~levelfuzzy.errors.ValidationError`;
    documents of the wrong shape raise :class:`SchemaError`.
    """
    kind = detect_kind(obj)
    if expect is not None and kind != expect:
        raise SchemaError(f"expected a {expect} document, got {kind}")
    try:
        if kind == "plj":
            return rg.from_json(obj)
        if kind == "fuzzy_number":
            return fuzzy.from_json(obj)
        if kind == "fuzzy_map":
            return fuzzymap.from_json(obj)
        if kind == "bivariate":
            return bv.from_json(obj)
        if kind == "product":
            return bv.ProductElement(bv.from_json(obj["first"]), bv.from_json(obj["second"]))
        items = obj["sequence"] if isinstance(obj, dict) else obj
        return [fuzzy.from_json(x) for x in items]
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed {kind} document: {exc!r}") from exc


def load(path: str | Path, expect: str | None = None) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return parse(obj, expect)


def to_document(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return {"sequence": [to_document(v) for v in x]}
    return x.to_json()


def dumps(obj: Any, compact: bool = False) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
