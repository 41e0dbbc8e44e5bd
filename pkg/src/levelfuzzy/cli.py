"""Command-line front end.

Exit codes: 0 when the input is valid or the check passes, 1 when a
witness is found or the verdict is not a pass, 2 for malformed input.
The default tolerance can be set with the ``LEVELFUZZY_TOL`` environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import bivariate as bv
from . import fixtures, fuzzy, fuzzymap, topology
from . import io as lio
from . import regulated as rg
from .domain import resolve_key
from .errors import LevelFuzzyError, ValidationError
from .fuzzymap import FuzzyMap

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2
TOL_ENV = "LEVELFUZZY_TOL"


class UsageError(LevelFuzzyError):
    pass


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return topology.DEFAULT_TOL
    try:
        return _positive(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{TOL_ENV}: {exc}") from None


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not x > 0 or not np.isfinite(x):
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text!r}")
    return x


def _grid_size(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 2:
        raise argparse.ArgumentTypeError("grid size must be at least 2")
    return n


def _emit(doc: Any, out: str | None) -> None:
    text = lio.dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _lambda_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    obj = json.loads(Path(args.path).read_text())
    kind = lio.detect_kind(obj)
    try:
        lio.parse(obj)
    except ValidationError as exc:
        _emit({"kind": kind, "valid": False, "violations": [v.to_json() for v in exc.violations]}, args.out)
        return EXIT_FAIL
    except lio.SchemaError:
        raise
    except LevelFuzzyError as exc:
        _emit({"kind": kind, "valid": False, "violations": [{"code": type(exc).__name__, "message": str(exc)}]}, args.out)
        return EXIT_FAIL
    _emit({"kind": kind, "valid": True, "violations": []}, args.out)
    return EXIT_OK


def dist_document(u: fuzzy.FuzzyNumber, v: fuzzy.FuzzyNumber, grid: int) -> dict[str, Any]:
    lams = np.unique(np.concatenate([_lambda_grid(grid), fuzzy.knot_lambdas(u, v)]))
    curve = topology.hausdorff_profile(u, v, lams)
    return {
        "d_infinity": fuzzy.d_infinity(u, v),
        "sup_hausdorff": fuzzy.sup_hausdorff(u, v),
        "hausdorff_curve": [[float(a), float(b)] for a, b in zip(lams, curve)],
    }


def cmd_dist(args) -> int:
    u = lio.load(args.u, "fuzzy_number")
    v = lio.load(args.v, "fuzzy_number")
    _emit(dist_document(u, v, args.grid), args.out)
    return EXIT_OK


def cmd_converge(args) -> int:
    seq = lio.load(args.sequence, "sequence")
    target = lio.load(args.target, "fuzzy_number")
    tol = args.tol if args.tol is not None else _default_tol()
    grid = topology.LambdaSet.default(target, *seq, size=args.grid)
    reports = topology.compare_convergence(seq, target, grid, tol=tol, tail=min(args.tail, len(seq)))
    _emit({k: r.to_json() for k, r in reports.items()}, args.out)
    return EXIT_OK if all(r.converges for r in reports.values()) else EXIT_FAIL


def _parse_point(f: FuzzyMap, text: str):
    try:
        return resolve_key(f.domain, text)
    except KeyError:
        pass
    try:
        return resolve_key(f.domain, repr(float(text)))
    except (KeyError, ValueError):
        raise UsageError(f"t0 {text!r} is not a point of the map's domain") from None


def cmd_classify(args) -> int:
    f = lio.load(args.map, "fuzzy_map")
    t0 = _parse_point(f, args.t0)
    tol = args.tol if args.tol is not None else _default_tol()
    report = fuzzymap.classify_continuity(f, t0, args.mode, tol=tol, resolution=args.resolution, tail=args.tail, grid_size=args.grid)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_embed(args) -> int:
    f = lio.load(args.map, "fuzzy_map")
    doc: dict[str, Any] = {"embedding": fuzzymap.embed(f).to_json()}
    if args.against:
        g = lio.load(args.against, "fuzzy_map")
        doc["metric_D"] = fuzzymap.metric_D(f, g)
        doc["product_distance"] = bv.product_distance(fuzzymap.embed(f), fuzzymap.embed(g))
        doc["isometry_residual"] = fuzzymap.isometry_residual(f, g)
    _emit(doc, args.out)
    return EXIT_OK


def _sampled_columns(F: bv.AnalyticFunction) -> bv.ColumnFunction:
    cols = {}
    for t in F.domain.points:
        lams = bv._sample_lambdas(F, t)
        vals = F.eval_grid(lams, [t])[:, 0]
        cols[t] = rg.raw(list(zip(lams.tolist(), vals.tolist())))
    return bv.ColumnFunction(F.domain, cols)


def corpus_documents(name: str, params: dict[str, Any]) -> dict[str, Any]:
    """File name -> JSON document for a fixture."""
    obj = fixtures.build(name, params)
    if isinstance(obj, FuzzyMap):
        docs = {f"{name}.json": obj.to_json()}
        if name == "example_level_not_dinf":
            seq, target = fixtures.level_not_dinf_sequence()
            docs[f"{name}.sequence.json"] = lio.to_document(seq)
            docs[f"{name}.target.json"] = target.to_json()
        return docs
    if isinstance(obj, tuple):
        return {f"{name}.{i}.json": F.to_json() for i, F in enumerate(obj)}
    if isinstance(obj, bv.AnalyticFunction):
        return {f"{name}.json": _sampled_columns(obj).to_json()}
    return {f"{name}.json": obj.to_json()}


def _params(items: Sequence[str]) -> dict[str, Any]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not key=value")
        out[key] = value
    return out


def cmd_corpus(args) -> int:
    if args.name == "list":
        _emit({"fixtures": sorted(fixtures.FIXTURES)}, args.out)
        return EXIT_OK
    try:
        docs = corpus_documents(args.name, _params(args.param))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    outdir = Path(args.dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for fname, doc in docs.items():
        (outdir / fname).write_text(lio.dumps(doc, compact=True))
    _emit({"written": sorted(str(outdir / f) for f in docs)}, args.out)
    return EXIT_OK


def export_text(obj: Any, fmt: str, grid: int | None) -> str:
    if fmt == "json":
        return lio.dumps(lio.to_document(obj), compact=True)
    lams = None if grid is None else _lambda_grid(grid)
    if isinstance(obj, fuzzy.FuzzyNumber):
        return fuzzy.level_curves_csv(obj, lams)
    if isinstance(obj, FuzzyMap):
        return fuzzymap.to_csv(obj, lams)
    if isinstance(obj, bv.ColumnFunction):
        return bv.to_csv(obj)
    raise UsageError(f"no CSV form for {type(obj).__name__}")


def cmd_export(args) -> int:
    obj = lio.load(args.path)
    text = export_text(obj, args.format, args.grid)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="levelfuzzy", description="Fuzzy numbers through level-set endpoint functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol: bool = False):
        sp.add_argument("--out", help="write the result here instead of stdout")
        if tol:
            sp.add_argument("--tol", type=_positive, default=None, help=f"tolerance (default: ${TOL_ENV} or {topology.DEFAULT_TOL})")

    sp = sub.add_parser("validate", help="validate any JSON document")
    sp.add_argument("path")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("dist", help="supremum distance and Hausdorff curve of two fuzzy numbers")
    sp.add_argument("u")
    sp.add_argument("v")
    sp.add_argument("--grid", type=_grid_size, default=101)
    common(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("converge", help="level and supremum convergence of a sequence")
    sp.add_argument("sequence")
    sp.add_argument("target")
    sp.add_argument("--tail", type=int, default=topology.DEFAULT_TAIL)
    sp.add_argument("--grid", type=_grid_size, default=101)
    common(sp, tol=True)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("classify", help="continuity of a fuzzy map at a point")
    sp.add_argument("map")
    sp.add_argument("--t0", required=True)
    sp.add_argument("--mode", choices=("level", "dinf"), default="level")
    sp.add_argument("--resolution", type=int, default=fuzzymap.DEFAULT_RESOLUTION)
    sp.add_argument("--tail", type=int, default=5)
    sp.add_argument("--grid", type=_grid_size, default=101)
    common(sp, tol=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("embed", help="representation pair of a fuzzy map")
    sp.add_argument("map")
    sp.add_argument("--against", help="second map for the isometry self-check")
    common(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("corpus", help="write a fixture to JSON files ('list' to enumerate)")
    sp.add_argument("name")
    sp.add_argument("--param", action="append", default=[], help="key=value, e.g. n=50, grid=21, N=5")
    sp.add_argument("--dir", default=".")
    common(sp)
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("export", help="CSV level curves (or canonical JSON)")
    sp.add_argument("path")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--grid", type=_grid_size, default=None, help="uniform lambda grid instead of knots")
    common(sp)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_MALFORMED
    try:
        return args.func(args)
    except (LevelFuzzyError, json.JSONDecodeError, OSError) as exc:
        diag: dict[str, Any] = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ValidationError):
            diag["violations"] = [v.to_json() for v in exc.violations]
        sys.stderr.write(json.dumps(diag, sort_keys=True) + "\n")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
