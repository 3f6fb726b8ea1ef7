"""Command line driver: project datasets, build trees, score them, sweep, serve.

Every command that writes files also writes a manifest carrying the resolved
parameters, the input checksum, and wall-clock timings, enough to replay the
run. Failures print one machine-readable JSON object to stderr and exit
nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .data import PointSet, load_csv, load_fvecs
from .filtration import (build_merge_tree, components_point_map, hierarchy_json,
                         persistence_diagram, resolve_eta, simplify)
from .layout import ScalingParams, topomap_project
from .metrics import (bottleneck_distance, normalize_diagram, normalized_wasserstein,
                      rwe, wasserstein_distance)
from .mst import SpanningTree, exact_emst
from .treemap import treemap_json, treemap_layout
from .vamana import VamanaParams, amst

# documented sweep ranges; values outside warn but run
_SWEEP_RANGES = {"alpha": (1.0, 1.5), "L": (75, 200), "R": (60, 150)}


class CliError(Exception):
    def __init__(self, code: str, message: str, **extra):
        super().__init__(message)
        self.payload = {"error": code, "message": message, **extra}


def _emit_error(payload: dict) -> None:
    json.dump(payload, sys.stderr, separators=(",", ":"))
    sys.stderr.write("\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error({"error": "usage", "message": message})
        raise SystemExit(2)


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n"


def _load_points(path: str, fmt) -> PointSet:
    p = Path(path)
    if not p.exists():
        raise CliError("input", f"input file not found: {path}")
    if fmt is None:
        fmt = "fvecs" if p.suffix == ".fvecs" else "csv"
    try:
        return load_fvecs(p) if fmt == "fvecs" else load_csv(p)
    except ValueError as e:
        raise CliError("parse", str(e)) from e


def _load_tree(path: str) -> SpanningTree:
    p = Path(path)
    if not p.exists():
        raise CliError("input", f"tree file not found: {path}")
    try:
        if p.suffix == ".txt":
            return SpanningTree.from_text(p.read_text(encoding="utf-8"))
        return SpanningTree.load(p)
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise CliError("parse", f"{path}: {e}") from e


def _vamana_params(args) -> VamanaParams:
    try:
        return VamanaParams(alpha=args.alpha, L=args.L, R=args.R, passes=args.passes)
    except ValueError as e:
        raise CliError("params", str(e)) from e


def _build_tree(ps: PointSet, method: str, args) -> SpanningTree:
    if method == "exact":
        return exact_emst(ps)
    return amst(ps, _vamana_params(args), seed=args.seed)


def _manifest(args, command: str, ps: PointSet, timings: dict, outputs: list) -> dict:
    params = {}
    for key in ("eta", "c", "alpha_max", "mst", "alpha", "R", "L", "passes",
                "seed", "order", "normalized", "param", "values", "seeds"):
        if hasattr(args, key):
            v = getattr(args, key)
            if isinstance(v, float) and math.isinf(v):
                v = None
            params[key] = v
    return {
        "command": command,
        "version": __version__,
        "input": getattr(args, "input", None),
        "input_checksum": ps.meta.checksum if ps is not None else None,
        "parameters": params,
        "timings": timings,
        "outputs": outputs,
    }


def cmd_project(args) -> int:
    ps = _load_points(args.input, args.format)
    try:
        eta = resolve_eta(args.eta, ps.n)
    except ValueError as e:
        raise CliError("eta", str(e)) from e
    t0 = time.perf_counter()
    tree = _build_tree(ps, args.mst, args)
    t_mst = time.perf_counter() - t0
    t0 = time.perf_counter()
    merge = build_merge_tree(tree)
    simplified = simplify(merge, eta)
    comp_map = components_point_map(simplified, merge)
    layout = topomap_project(ps, tree, components=comp_map,
                             params=ScalingParams(c=args.c, alpha_max=args.alpha_max))
    t_layout = time.perf_counter() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "layout.json").write_text(_dumps(layout.to_json()), encoding="utf-8")
    hier = {"eta": eta, "hierarchy": hierarchy_json(merge, simplified),
            "treemap": treemap_json(treemap_layout(simplified, merge))}
    (out / "hierarchy.json").write_text(_dumps(hier), encoding="utf-8")
    manifest = _manifest(args, "project", ps,
                         {"mst_seconds": t_mst, "layout_seconds": t_layout},
                         ["layout.json", "hierarchy.json"])
    manifest["resolved_eta"] = eta
    (out / "manifest.json").write_text(_dumps(manifest), encoding="utf-8")
    print(str(out))
    return 0


def cmd_mst(args) -> int:
    ps = _load_points(args.input, args.format)
    t0 = time.perf_counter()
    tree = _build_tree(ps, args.method, args)
    seconds = time.perf_counter() - t0
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix == ".txt":
        out.write_text(tree.to_text(), encoding="utf-8")
    else:
        tree.save(out)
    manifest = _manifest(args, "mst", ps, {"mst_seconds": seconds}, [out.name])
    manifest["parameters"]["method"] = args.method
    manifest["total_weight"] = tree.total_weight
    Path(str(out) + ".manifest.json").write_text(_dumps(manifest), encoding="utf-8")
    print(_dumps({"total_weight": tree.total_weight, "l_max": tree.l_max,
                  "seconds": seconds}), end="")
    return 0


def metrics_report(reference: SpanningTree, candidate: SpanningTree,
                   order: float = 1.0, normalized: bool = False) -> dict:
    """Score a candidate tree against a reference over the same points."""
    try:
        excess = rwe(candidate, reference)
        d_ref = persistence_diagram(reference)
        d_cand = persistence_diagram(candidate)
        if normalized:
            d_ref = normalize_diagram(d_ref)
            d_cand = normalize_diagram(d_cand)
        return {
            "rwe": excess,
            "bottleneck": bottleneck_distance(d_cand, d_ref),
            "wasserstein": wasserstein_distance(d_cand, d_ref, order=order),
            "normalized_wasserstein": normalized_wasserstein(d_cand, d_ref, order=order),
            "order": order,
            "normalized": normalized,
        }
    except ValueError as e:
        raise CliError("metrics", str(e)) from e


def cmd_metrics(args) -> int:
    reference = _load_tree(args.tree_a)
    candidate = _load_tree(args.tree_b)
    report = metrics_report(reference, candidate, order=args.order,
                            normalized=args.normalized)
    text = _dumps(report)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        manifest = _manifest(args, "metrics", None, {}, [out.name])
        manifest["inputs"] = [args.tree_a, args.tree_b]
        Path(str(out) + ".manifest.json").write_text(_dumps(manifest), encoding="utf-8")
    print(text, end="")
    return 0


def _parse_values(param: str, text: str) -> list:
    tokens = [t for t in (s.strip() for s in text.split(",")) if t]
    if not tokens:
        raise CliError("sweep", "empty value grid")
    try:
        vals = [float(t) if param == "alpha" else int(t) for t in tokens]
    except ValueError as e:
        raise CliError("sweep", f"bad value in grid: {e}") from e
    lo, hi = _SWEEP_RANGES[param]
    for v in vals:
        if not lo <= v <= hi:
            warnings.warn(f"{param}={v} is outside the documented range [{lo}, {hi}]")
    return vals


def cmd_sweep(args) -> int:
    ps = _load_points(args.input, args.format)
    values = _parse_values(args.param, args.values)
    try:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    except ValueError as e:
        raise CliError("sweep", f"bad seed list: {e}") from e
    if not seeds:
        raise CliError("sweep", "empty seed list")

    exact = exact_emst(ps)
    d_exact = persistence_diagram(exact)
    rows = []
    t_total0 = time.perf_counter()
    for value in values:
        over = {args.param: value}
        try:
            params = VamanaParams(alpha=over.get("alpha", args.alpha),
                                  L=over.get("L", args.L),
                                  R=over.get("R", args.R), passes=args.passes)
        except ValueError as e:
            raise CliError("params", str(e)) from e
        for seed in seeds:
            t0 = time.perf_counter()
            tree = amst(ps, params, seed=seed)
            build_seconds = time.perf_counter() - t0
            d_tree = persistence_diagram(tree)
            rows.append([args.param, value, seed, build_seconds,
                         rwe(tree, exact),
                         bottleneck_distance(d_tree, d_exact),
                         wasserstein_distance(d_tree, d_exact, order=args.order)])
    total_seconds = time.perf_counter() - t_total0

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "value", "seed", "build_seconds",
                     "rwe", "bottleneck", "wasserstein"])
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    out.write_text(buf.getvalue(), encoding="utf-8")
    manifest = _manifest(args, "sweep", ps, {"total_seconds": total_seconds}, [out.name])
    Path(str(out) + ".manifest.json").write_text(_dumps(manifest), encoding="utf-8")
    print(str(out))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(max_upload_bytes=args.max_upload_bytes)
    uvicorn.run(app, host="127.0.0.1", port=args.serve_port)
    return 0


def _add_vamana_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=1.3)
    p.add_argument("--R", type=int, default=100)
    p.add_argument("--L", type=int, default=100)
    p.add_argument("--passes", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("csv", "fvecs"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topoproj")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project a dataset to 2D with hierarchy files")
    _add_input_flags(p)
    p.add_argument("--eta", default="1%")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--alpha-max", dest="alpha_max", type=float, default=math.inf)
    p.add_argument("--mst", choices=("exact", "approx"), default="exact")
    _add_vamana_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("mst", help="compute a spanning tree and write it to a file")
    _add_input_flags(p)
    p.add_argument("--mst", dest="method", choices=("exact", "approx"), default="exact")
    _add_vamana_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mst)

    p = sub.add_parser("metrics", help="score tree_b against reference tree_a")
    p.add_argument("tree_a")
    p.add_argument("tree_b")
    p.add_argument("--order", type=float, default=1.0)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("sweep", help="parameter sweep producing a CSV")
    _add_input_flags(p)
    p.add_argument("--param", choices=("alpha", "L", "R"), required=True)
    p.add_argument("--values", required=True, help="comma-separated grid")
    p.add_argument("--seeds", default="0,1,2", help="comma-separated seeds")
    p.add_argument("--order", type=float, default=1.0)
    _add_vamana_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--serve-port", dest="serve_port", type=int, default=8000)
    p.add_argument("--max-upload-bytes", dest="max_upload_bytes", type=int,
                   default=64 * 1024 * 1024)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as e:
        _emit_error(e.payload)
        return 2
    except SystemExit as e:
        return int(e.code or 0)
    except OSError as e:
        _emit_error({"error": "io", "message": str(e)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
