"""Command-line surface.

Subcommands: ``layer`` runs one method on one graph and emits JSON (plus an
optional SVG), ``bench`` sweeps methods/weights over a corpus into CSV, and
``export-ip`` writes the integer-program LP file for a graph.  Exit codes:
0 success, 2 timeout with a usable incumbent, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from time import perf_counter

from .corpus import GeneratorConfig, ParseError, generate, read_graph
from .cycle_removal import eaga_layering
from .exact import build_model, export_lp, solve_exact
from .graph import Graph
from .heuristic import solve_glp_heuristic
from .layering import (GlpSolution, GlpWeights, canonicalize, is_feasible,
                       metrics, objective)
from .svg import render_svg

JSON_SCHEMA = "layerforge/1"
CSV_SCHEMA = "layerforge-bench/1"
CSV_HEADER = ["graph_id", "method", "w_len", "w_rev", "reversed_count",
              "dummy_count", "edge_length_sum", "layer_count",
              "max_layer_width", "est_area", "est_aspect_ratio",
              "wall_time_ms", "status"]

METHODS = ("eaga", "glph", "glph*", "glpx")


class CliError(Exception):
    pass


def _parse_wrev(text: str | None) -> int | None:
    if text is None or text.lower() in ("inf", "infinity"):
        return None
    try:
        value = int(text)
    except ValueError as exc:
        raise CliError(f"--wrev must be an integer or 'inf', got {text!r}") from exc
    if value < 1:
        raise CliError("--wrev must be >= 1")
    return value


def _load_graph(path: str, fmt: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    if fmt == "auto":
        fmt = "dot" if path.endswith((".dot", ".gv")) else "edgelist"
    try:
        g, _report = read_graph(text, fmt)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from exc
    return g


def _weights(args: argparse.Namespace, method: str) -> GlpWeights:
    w_rev = _parse_wrev(args.wrev)
    if args.wrev is None:  # flag not given at all
        if method == "glpx":
            raise CliError("--wrev is required for method glpx")
        w_rev = 5
    return GlpWeights(w_len=args.wlen, w_rev=w_rev,
                      max_layers=getattr(args, "max_layers", None))


def _run_method(g: Graph, method: str, w: GlpWeights, seed: int,
                timeout: float | None,
                skip_improvement: bool = False) -> tuple[GlpSolution, str, float]:
    """Run one layering method; returns (solution, status, wall ms) where
    the wall time covers the layering phases only."""
    start = perf_counter()
    if method == "eaga":
        layers = eaga_layering(g, seed)
        ms = (perf_counter() - start) * 1e3
        return objective(g, canonicalize(layers), w), "heuristic", ms
    if method in ("glph", "glph*"):
        skip = skip_improvement or method == "glph*"
        sol = solve_glp_heuristic(g, seed=seed, skip_improvement=skip, weights=w)
        return sol, "heuristic", (perf_counter() - start) * 1e3
    if method == "glpx":
        result = solve_exact(g, w, budget=timeout)
        return result.solution, result.status, (perf_counter() - start) * 1e3
    raise CliError(f"unknown method {method!r}")


def _solution_json(g: Graph, sol: GlpSolution, status: str) -> dict:
    rep = metrics(g, sol.layering)
    return {
        "schema": JSON_SCHEMA,
        "layers": {g.labels[v]: sol.layering[v] for v in sorted(sol.layering)},
        "reversed": [[g.labels[u], g.labels[v]]
                     for u, v in sorted(sol.reversed_edges)],
        "metrics": {
            "reversed_count": rep.reversed_count,
            "edge_length_sum": rep.edge_length_sum,
            "dummy_count": rep.dummy_count,
            "layer_count": rep.layer_count,
            "max_layer_width": rep.max_layer_width,
            "est_area": rep.est_area,
            "est_aspect_ratio": float(rep.est_aspect_ratio) if rep.layer_count else 0.0,
            "est_area_per_node": rep.est_area / g.n if g.n else 0.0,
        },
        "objective": sol.objective,
        "status": status,
    }


def cmd_layer(args: argparse.Namespace) -> int:
    g = _load_graph(args.input, args.format)
    w = _weights(args, args.method)
    sol, status, _ms = _run_method(g, args.method, w, args.seed, args.timeout,
                                   args.skip_improvement)
    if not is_feasible(g, sol.layering):
        raise CliError("internal error: produced layering is infeasible")
    doc = json.dumps(_solution_json(g, sol, status), indent=2) + "\n"
    if args.json:
        Path(args.json).write_text(doc)
    else:
        sys.stdout.write(doc)
    if args.svg:
        Path(args.svg).write_text(render_svg(g, sol.layering))
    return 2 if status == "timeout" else 0


def _bench_task(payload: tuple) -> list[list]:
    graph_id, g, methods, weight_list, seed, timeout = payload
    rows = []
    for method in methods:
        for w_len, w_rev in weight_list:
            w = GlpWeights(w_len=w_len, w_rev=w_rev)
            sol, status, ms = _run_method(g, method, w, seed, timeout)
            rep = metrics(g, sol.layering)
            rows.append([graph_id, method, w_len,
                         "inf" if w_rev is None else w_rev,
                         rep.reversed_count, rep.dummy_count,
                         rep.edge_length_sum, rep.layer_count,
                         rep.max_layer_width, rep.est_area,
                         f"{float(rep.est_aspect_ratio):.6f}" if rep.layer_count else "0",
                         f"{ms:.3f}", status])
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise CliError(f"unknown method {m!r} (choose from {', '.join(METHODS)})")

    if args.corpus:
        root = Path(args.corpus)
        if not root.is_dir():
            raise CliError(f"{args.corpus} is not a directory")
        files = sorted(p for p in root.iterdir()
                       if p.suffix in (".dot", ".gv", ".edges", ".edgelist", ".txt"))
        graphs = [(p.name, _load_graph(str(p), "auto")) for p in files]
    elif args.generate:
        cfg = GeneratorConfig(count=args.generate, seed=args.seed)
        graphs = [(f"gen-{args.seed}-{i:04d}", g)
                  for i, g in enumerate(generate(cfg)) if g.n > 0]
    else:
        raise CliError("provide --corpus DIR or --generate N")
    if not graphs:
        raise CliError("empty corpus")

    if args.sweep:
        key, _, values = args.sweep.partition("=")
        if key.strip() != "wrev" or not values:
            raise CliError("--sweep expects wrev=V1,V2,...")
        weight_list = [(args.wlen, _parse_wrev(v.strip())) for v in values.split(",")]
    else:
        w_rev = _parse_wrev(args.wrev) if args.wrev is not None else 5
        if args.wrev is None and "glpx" in methods:
            raise CliError("glpx needs --wrev or --sweep")
        weight_list = [(args.wlen, w_rev)]

    tasks = [(gid, g, methods, weight_list, args.seed, args.timeout_per_graph)
             for gid, g in graphs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_task, tasks))
    else:
        results = [_bench_task(t) for t in tasks]

    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows = [row for chunk in results for row in chunk]
    for row in rows:
        writer.writerow(row)
    # aggregate block: means per (method, weights) over non-timeout rows
    for method in methods:
        for w_len, w_rev in weight_list:
            wr = "inf" if w_rev is None else w_rev
            group = [r for r in rows
                     if r[1] == method and r[2] == w_len and r[3] == wr
                     and r[12] != "timeout"]
            if not group:
                continue
            k = len(group)
            means = [sum(float(r[c]) for r in group) / k for c in range(4, 12)]
            writer.writerow([f"mean[{k}]", method, w_len, wr,
                             *(f"{v:.4f}" for v in means), "aggregate"])
    text = buf.getvalue()
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export_ip(args: argparse.Namespace) -> int:
    g = _load_graph(args.input, args.format)
    w_rev = _parse_wrev(args.wrev)
    w = GlpWeights(w_len=args.wlen, w_rev=w_rev, max_layers=args.max_layers)
    if w.w_rev is None:
        w = GlpWeights(w_len=w.w_len, w_rev=w.rev_surrogate(g),
                       max_layers=w.max_layers)
    text = export_lp(build_model(g, w))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerforge",
        description="Layer assignment for directed graphs with the reversed "
                    "edge set chosen jointly with the layers.")
    sub = parser.add_subparsers(dest="command", required=True)

    layer = sub.add_parser("layer", help="layer one graph, emit JSON")
    layer.add_argument("--input", required=True)
    layer.add_argument("--format", choices=["dot", "edgelist", "auto"], default="auto")
    layer.add_argument("--method", choices=["eaga", "glph", "glpx"], required=True)
    layer.add_argument("--wlen", type=int, default=1)
    layer.add_argument("--wrev", default=None, help="integer or 'inf'")
    layer.add_argument("--max-layers", type=int, default=None, dest="max_layers")
    layer.add_argument("--seed", type=int, default=0)
    layer.add_argument("--skip-improvement", action="store_true")
    layer.add_argument("--timeout", type=float, default=None,
                       help="budget in seconds for the exact solver")
    layer.add_argument("--json", default=None, help="output path (default stdout)")
    layer.add_argument("--svg", default=None, help="also write a debug SVG")
    layer.set_defaults(func=cmd_layer)

    bench = sub.add_parser("bench", help="run methods over a corpus, emit CSV")
    bench.add_argument("--corpus", default=None, help="directory of graph files")
    bench.add_argument("--generate", type=int, default=None,
                       help="generate N random graphs instead")
    bench.add_argument("--methods", default="eaga,glph")
    bench.add_argument("--sweep", default=None, help="wrev=10,20,30,40,50")
    bench.add_argument("--wlen", type=int, default=1)
    bench.add_argument("--wrev", default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--timeout-per-graph", type=float, default=120.0,
                       dest="timeout_per_graph")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--csv", default=None, help="output path (default stdout)")
    bench.set_defaults(func=cmd_bench)

    export = sub.add_parser("export-ip", help="write the LP-format model")
    export.add_argument("--input", required=True)
    export.add_argument("--format", choices=["dot", "edgelist", "auto"], default="auto")
    export.add_argument("--wlen", type=int, default=1)
    export.add_argument("--wrev", required=True, help="integer or 'inf'")
    export.add_argument("--max-layers", type=int, default=None, dest="max_layers")
    export.add_argument("--out", default=None, help="output path (default stdout)")
    export.set_defaults(func=cmd_export_ip)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"layerforge: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
