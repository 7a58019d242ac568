"""Command-line front end.

Subcommands: ``generate`` a calibrated synthetic network, ``shuffle-nodes``
and ``rewire`` for the two null models, ``divide`` a network by a grid or
polygon partition, ``metrics`` for whole-network statistics, ``experiment``
for the full multi-network multi-scale run, and ``plot`` to re-render SVGs
from an existing output directory.

Exit codes: 0 success, 1 invalid input or arguments, 2 file I/O failure,
3 internal consistency violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .graph import (
    GraphValidationError,
    Rect,
    read_graph_csv,
    write_edges_csv,
    write_nodes_csv,
)
from .metrics import (
    ConsistencyError,
    PathConfig,
    compute_metrics,
    edge_distance_histogram,
)
from .nullmodels import NullModelConfig, random_edge, random_node
from .partition import (
    PartitionError,
    divide,
    load_polygon_partition,
    make_grid,
)
from .pipeline import ExperimentConfig, emit_plots, run_experiment
from .synthgen import SynthConfig, generate, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def _add_common(p, seed=True, out=True):
    if seed:
        p.add_argument("--seed", type=int, default=0, help="master seed")
    if out:
        p.add_argument("--out", default="out", help="output directory")


def _add_graph_inputs(p):
    p.add_argument("--nodes", required=True, help="node CSV (id,x,y,...)")
    p.add_argument("--edges", required=True, help="edge CSV (u,v,kind)")
    p.add_argument(
        "--area",
        required=True,
        help="study area as xmin,ymin,xmax,ymax",
    )


def _parse_area(text: str) -> Rect:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError("area must be xmin,ymin,xmax,ymax")
    return Rect(*(float(v) for v in parts))


def _load_graph(args):
    return read_graph_csv(args.nodes, args.edges, _parse_area(args.area))


def _write_graph(g, out_dir, stem):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_nodes_csv(g, out / f"{stem}_nodes.csv")
    write_edges_csv(g, out / f"{stem}_edges.csv")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="contactscale",
        description="Multi-scale analysis of spatially embedded contact networks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a calibrated synthetic network")
    _add_common(p)
    p.add_argument("--config", help="generator config JSON")
    p.add_argument("--n", type=int, help="override individual count")
    p.add_argument(
        "--skip-validation",
        action="store_true",
        help="skip the calibration gate report",
    )

    p = sub.add_parser("shuffle-nodes", help="location-shuffling null model")
    _add_graph_inputs(p)
    _add_common(p)

    p = sub.add_parser("rewire", help="distance-bin-preserving rewiring null model")
    _add_graph_inputs(p)
    _add_common(p)
    p.add_argument("--bin-width", type=float, default=50.0)
    p.add_argument("--swap-budget", type=int, default=None)
    p.add_argument("--max-attempts", type=int, default=None)

    p = sub.add_parser("divide", help="divide a network by a partition")
    _add_graph_inputs(p)
    _add_common(p, seed=False)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--cell-size", type=float, help="square grid cell size")
    grp.add_argument("--polygons", help="polygon partition GeoJSON")

    p = sub.add_parser("metrics", help="whole-network structure metrics")
    _add_graph_inputs(p)
    _add_common(p, seed=False, out=False)
    p.add_argument("--hist-bin-width", type=float, default=50.0)
    p.add_argument("--no-paths", action="store_true")

    p = sub.add_parser("experiment", help="full multi-network multi-scale run")
    p.add_argument("--config", help="experiment config JSON")
    _add_common(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--replicates", type=int, default=None)

    p = sub.add_parser("plot", help="re-render SVGs from experiment CSVs")
    _add_common(p, seed=False)
    return ap


def _cmd_generate(args) -> int:
    if args.config:
        cfg = SynthConfig.from_json(Path(args.config).read_text())
    else:
        cfg = SynthConfig()
    if args.n is not None:
        cfg = SynthConfig.scaled(args.n, seed=cfg.seed)
    g = generate(cfg, args.seed)
    out = _write_graph(g, args.out, "network")
    if not args.skip_validation:
        report = validate(g)
        print(report)
        (out / "calibration.txt").write_text(str(report) + "\n")
        if not report.passed:
            print("calibration gates failed", file=sys.stderr)
            return EXIT_INTERNAL
    print(f"wrote {g.n} nodes / {g.m} edges to {out}")
    return EXIT_OK


def _cmd_shuffle_nodes(args) -> int:
    g = _load_graph(args)
    h = random_node(g, args.seed)
    _write_graph(h, args.out, "shuffled")
    print(f"wrote shuffled network ({h.n} nodes) to {args.out}")
    return EXIT_OK


def _cmd_rewire(args) -> int:
    g = _load_graph(args)
    cfg = NullModelConfig(
        bin_width=args.bin_width,
        swap_budget=args.swap_budget,
        max_attempts=args.max_attempts,
    )
    h, stats = random_edge(g, cfg, args.seed)
    _write_graph(h, args.out, "rewired")
    print(
        f"accepted {stats.accepted} swaps in {stats.attempts} attempts "
        f"(tail acceptance {stats.tail_acceptance:.4f})"
    )
    if stats.warning:
        print(f"warning: {stats.warning}", file=sys.stderr)
    return EXIT_OK


def _cmd_divide(args) -> int:
    g = _load_graph(args)
    if args.cell_size is not None:
        p = make_grid(g.study_area, args.cell_size)
    else:
        p = load_polygon_partition(args.polygons, g.study_area)
    result = divide(g, p)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for unit in result.units:
        write_nodes_csv(unit.graph, out / f"unit_{unit.cell_id}_nodes.csv")
        write_edges_csv(unit.graph, out / f"unit_{unit.cell_id}_edges.csv")
    if result.retained_count + result.lost_count != g.m:
        print("edge conservation violated", file=sys.stderr)
        return EXIT_INTERNAL
    print(
        f"{len(result.units)} unit networks, {result.retained_count} edges "
        f"retained, {result.lost_count} lost"
    )
    return EXIT_OK


def _cmd_metrics(args) -> int:
    g = _load_graph(args)
    rec = compute_metrics(g, PathConfig(), with_paths=not args.no_paths)
    hist = edge_distance_histogram(g, args.hist_bin_width)
    payload = {
        "n": rec.n,
        "e": rec.e,
        "s_rel": rec.s_rel,
        "s_other": rec.s_other,
        "cc": rec.cc,
        "l_rel": rec.l_rel,
        "mean_edge_distance": float(g.edge_lengths().mean()) if g.m else None,
        "zero_distance_fraction": hist.zero_count / hist.total if hist.total else None,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_json(Path(args.config).read_text())
    else:
        cfg = ExperimentConfig(synth=SynthConfig())
    overrides = {
        "master_seed": args.seed,
        "workers": args.workers,
        "out_dir": args.out,
    }
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    cfg = ExperimentConfig(
        **{**{f: getattr(cfg, f) for f in cfg.__dataclass_fields__}, **overrides}
    )
    out = run_experiment(cfg)
    print(f"experiment outputs in {out}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    out = Path(args.out)
    if not any(out.glob("curves_*.csv")):
        print(f"no curves_*.csv found in {out}", file=sys.stderr)
        return EXIT_IO
    written = emit_plots(out)
    print(f"wrote {len(written)} plots to {out / 'plots'}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "shuffle-nodes": _cmd_shuffle_nodes,
    "rewire": _cmd_rewire,
    "divide": _cmd_divide,
    "metrics": _cmd_metrics,
    "experiment": _cmd_experiment,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad args; remap
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return _COMMANDS[args.command](args)
    except (GraphValidationError, PartitionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConsistencyError as exc:
        print(f"internal consistency violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
