"""Experiment orchestration: networks x partitions x scales.

``scale_stats`` is the per-(graph, partition) engine: it divides the graph,
computes the four structure metrics for every unit network (vectorized over
cells where possible), aggregates them coverage-weighted, and returns the
retained/lost distance histograms.  ``run_experiment`` drives the full
study over the observed network and the two null-model ensembles, writing
deterministic CSVs, SVG plots, and a manifest that suffices to re-run the
experiment byte-identically.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse import csgraph

from ._version import __version__ as _version
from .graph import Rect, SpatialGraph, read_graph_csv
from .metrics import (
    DistanceHistogram,
    MetricRecord,
    PathConfig,
    aggregate_scale,
    distances_to_histogram,
    loss_histogram,
    path_stats_for_components,
    METRIC_NAMES,
)
from .nullmodels import (
    RANDOM_EDGE,
    RANDOM_NODE,
    NullModelConfig,
    make_replicate,
)
from .partition import (
    Partition,
    UNASSIGNED,
    assign_nodes,
    grid_ladder,
    load_polygon_partition,
)
from .seeds import MIX_NAME, replicate_seed, splitmix64
from .synthgen import SynthConfig, generate
from .svgplot import histogram_panel, line_chart

OBSERVED = "observed"
NETWORK_KINDS = (OBSERVED, RANDOM_NODE, RANDOM_EDGE)
_KIND_SALT = {RANDOM_NODE: 0x6E6F6465, RANDOM_EDGE: 0x65646765}


@dataclass(frozen=True)
class ScaleStats:
    """Everything the curves need from one (graph, partition) pair."""

    scale_label: str
    scale_m: float
    cells: int
    aggregates: dict  # metric -> (mean, stdev, count)
    retained: int
    lost: int
    unassigned_nodes: int
    dist: DistanceHistogram
    loss: DistanceHistogram


def _per_cell_components(labels, sizes, cell_of_node):
    """(cell_ids, s_rel, s_other, n_nodes) arrays over non-empty cells."""
    assigned = cell_of_node != UNASSIGNED
    ncomp = sizes.shape[0]
    comp_cell = np.full(ncomp, UNASSIGNED, dtype=np.int64)
    comp_cell[labels[assigned]] = cell_of_node[assigned]
    keep = comp_cell != UNASSIGNED
    cells = comp_cell[keep]
    csizes = sizes[keep]
    order = np.argsort(cells, kind="stable")
    cells = cells[order]
    csizes = csizes[order]
    uniq, starts = np.unique(cells, return_index=True)
    ends = np.append(starts[1:], cells.shape[0])
    n_nodes = np.add.reduceat(csizes, starts)
    s_max = np.maximum.reduceat(csizes, starts)
    counts = ends - starts
    s_rel = s_max / n_nodes
    with np.errstate(invalid="ignore"):
        s_other = np.where(
            counts > 1, (n_nodes - s_max) / np.maximum(counts - 1, 1), 0.0
        )
    return uniq, s_rel, s_other, n_nodes


def _retained_clustering(n, eu, ev, cell_of_node, cell_ids, n_nodes):
    """Mean per-node clustering per cell over the retained graph."""
    if eu.shape[0]:
        data = np.ones(2 * eu.shape[0], dtype=np.int8)
        adj = csr_matrix(
            (data, (np.concatenate([eu, ev]), np.concatenate([ev, eu]))),
            shape=(n, n),
        )
        deg = np.diff(adj.indptr)
        tri = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel() / 2.0
        denom = deg * (deg - 1)
        cc = np.zeros(n)
        mask = denom > 0
        cc[mask] = 2.0 * tri[mask] / denom[mask]
    else:
        cc = np.zeros(n)
    assigned = cell_of_node != UNASSIGNED
    max_cell = int(cell_ids.max()) if cell_ids.size else 0
    sums = np.bincount(
        cell_of_node[assigned], weights=cc[assigned], minlength=max_cell + 1
    )
    return sums[cell_ids] / n_nodes


def _per_cell_paths(
    n, eu, ev, labels, cell_of_node, cell_ids, path_cfg
):
    """l/l_max -> l_rel per cell (NaN when no connected pair)."""
    out = np.full(cell_ids.shape[0], np.nan)
    assigned_order = np.argsort(cell_of_node, kind="stable")
    assigned_order = assigned_order[cell_of_node[assigned_order] != UNASSIGNED]
    cell_sorted = cell_of_node[assigned_order]
    node_starts = np.searchsorted(cell_sorted, cell_ids)
    node_ends = np.searchsorted(cell_sorted, cell_ids, side="right")
    local_id = np.full(n, -1, dtype=np.int64)
    local_id[assigned_order] = np.arange(assigned_order.shape[0])

    if eu.shape[0]:
        edge_cell = cell_of_node[eu]
        eorder = np.argsort(edge_cell, kind="stable")
        ecell_sorted = edge_cell[eorder]
        eu_l = local_id[eu[eorder]]
        ev_l = local_id[ev[eorder]]
        edge_starts = np.searchsorted(ecell_sorted, cell_ids)
        edge_ends = np.searchsorted(ecell_sorted, cell_ids, side="right")
    else:
        edge_starts = edge_ends = np.zeros(cell_ids.shape[0], dtype=np.int64)
        eu_l = ev_l = np.empty(0, dtype=np.int64)

    for ci, cell in enumerate(cell_ids):
        n0, n1 = node_starts[ci], node_ends[ci]
        nc = n1 - n0
        e0, e1 = edge_starts[ci], edge_ends[ci]
        if nc < 2 or e0 == e1:
            continue
        lu = eu_l[e0:e1] - n0
        lv = ev_l[e0:e1] - n0
        counts = np.bincount(lu, minlength=nc) + np.bincount(lv, minlength=nc)
        indptr = np.zeros(nc + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = np.empty(2 * lu.shape[0], dtype=np.int64)
        pos = indptr[:-1].copy()
        for a, b in zip(lu, lv):
            indices[pos[a]] = b
            pos[a] += 1
            indices[pos[b]] = a
            pos[b] += 1
        glab = labels[assigned_order[n0:n1]]
        _, loc_lab = np.unique(glab, return_inverse=True)
        loc_sizes = np.bincount(loc_lab)
        l, l_max = path_stats_for_components(
            indptr, indices, loc_lab, loc_sizes, path_cfg, salt=int(cell)
        )
        if l is not None:
            out[ci] = l / l_max
    return out


def scale_stats(
    g: SpatialGraph,
    p: Partition,
    path_cfg: PathConfig | None = None,
    with_paths: bool = True,
    hist_bin_width: float = 50.0,
    cell_of_node: np.ndarray | None = None,
    edge_lengths: np.ndarray | None = None,
    original_dist: DistanceHistogram | None = None,
) -> ScaleStats:
    """Divide ``g`` by ``p`` and compute every per-scale statistic.

    ``cell_of_node`` and ``edge_lengths`` can be supplied when cached by the
    caller (identical across rewired replicates, whose locations are fixed).
    """
    path_cfg = path_cfg or PathConfig()
    if cell_of_node is None:
        cell_of_node = assign_nodes(g, p)
    if edge_lengths is None:
        edge_lengths = g.edge_lengths()
    cu = cell_of_node[g.edge_u]
    cv = cell_of_node[g.edge_v]
    retained = (cu == cv) & (cu != UNASSIGNED)
    eu = g.edge_u[retained]
    ev = g.edge_v[retained]

    if eu.shape[0]:
        data = np.ones(eu.shape[0], dtype=np.int8)
        adj = csr_matrix((data, (eu, ev)), shape=(g.n, g.n))
        ncomp, labels = csgraph.connected_components(adj, directed=False)
    else:
        labels = np.arange(g.n)
        ncomp = g.n
    sizes = np.bincount(labels, minlength=ncomp).astype(np.int64)

    cell_ids, s_rel, s_other, n_nodes = _per_cell_components(
        labels, sizes, cell_of_node
    )
    cc = _retained_clustering(g.n, eu, ev, cell_of_node, cell_ids, n_nodes)
    if with_paths:
        l_rel = _per_cell_paths(
            g.n, eu, ev, labels, cell_of_node, cell_ids, path_cfg
        )
    else:
        l_rel = np.full(cell_ids.shape[0], np.nan)

    e_per_cell = np.bincount(
        cu[retained], minlength=(int(cell_ids.max()) + 1 if cell_ids.size else 1)
    )[cell_ids] if cell_ids.size else np.empty(0, dtype=np.int64)
    coverage = {c.id: c.coverage for c in p.cells}
    records = [
        (
            MetricRecord(
                s_rel=float(s_rel[i]),
                s_other=float(s_other[i]),
                cc=float(cc[i]),
                l_rel=None if math.isnan(l_rel[i]) else float(l_rel[i]),
                n=int(n_nodes[i]),
                e=int(e_per_cell[i]),
            ),
            coverage[int(cell_ids[i])],
        )
        for i in range(cell_ids.shape[0])
    ]
    aggregates = aggregate_scale(records) if records else {
        name: (math.nan, math.nan, 0) for name in METRIC_NAMES
    }

    dist = distances_to_histogram(edge_lengths[retained], hist_bin_width)
    if original_dist is None:
        original_dist = distances_to_histogram(edge_lengths, hist_bin_width)
    loss = loss_histogram(original_dist, dist)

    return ScaleStats(
        scale_label=p.scale_label,
        scale_m=_scale_meters(p),
        cells=int(cell_ids.shape[0]),
        aggregates=aggregates,
        retained=int(retained.sum()),
        lost=int(g.m - retained.sum()),
        unassigned_nodes=int((cell_of_node == UNASSIGNED).sum()),
        dist=dist,
        loss=loss,
    )


def _scale_meters(p: Partition) -> float:
    """Nominal size for grids; equivalent square side for polygon units."""
    if p.nominal_size is not None:
        return float(p.nominal_size)
    if not p.cells:
        return math.nan
    areas = []
    for c in p.cells:
        if isinstance(c.geometry, Rect):
            areas.append(c.geometry.area)
        else:
            from .partition import polygon_area

            areas.append(polygon_area(c.geometry))
    return math.sqrt(sum(areas) / len(areas))


# ---------------------------------------------------------------------------
# Experiment configuration

@dataclass(frozen=True)
class ExperimentConfig:
    synth: SynthConfig | None = None
    node_file: str | None = None
    edge_file: str | None = None
    study_area: Rect | None = None
    networks: tuple[str, ...] = NETWORK_KINDS
    grid_min: float = 100.0
    grid_max: float = 2400.0
    grid_step: float = 100.0
    polygon_files: tuple[str, ...] = ()
    replicates: int = 100
    null_bin_width: float = 50.0
    swap_budget: int | None = None
    max_attempts: int | None = None
    hist_bin_width: float = 50.0
    path_exact_threshold: int = 5000
    path_sample_sources: int = 1000
    with_paths: bool = True
    master_seed: int = 0
    workers: int = 1
    out_dir: str = "out"

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicate count must be >= 1")
        for kind in self.networks:
            if kind not in NETWORK_KINDS:
                raise ValueError(f"unknown network kind {kind!r}")

    def path_config(self) -> PathConfig:
        return PathConfig(
            exact_threshold=self.path_exact_threshold,
            sample_sources=self.path_sample_sources,
        )

    def to_json(self) -> str:
        d = asdict(self)
        if self.synth is not None:
            d["synth"] = json.loads(self.synth.to_json())
        if self.study_area is not None:
            d["study_area"] = list(self.study_area.as_tuple())
        return json.dumps(d, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        d = json.loads(text)
        if d.get("synth") is not None:
            d["synth"] = SynthConfig.from_json(json.dumps(d["synth"]))
        if d.get("study_area") is not None:
            d["study_area"] = Rect(*d["study_area"])
        for key in ("networks", "polygon_files"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


def load_observed(cfg: ExperimentConfig) -> SpatialGraph:
    if cfg.synth is not None:
        return generate(cfg.synth, cfg.synth.seed)
    if cfg.node_file and cfg.edge_file:
        if cfg.study_area is None:
            raise ValueError("study_area required with node/edge files")
        return read_graph_csv(cfg.node_file, cfg.edge_file, cfg.study_area)
    raise ValueError("experiment config names neither synth nor input files")


def build_partitions(cfg: ExperimentConfig, area: Rect) -> dict[str, list[Partition]]:
    """Partition families keyed 'grid' / 'polygon'."""
    out: dict[str, list[Partition]] = {}
    grids = grid_ladder(area, cfg.grid_min, cfg.grid_max, cfg.grid_step)
    if grids:
        out["grid"] = grids
    polys = [load_polygon_partition(f, area) for f in cfg.polygon_files]
    if polys:
        out["polygon"] = polys
    return out


def network_seed(master_seed: int, kind: str) -> int:
    return splitmix64(master_seed ^ _KIND_SALT[kind])


# worker-side state for replicate evaluation
_EXP_STATE: dict = {}


def _init_experiment_worker(g, cfg, partitions):
    _EXP_STATE["g"] = g
    _EXP_STATE["cfg"] = cfg
    _EXP_STATE["partitions"] = partitions
    _EXP_STATE["cache"] = None


def _evaluate_graph(h, cfg, partitions, assignments=None):
    """ScaleStats for every partition of every family, plus undivided Dist."""
    lengths = h.edge_lengths()
    original = distances_to_histogram(lengths, cfg.hist_bin_width)
    rows = {}
    for family, parts in partitions.items():
        for idx, p in enumerate(parts):
            cached = assignments.get((family, idx)) if assignments else None
            rows[(family, idx)] = scale_stats(
                h,
                p,
                path_cfg=cfg.path_config(),
                with_paths=cfg.with_paths,
                hist_bin_width=cfg.hist_bin_width,
                cell_of_node=cached,
                edge_lengths=lengths,
                original_dist=original,
            )
    return rows, original


def _replicate_job(args):
    kind, index, seed = args
    g = _EXP_STATE["g"]
    cfg = _EXP_STATE["cfg"]
    partitions = _EXP_STATE["partitions"]
    nm = NullModelConfig(
        kind=kind,
        bin_width=cfg.null_bin_width,
        swap_budget=cfg.swap_budget,
        max_attempts=cfg.max_attempts,
    )
    h, stats = make_replicate(g, nm, seed)
    assignments = None
    if kind == RANDOM_EDGE:
        # locations identical to the base graph: reuse its assignments
        if _EXP_STATE["cache"] is None:
            _EXP_STATE["cache"] = {
                (family, idx): assign_nodes(g, p)
                for family, parts in partitions.items()
                for idx, p in enumerate(parts)
            }
        assignments = _EXP_STATE["cache"]
    rows, original = _evaluate_graph(h, cfg, partitions, assignments)
    warning = stats.warning if stats is not None else None
    return kind, index, rows, original, warning


# ---------------------------------------------------------------------------
# Aggregation across replicates and CSV emission

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _mean_hist(hists: list[DistanceHistogram]) -> DistanceHistogram:
    w = hists[0].bin_width
    length = max(len(h.bins) for h in hists)
    bins = np.mean([h.counts(length) for h in hists], axis=0)
    zero = float(np.mean([h.zero_count for h in hists]))
    total = float(np.mean([h.total for h in hists]))
    return DistanceHistogram(w, zero, bins, total)


def run_experiment(cfg: ExperimentConfig) -> Path:
    """Run the full study and write outputs; returns the output directory.

    Outputs: ``curves_<family>.csv`` (one row per network/scale/metric),
    ``dist_<network>_<scale>.csv`` / ``loss_<network>_<scale>.csv``
    histograms, ``plots/*.svg``, and ``manifest.json`` written last as the
    commit marker.
    """
    t_start = time.perf_counter()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stage_seconds: dict[str, float] = {}

    t0 = time.perf_counter()
    g = load_observed(cfg)
    partitions = build_partitions(cfg, g.study_area)
    if not partitions:
        raise ValueError("no partitions configured (empty ladder, no polygons)")
    stage_seconds["load"] = time.perf_counter() - t0

    warnings: list[str] = []
    seeds_by_kind: dict[str, list[int]] = {}
    # per network: {(family, idx): aggregate row}, plus histograms
    curve_rows: dict[str, dict] = {}
    hist_out: dict[tuple[str, str], DistanceHistogram] = {}

    t0 = time.perf_counter()
    if OBSERVED in cfg.networks:
        rows, original = _evaluate_graph(g, cfg, partitions)
        curve_rows[OBSERVED] = {
            key: _observed_row(st) for key, st in rows.items()
        }
        for (family, idx), st in rows.items():
            hist_out[(OBSERVED, st.scale_label)] = st.dist
            hist_out[(OBSERVED, f"{st.scale_label}-loss")] = st.loss
        hist_out[(OBSERVED, "original")] = original
    stage_seconds[OBSERVED] = time.perf_counter() - t0

    null_kinds = [k for k in cfg.networks if k != OBSERVED]
    for kind in null_kinds:
        t0 = time.perf_counter()
        base = network_seed(cfg.master_seed, kind)
        seeds = [replicate_seed(base, i) for i in range(cfg.replicates)]
        seeds_by_kind[kind] = seeds
        jobs = [(kind, i, s) for i, s in enumerate(seeds)]
        results: list = [None] * cfg.replicates
        if cfg.workers > 1 and cfg.replicates > 1:
            with ProcessPoolExecutor(
                max_workers=cfg.workers,
                initializer=_init_experiment_worker,
                initargs=(g, cfg, partitions),
            ) as pool:
                for kind_r, index, rows, original, warning in pool.map(
                    _replicate_job, jobs, chunksize=1
                ):
                    results[index] = (rows, original, warning)
        else:
            _init_experiment_worker(g, cfg, partitions)
            for job in jobs:
                _, index, rows, original, warning = _replicate_job(job)
                results[index] = (rows, original, warning)
        for index, (_, _, warning) in enumerate(results):
            if warning:
                warnings.append(f"{kind} replicate {index}: {warning}")
        curve_rows[kind] = _ensemble_rows(results)
        for key in results[0][0]:
            label = results[0][0][key].scale_label
            hist_out[(kind, label)] = _mean_hist(
                [r[0][key].dist for r in results]
            )
            hist_out[(kind, f"{label}-loss")] = _mean_hist(
                [r[0][key].loss for r in results]
            )
        hist_out[(kind, "original")] = _mean_hist([r[1] for r in results])
        stage_seconds[kind] = time.perf_counter() - t0

    t0 = time.perf_counter()
    for family, parts in partitions.items():
        _write_curves(out / f"curves_{family}.csv", family, parts, cfg, curve_rows)
    for (kind, label), hist in sorted(hist_out.items()):
        if label.endswith("-loss"):
            name = f"loss_{kind}_{label[:-5]}.csv"
        elif label == "original":
            name = f"dist_{kind}_original.csv"
        else:
            name = f"dist_{kind}_{label}.csv"
        hist.write_csv(out / name)
    emit_plots(out)
    stage_seconds["write"] = time.perf_counter() - t0

    manifest = {
        "tool": "contactscale",
        "version": _version,
        "config": json.loads(cfg.to_json()),
        "master_seed": cfg.master_seed,
        "seed_mix": MIX_NAME,
        "replicate_seeds": seeds_by_kind,
        "warnings": warnings,
        "stage_seconds": {k: round(v, 3) for k, v in stage_seconds.items()},
        "total_seconds": round(time.perf_counter() - t_start, 3),
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def _observed_row(st: ScaleStats) -> dict:
    return {
        "scale_label": st.scale_label,
        "scale_m": st.scale_m,
        "cells": float(st.cells),
        "lost": float(st.lost),
        "metrics": {
            name: (mean, stdev, float(count))
            for name, (mean, stdev, count) in st.aggregates.items()
        },
    }


def _ensemble_rows(results: list) -> dict:
    """Replicate-mean rows: metric means averaged, stdev across replicates."""
    out = {}
    for key in results[0][0]:
        stats = [r[0][key] for r in results]
        metrics = {}
        for name in METRIC_NAMES:
            vals = np.array(
                [s.aggregates[name][0] for s in stats], dtype=np.float64
            )
            counts = np.array(
                [s.aggregates[name][2] for s in stats], dtype=np.float64
            )
            finite = vals[~np.isnan(vals)]
            if finite.size:
                metrics[name] = (
                    float(finite.mean()),
                    float(finite.std()),
                    float(counts.mean()),
                )
            else:
                metrics[name] = (math.nan, math.nan, 0.0)
        out[key] = {
            "scale_label": stats[0].scale_label,
            "scale_m": stats[0].scale_m,
            "cells": float(np.mean([s.cells for s in stats])),
            "lost": float(np.mean([s.lost for s in stats])),
            "metrics": metrics,
        }
    return out


def _write_curves(path, family, parts, cfg, curve_rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            [
                "network", "scale_label", "scale_m", "cells", "metric",
                "mean", "stdev", "count", "lost_edges",
            ]
        )
        for kind in NETWORK_KINDS:
            if kind not in curve_rows:
                continue
            for idx in range(len(parts)):
                row = curve_rows[kind].get((family, idx))
                if row is None:
                    continue
                for name in METRIC_NAMES:
                    mean, stdev, count = row["metrics"][name]
                    w.writerow(
                        [
                            kind,
                            row["scale_label"],
                            _fmt(row["scale_m"]),
                            _fmt(row["cells"]),
                            name,
                            _fmt(mean),
                            _fmt(stdev),
                            _fmt(count),
                            _fmt(row["lost"]),
                        ]
                    )


# ---------------------------------------------------------------------------
# Characteristic scale and plots

def detect_characteristic_scale(
    points: list[tuple[float, float]], plateau_tolerance: float = 0.1
) -> float | None:
    """Smallest scale from which the curve stays within tolerance of its
    final value, relative to the curve's full range.

    ``points`` is (scale, value) pairs; returns the scale, or None when even
    the final point violates the rule (cannot happen: the final point always
    satisfies it, so the last scale is the worst case).
    """
    if len(points) < 3:
        raise ValueError("need at least 3 curve points")
    pts = sorted(points)
    values = [v for _, v in pts]
    v_last = values[-1]
    span = abs(v_last - values[0])
    for i, (s, _) in enumerate(pts):
        if all(abs(v - v_last) <= plateau_tolerance * span for v in values[i:]):
            return s
    return None


_HIST_PANEL_LABELS = ("grid-600", "grid-1200", "grid-2400")


def emit_plots(out_dir) -> list[Path]:
    """Render curve and histogram SVGs from the CSVs in ``out_dir``."""
    out = Path(out_dir)
    plots = out / "plots"
    plots.mkdir(exist_ok=True)
    written = []
    for curves in sorted(out.glob("curves_*.csv")):
        family = curves.stem.split("_", 1)[1]
        series: dict[str, dict[str, list]] = {}
        with open(curves, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ValueError(f"no data rows in {curves}")
        for row in rows:
            series.setdefault(row["metric"], {}).setdefault(
                row["network"], []
            ).append((float(row["scale_m"]), float(row["mean"])))
        for metric, by_net in series.items():
            svg = line_chart(
                [(net, sorted(pts)) for net, pts in by_net.items()],
                title=f"{metric} vs scale ({family})",
                xlabel="cell size (m)",
                ylabel=metric,
            )
            path = plots / f"{family}_{metric}.svg"
            path.write_text(svg)
            written.append(path)
    for prefix in ("dist", "loss"):
        for label in _HIST_PANEL_LABELS:
            panels = []
            for kind in NETWORK_KINDS:
                path = out / f"{prefix}_{kind}_{label}.csv"
                if path.exists():
                    panels.append((kind, _read_hist_csv(path)))
            if panels:
                svg = histogram_panel(
                    panels,
                    title=f"{prefix} at {label}",
                    xlabel="edge distance (m)",
                )
                path = plots / f"{prefix}_{label}.svg"
                path.write_text(svg)
                written.append(path)
    return written


def _read_hist_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                (float(row["bin_lo"]), float(row["bin_hi"]), float(row["count"]))
            )
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows
