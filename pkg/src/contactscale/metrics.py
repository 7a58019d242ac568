"""Structure metrics: components, clustering, path lengths, edge distances.

Four network-structure metrics (largest-component share, mean size of the
other components, clustering coefficient, relative average path length) and
two spatial-structure ones (the binned edge-distance histogram of a network
and the histogram of edges lost when a network is divided).

Degenerate conventions, applied consistently everywhere:

* empty graph: component share 0, clustering 0;
* a single component (or none): mean other-component size 0;
* nodes with degree < 2: per-node clustering 0, still counted in the mean;
* no connected ordered pair: path lengths are missing (``None``).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._kernels import all_source_path_stats
from .graph import ComponentLabeling, SpatialGraph, connected_components

METRIC_NAMES = ("s_rel", "s_other", "cc", "l_rel")


class ConsistencyError(RuntimeError):
    """An internal identity (e.g. a non-negative loss bin) was violated."""


@dataclass(frozen=True)
class MetricRecord:
    """Per-graph metric values; ``l_rel`` is None when no pair is connected."""

    s_rel: float
    s_other: float
    cc: float
    l_rel: float | None
    n: int
    e: int

    def value(self, name: str) -> float | None:
        return getattr(self, name)


@dataclass(frozen=True)
class PathConfig:
    """How average path lengths are computed.

    Components up to ``exact_threshold`` nodes get exact all-source BFS;
    larger ones are estimated from BFS out of ``sample_sources`` sources
    drawn deterministically from ``sample_seed``.
    """

    exact_threshold: int = 5000
    sample_sources: int = 1000
    sample_seed: int = 2_0210_527


@dataclass
class DistanceHistogram:
    """Binned edge-distance counts with a dedicated exact-zero count.

    Bin ``k`` covers ``(k*w, (k+1)*w]``; exact-zero distances are kept out of
    bin 0 because the zero spike (co-located family edges) is a feature of
    its own.
    """

    bin_width: float
    zero_count: float
    bins: np.ndarray
    total: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.bins = np.asarray(self.bins, dtype=np.float64)
        if self.total is None:
            self.total = float(self.zero_count + self.bins.sum())

    def counts(self, length: int | None = None) -> np.ndarray:
        """Bins padded with zeros to ``length`` (bin counts only)."""
        if length is None or length == len(self.bins):
            return self.bins
        out = np.zeros(length, dtype=np.float64)
        out[: len(self.bins)] = self.bins
        return out

    def mean_distance(self) -> float:
        """Mean distance approximated from bin midpoints (zeros exact)."""
        if self.total == 0:
            return 0.0
        mids = (np.arange(len(self.bins)) + 0.5) * self.bin_width
        return float((self.bins * mids).sum() / self.total)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_lo", "bin_hi", "count"])
            w.writerow([0, 0, _fmt_count(self.zero_count)])
            for k, cval in enumerate(self.bins):
                w.writerow(
                    [
                        format(k * self.bin_width, ".17g"),
                        format((k + 1) * self.bin_width, ".17g"),
                        _fmt_count(cval),
                    ]
                )


def _fmt_count(v) -> str:
    f = float(v)
    if f.is_integer():
        return str(int(f))
    return format(f, ".17g")


# ---------------------------------------------------------------------------
# Component metrics

def largest_component_share(lab: ComponentLabeling) -> float:
    """Share of nodes in the largest component; 0 for an empty graph."""
    if lab.n == 0:
        return 0.0
    return float(lab.sizes.max() / lab.n)


def mean_other_component_size(lab: ComponentLabeling) -> float:
    """Mean size of components other than the largest; 0 when c <= 1.

    Ties for the largest exclude exactly one component, the lowest-index one.
    """
    c = lab.c
    if c <= 1:
        return 0.0
    total = int(lab.sizes.sum())
    return float((total - int(lab.sizes[np.argmax(lab.sizes)])) / (c - 1))


# ---------------------------------------------------------------------------
# Clustering

def per_node_clustering(g: SpatialGraph) -> np.ndarray:
    """Clustering coefficient of every node; degree < 2 gives 0."""
    n = g.n
    if n == 0:
        return np.empty(0, dtype=np.float64)
    if g.m == 0:
        return np.zeros(n, dtype=np.float64)
    adj = g.adjacency()
    deg = np.diff(adj.indptr)
    # triangles through i = (A @ A) .* A row sums / 2
    paths2 = (adj @ adj).multiply(adj)
    tri = np.asarray(paths2.sum(axis=1)).ravel() / 2.0
    denom = deg * (deg - 1)
    out = np.zeros(n, dtype=np.float64)
    mask = denom > 0
    out[mask] = 2.0 * tri[mask] / denom[mask]
    return out


def node_clustering(g: SpatialGraph, i: int) -> float:
    """Fraction of neighbor pairs of ``i`` that are themselves connected."""
    nbrs = g.neighbors(i)
    k = len(nbrs)
    if k < 2:
        return 0.0
    nbr_set = set(int(v) for v in nbrs)
    links = 0
    for u, v in zip(g.edge_u, g.edge_v):
        if int(u) in nbr_set and int(v) in nbr_set:
            links += 1
    return 2.0 * links / (k * (k - 1))


def network_clustering(g: SpatialGraph) -> float:
    """Mean per-node clustering over all nodes, degree-0/1 included."""
    if g.n == 0:
        return 0.0
    return float(per_node_clustering(g).mean())


# ---------------------------------------------------------------------------
# Path lengths

def _csr_arrays(g: SpatialGraph) -> tuple[np.ndarray, np.ndarray]:
    adj = g.adjacency()
    return adj.indptr.astype(np.int64), adj.indices.astype(np.int64)


def path_stats_for_components(
    indptr: np.ndarray,
    indices: np.ndarray,
    labels: np.ndarray,
    sizes: np.ndarray,
    cfg: PathConfig,
    salt: int = 0,
) -> tuple[float | None, int | None]:
    """(l, l_max) over connected ordered pairs of a (sub)graph in CSR form.

    ``salt`` keeps deterministic sampling distinct between otherwise
    identical calls (e.g. different cells of one partition).
    """
    sums = 0.0
    pairs = 0
    l_max = 0
    order = np.argsort(labels, kind="stable")
    comp_starts = np.searchsorted(labels[order], np.arange(len(sizes)))
    for comp in range(len(sizes)):
        size = int(sizes[comp])
        if size < 2:
            continue
        members = order[comp_starts[comp] : comp_starts[comp] + size]
        npairs = size * (size - 1)
        if size <= cfg.exact_threshold:
            total, cnt, mx = all_source_path_stats(indptr, indices, members)
            sums += total
            pairs += cnt
        else:
            rng = np.random.default_rng((cfg.sample_seed, salt, comp))
            pick = rng.choice(members, size=cfg.sample_sources, replace=False)
            total, cnt, mx = all_source_path_stats(
                indptr, indices, np.sort(pick)
            )
            # scale the sampled ordered-pair mean up to the full component
            sums += (total / cnt) * npairs
            pairs += npairs
        if mx > l_max:
            l_max = mx
    if pairs == 0:
        return None, None
    return sums / pairs, int(l_max)


def average_path_length(
    g: SpatialGraph, cfg: PathConfig | None = None
) -> tuple[float | None, int | None]:
    """Mean shortest-path length over connected ordered pairs, and the
    largest finite shortest-path length (diameter across components).

    Both are None when the graph has no connected pair.
    """
    cfg = cfg or PathConfig()
    if g.n == 0 or g.m == 0:
        return None, None
    lab = connected_components(g)
    indptr, indices = _csr_arrays(g)
    return path_stats_for_components(indptr, indices, lab.labels, lab.sizes, cfg)


def relative_path_length(
    g: SpatialGraph, cfg: PathConfig | None = None
) -> float | None:
    """Average path length standardized by the diameter; None when missing."""
    l, l_max = average_path_length(g, cfg)
    if l is None:
        return None
    return l / l_max


# ---------------------------------------------------------------------------
# Distance histograms

def distances_to_histogram(d: np.ndarray, bin_width: float) -> DistanceHistogram:
    """Bin a distance array; exact zeros get the dedicated zero count."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    d = np.asarray(d, dtype=np.float64)
    zero = int((d == 0.0).sum())
    pos = d[d > 0.0]
    if pos.size:
        # the max(..., 0) guards subnormal distances whose quotient
        # underflows to zero: they are positive, so they belong in bin 0
        idx = np.maximum(np.ceil(pos / bin_width).astype(np.int64) - 1, 0)
        bins = np.bincount(idx).astype(np.float64)
    else:
        bins = np.zeros(0, dtype=np.float64)
    return DistanceHistogram(bin_width, zero, bins, float(d.size))


def edge_distance_histogram(g: SpatialGraph, bin_width: float = 50.0) -> DistanceHistogram:
    """Binned distribution of edge distances of a graph."""
    return distances_to_histogram(g.edge_lengths(), bin_width)


def loss_histogram(
    original: DistanceHistogram, retained: DistanceHistogram
) -> DistanceHistogram:
    """Bin-wise ``original - retained``; negative bins are a division bug."""
    if original.bin_width != retained.bin_width:
        raise ValueError("histograms use different bin widths")
    length = max(len(original.bins), len(retained.bins))
    zero = original.zero_count - retained.zero_count
    bins = original.counts(length) - retained.counts(length)
    if zero < 0 or (bins < 0).any():
        raise ConsistencyError(
            "retained histogram exceeds original in at least one bin"
        )
    return DistanceHistogram(
        original.bin_width, zero, bins, original.total - retained.total
    )


# ---------------------------------------------------------------------------
# Aggregation

def aggregate_scale(
    records: Sequence[tuple[MetricRecord, float]],
) -> dict[str, tuple[float, float, int]]:
    """Coverage-weighted mean/stdev per metric over one scale's unit networks.

    Missing ``l_rel`` values are excluded from that metric's aggregate (the
    reported count shrinks accordingly).  Weights must be positive.
    """
    if not records:
        raise ValueError("no unit networks at scale")
    out: dict[str, tuple[float, float, int]] = {}
    for name in METRIC_NAMES:
        vals, weights = [], []
        for rec, w in records:
            if w <= 0:
                raise ValueError("weights must be positive")
            v = rec.value(name)
            if v is None:
                continue
            vals.append(v)
            weights.append(w)
        if not vals:
            out[name] = (math.nan, math.nan, 0)
            continue
        v = np.asarray(vals)
        w = np.asarray(weights)
        mean = float((v * w).sum() / w.sum())
        var = float((w * (v - mean) ** 2).sum() / w.sum())
        out[name] = (mean, math.sqrt(max(var, 0.0)), len(vals))
    return out


def compute_metrics(
    g: SpatialGraph,
    path_cfg: PathConfig | None = None,
    with_paths: bool = True,
) -> MetricRecord:
    """All four network-structure metrics of one graph."""
    lab = connected_components(g)
    l_rel = relative_path_length(g, path_cfg) if with_paths else None
    return MetricRecord(
        s_rel=largest_component_share(lab),
        s_other=mean_other_component_size(lab),
        cc=network_clustering(g),
        l_rel=l_rel,
        n=g.n,
        e=g.m,
    )


def write_metric_csv(rows: Iterable[tuple], path) -> None:
    """Rows of ``(scale_m, cells, metric, mean, stdev, count)``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scale_m", "cells", "metric", "mean", "stdev", "count"])
        for scale_m, cells, metric, mean, stdev, count in rows:
            w.writerow(
                [
                    format(float(scale_m), ".17g"),
                    int(cells),
                    metric,
                    format(float(mean), ".17g"),
                    format(float(stdev), ".17g"),
                    int(count),
                ]
            )
