"""Spatial graph data model: nodes with planar coordinates, typed edges.

Coordinates are planar meters in a projected plane; no geodesic math
anywhere.  Node ids are dense integers ``0..n-1`` so every per-node quantity
can live in a flat numpy array.  Edges are undirected, canonicalized to
``u < v``, and carry a kind label (family or coworker).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

FAMILY = 0
COWORKER = 1
KIND_NAMES = ("family", "coworker")
_KIND_BY_NAME = {"family": FAMILY, "coworker": COWORKER}


class GraphValidationError(ValueError):
    """Raised when input records violate the graph invariants."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in meters."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise GraphValidationError(
                f"degenerate rectangle {self.xmin, self.ymin, self.xmax, self.ymax}"
            )

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)


class NodeRecord(NamedTuple):
    id: int
    x: float
    y: float
    household: int
    workplace: int | None = None


class EdgeRecord(NamedTuple):
    u: int
    v: int
    kind: int = COWORKER


NO_WORKPLACE = -1


@dataclass(frozen=True, eq=False)
class SpatialGraph:
    """Immutable spatially embedded graph.

    All per-node fields are aligned arrays indexed by node id; edge arrays
    satisfy ``edge_u < edge_v`` element-wise with no duplicates.
    """

    x: np.ndarray
    y: np.ndarray
    household: np.ndarray
    workplace: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_kind: np.ndarray
    study_area: Rect

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def m(self) -> int:
        return int(self.edge_u.shape[0])

    def edge_lengths(self) -> np.ndarray:
        """Euclidean length of every edge, in meters."""
        return np.hypot(
            self.x[self.edge_u] - self.x[self.edge_v],
            self.y[self.edge_u] - self.y[self.edge_v],
        )

    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edge_u, minlength=self.n)
        deg += np.bincount(self.edge_v, minlength=self.n)
        return deg

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric boolean adjacency as CSR (int8 data)."""
        n = self.n
        data = np.ones(2 * self.m, dtype=np.int8)
        rows = np.concatenate([self.edge_u, self.edge_v])
        cols = np.concatenate([self.edge_v, self.edge_u])
        return sp.csr_matrix((data, (rows, cols)), shape=(n, n))

    def neighbors(self, i: int) -> np.ndarray:
        adj = self.adjacency()
        return adj.indices[adj.indptr[i] : adj.indptr[i + 1]]

    def nodes(self) -> list[NodeRecord]:
        wp = self.workplace
        return [
            NodeRecord(
                i,
                float(self.x[i]),
                float(self.y[i]),
                int(self.household[i]),
                None if wp[i] == NO_WORKPLACE else int(wp[i]),
            )
            for i in range(self.n)
        ]

    def edges(self) -> list[EdgeRecord]:
        return [
            EdgeRecord(int(u), int(v), int(k))
            for u, v, k in zip(self.edge_u, self.edge_v, self.edge_kind)
        ]

    def replace(self, **changes) -> "SpatialGraph":
        """Functional update; mutation happens by constructing new graphs."""
        fields = dict(
            x=self.x,
            y=self.y,
            household=self.household,
            workplace=self.workplace,
            edge_u=self.edge_u,
            edge_v=self.edge_v,
            edge_kind=self.edge_kind,
            study_area=self.study_area,
        )
        fields.update(changes)
        return SpatialGraph(**fields)


@dataclass(frozen=True)
class ComponentLabeling:
    """Partition of the nodes into maximal connected clusters."""

    labels: np.ndarray
    sizes: np.ndarray

    @property
    def c(self) -> int:
        return int(self.sizes.shape[0])

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])


def _as_int_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise GraphValidationError(f"{name} must be one-dimensional")
    return arr


def from_arrays(
    x,
    y,
    household,
    workplace,
    edge_u,
    edge_v,
    edge_kind,
    study_area: Rect,
    validate: bool = True,
) -> SpatialGraph:
    """Build a graph from parallel arrays, canonicalizing edge order.

    The fast path for generators and null models; ``build_graph`` is the
    record-level front end.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    household = _as_int_array(household, "household")
    workplace = _as_int_array(workplace, "workplace")
    edge_u = _as_int_array(edge_u, "edge_u")
    edge_v = _as_int_array(edge_v, "edge_v")
    edge_kind = np.asarray(edge_kind, dtype=np.uint8)
    n = x.shape[0]

    u = np.minimum(edge_u, edge_v)
    v = np.maximum(edge_u, edge_v)

    if validate:
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise GraphValidationError("non-finite node coordinate")
        if y.shape[0] != n or household.shape[0] != n or workplace.shape[0] != n:
            raise GraphValidationError("node array lengths differ")
        if u.shape != v.shape or u.shape != edge_kind.shape:
            raise GraphValidationError("edge array lengths differ")
        if u.size:
            if u.min() < 0 or v.max() >= n:
                bad = int(
                    np.flatnonzero((u < 0) | (v >= n))[0]
                )
                raise GraphValidationError(
                    f"dangling endpoint in edge ({edge_u[bad]},{edge_v[bad]})"
                )
            loops = np.flatnonzero(u == v)
            if loops.size:
                raise GraphValidationError(f"self-loop at node {int(u[loops[0]])}")
            code = u * n + v
            order = np.argsort(code, kind="stable")
            dup = np.flatnonzero(np.diff(code[order]) == 0)
            if dup.size:
                i = order[dup[0]]
                raise GraphValidationError(
                    "duplicate edge after canonicalization: "
                    f"({int(u[i])},{int(v[i])})"
                )
    return SpatialGraph(x, y, household, workplace, u, v, edge_kind, study_area)


def build_graph(
    nodes: Sequence,
    edges: Iterable,
    study_area: Rect | tuple[float, float, float, float],
) -> SpatialGraph:
    """Validate node/edge records and assemble a ``SpatialGraph``.

    ``nodes`` is a sequence of ``NodeRecord``-compatible tuples ordered (or
    orderable) by dense id 0..n-1; ``edges`` yields ``(u, v, kind)`` tuples
    (kind optional, defaults to coworker).  Self-loops, duplicates after
    canonicalization, and dangling endpoints are rejected.
    """
    if not isinstance(study_area, Rect):
        study_area = Rect(*study_area)
    nodes = [NodeRecord(*tuple(rec)[:5]) if not isinstance(rec, NodeRecord) else rec
             for rec in nodes]
    nodes.sort(key=lambda r: r.id)
    ids = [r.id for r in nodes]
    if ids != list(range(len(nodes))):
        raise GraphValidationError("node ids must be contiguous 0..n-1")

    x = np.array([r.x for r in nodes], dtype=np.float64)
    y = np.array([r.y for r in nodes], dtype=np.float64)
    household = np.array([r.household for r in nodes], dtype=np.int64)
    workplace = np.array(
        [NO_WORKPLACE if r.workplace is None else r.workplace for r in nodes],
        dtype=np.int64,
    )

    eu, ev, ek = [], [], []
    for rec in edges:
        tup = tuple(rec)
        u, v = int(tup[0]), int(tup[1])
        kind = tup[2] if len(tup) > 2 else COWORKER
        if isinstance(kind, str):
            if kind not in _KIND_BY_NAME:
                raise GraphValidationError(f"unknown edge kind {kind!r}")
            kind = _KIND_BY_NAME[kind]
        eu.append(u)
        ev.append(v)
        ek.append(int(kind))
    return from_arrays(
        x, y, household, workplace,
        np.array(eu, dtype=np.int64),
        np.array(ev, dtype=np.int64),
        np.array(ek, dtype=np.uint8),
        study_area,
    )


def connected_components(g: SpatialGraph) -> ComponentLabeling:
    """Label maximal connected clusters; empty graph yields zero components."""
    if g.n == 0:
        return ComponentLabeling(
            np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        )
    n_comp, labels = csgraph.connected_components(g.adjacency(), directed=False)
    labels = labels.astype(np.int64)
    sizes = np.bincount(labels, minlength=n_comp).astype(np.int64)
    return ComponentLabeling(labels, sizes)


def degree_sequence(g: SpatialGraph) -> np.ndarray:
    """Per-node degree; sums to twice the edge count."""
    return g.degrees()


def edge_distance(g: SpatialGraph, e: EdgeRecord) -> float:
    """Euclidean distance between the endpoint locations of one edge."""
    u, v = e[0], e[1]
    return float(np.hypot(g.x[u] - g.x[v], g.y[u] - g.y[v]))


# ---------------------------------------------------------------------------
# CSV interchange

def write_nodes_csv(g: SpatialGraph, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y", "household", "workplace"])
        for i in range(g.n):
            wp = "" if g.workplace[i] == NO_WORKPLACE else int(g.workplace[i])
            w.writerow(
                [i, format(g.x[i], ".17g"), format(g.y[i], ".17g"),
                 int(g.household[i]), wp]
            )


def write_edges_csv(g: SpatialGraph, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v", "kind"])
        for u, v, k in zip(g.edge_u, g.edge_v, g.edge_kind):
            w.writerow([int(u), int(v), KIND_NAMES[k]])


def read_graph_csv(node_path, edge_path, study_area: Rect) -> SpatialGraph:
    """Load a graph from the node/edge CSV interchange files."""
    xs, ys, hh, wp = [], [], [], []
    with open(node_path, newline="") as fh:
        rd = csv.DictReader(fh)
        rows = sorted(rd, key=lambda r: int(r["id"]))
    for i, row in enumerate(rows):
        if int(row["id"]) != i:
            raise GraphValidationError("node ids must be contiguous 0..n-1")
        xs.append(float(row["x"]))
        ys.append(float(row["y"]))
        hh.append(int(row["household"]))
        wp.append(NO_WORKPLACE if row["workplace"] == "" else int(row["workplace"]))
    eu, ev, ek = [], [], []
    with open(edge_path, newline="") as fh:
        rd = csv.DictReader(fh)
        for row in rd:
            eu.append(int(row["u"]))
            ev.append(int(row["v"]))
            kind = row["kind"]
            if kind not in _KIND_BY_NAME:
                raise GraphValidationError(f"unknown edge kind {kind!r}")
            ek.append(_KIND_BY_NAME[kind])
    return from_arrays(
        np.array(xs), np.array(ys), np.array(hh, dtype=np.int64),
        np.array(wp, dtype=np.int64),
        np.array(eu, dtype=np.int64), np.array(ev, dtype=np.int64),
        np.array(ek, dtype=np.uint8), study_area,
    )
