"""Areal partitions of the study area and division of graphs into unit
networks.

Two partition families: regular square grids anchored at the study area's
minimum corner (a ladder of cell sizes gives the scale axis), and polygon
partitions loaded from a GeoJSON-style file (census-unit stand-ins).  A
division keeps every edge whose endpoints fall in the same cell and drops
the boundary-crossing rest; retained + lost is always exactly the input
edge count.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Rect, SpatialGraph, from_arrays

UNASSIGNED = -1


class PartitionError(ValueError):
    """Raised for malformed partition geometry or files."""


@dataclass(frozen=True)
class Cell:
    """One areal unit: a rectangle or a simple polygon, plus its coverage
    (overlap area with the study area divided by its own area)."""

    id: int
    geometry: Rect | np.ndarray
    coverage: float


@dataclass(frozen=True)
class Partition:
    scale_label: str
    nominal_size: float | None
    cells: tuple[Cell, ...]
    study_area: Rect

    @property
    def n_cells(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class UnitNetwork:
    cell_id: int
    graph: SpatialGraph
    weight: float


@dataclass(frozen=True)
class DivisionResult:
    units: tuple[UnitNetwork, ...]
    lost_edges: np.ndarray  # (k, 3) array of (u, v, kind)
    retained_count: int
    lost_count: int
    unassigned_nodes: int


# ---------------------------------------------------------------------------
# Polygon geometry (closed-form, dependency-free)

def polygon_area(ring: np.ndarray) -> float:
    """Shoelace area of a closed or open simple ring (positive)."""
    r = np.asarray(ring, dtype=np.float64)
    if np.allclose(r[0], r[-1]):
        r = r[:-1]
    x, y = r[:, 0], r[:, 1]
    return abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))) / 2.0


def clip_polygon_rect(ring: np.ndarray, rect: Rect) -> np.ndarray:
    """Sutherland-Hodgman clip of a simple polygon against a rectangle."""
    poly = [tuple(p) for p in np.asarray(ring, dtype=np.float64)]
    if poly and poly[0] == poly[-1]:
        poly = poly[:-1]

    def clip_edge(points, inside, intersect):
        out = []
        for i, cur in enumerate(points):
            prev = points[i - 1]
            cur_in, prev_in = inside(cur), inside(prev)
            if cur_in:
                if not prev_in:
                    out.append(intersect(prev, cur))
                out.append(cur)
            elif prev_in:
                out.append(intersect(prev, cur))
        return out

    def x_cross(p, q, xc):
        t = (xc - p[0]) / (q[0] - p[0])
        return (xc, p[1] + t * (q[1] - p[1]))

    def y_cross(p, q, yc):
        t = (yc - p[1]) / (q[1] - p[1])
        return (p[0] + t * (q[0] - p[0]), yc)

    for inside, intersect in (
        (lambda p: p[0] >= rect.xmin, lambda p, q: x_cross(p, q, rect.xmin)),
        (lambda p: p[0] <= rect.xmax, lambda p, q: x_cross(p, q, rect.xmax)),
        (lambda p: p[1] >= rect.ymin, lambda p, q: y_cross(p, q, rect.ymin)),
        (lambda p: p[1] <= rect.ymax, lambda p, q: y_cross(p, q, rect.ymax)),
    ):
        poly = clip_edge(poly, inside, intersect)
        if not poly:
            return np.empty((0, 2), dtype=np.float64)
    return np.asarray(poly, dtype=np.float64)


def _segments_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if v == 0 else (1 if v > 0 else -1)

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    return o1 != o2 and o3 != o4


def validate_ring(ring: np.ndarray, ring_id) -> np.ndarray:
    """Require a closed, non-self-intersecting ring; return it open."""
    r = np.asarray(ring, dtype=np.float64)
    if r.ndim != 2 or r.shape[1] != 2 or r.shape[0] < 4:
        raise PartitionError(f"ring {ring_id}: too few vertices")
    if not np.allclose(r[0], r[-1]):
        raise PartitionError(f"ring {ring_id}: not closed")
    r = r[:-1]
    k = r.shape[0]
    for i in range(k):
        a, b = r[i], r[(i + 1) % k]
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue  # adjacent around the wrap
            c, d = r[j], r[(j + 1) % k]
            if _segments_intersect(a, b, c, d):
                raise PartitionError(f"ring {ring_id}: self-intersecting")
    return r


def points_in_polygon(x: np.ndarray, y: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """Even-odd (ray casting) point-in-polygon test, vectorized over points."""
    inside = np.zeros(x.shape[0], dtype=bool)
    k = ring.shape[0]
    for i in range(k):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % k]
        crosses = (y1 > y) != (y2 > y)
        if not crosses.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (x < xint)
    return inside


# ---------------------------------------------------------------------------
# Grid partitions

def make_grid(study_area: Rect, cell_size: float) -> Partition:
    """Square grid anchored at the study area's minimum corner.

    Boundary cells overhanging the area keep their overlap-area coverage;
    cells are id'd row-major from the minimum corner.
    """
    if cell_size <= 0:
        raise PartitionError("cell_size must be positive")
    if cell_size > study_area.width and cell_size > study_area.height:
        warnings.warn(
            f"cell size {cell_size} exceeds both study-area dimensions; "
            "returning a single cell"
        )
    nx = max(1, math.ceil(study_area.width / cell_size))
    ny = max(1, math.ceil(study_area.height / cell_size))
    cells = []
    cid = 0
    for iy in range(ny):
        for ix in range(nx):
            x0 = study_area.xmin + ix * cell_size
            y0 = study_area.ymin + iy * cell_size
            rect = Rect(x0, y0, x0 + cell_size, y0 + cell_size)
            ow = min(rect.xmax, study_area.xmax) - x0
            oh = min(rect.ymax, study_area.ymax) - y0
            coverage = (ow * oh) / (cell_size * cell_size)
            cells.append(Cell(cid, rect, coverage))
            cid += 1
    label = f"grid-{cell_size:g}"
    return Partition(label, float(cell_size), tuple(cells), study_area)


def grid_ladder(
    study_area: Rect, size_min: float, size_max: float, step: float
) -> list[Partition]:
    """One grid partition per size ``min, min+step, ... <= max``."""
    if step <= 0:
        raise PartitionError("step must be positive")
    if size_min > size_max:
        warnings.warn("inverted grid-ladder range; returning no partitions")
        return []
    sizes = []
    s = size_min
    while s <= size_max + 1e-9:
        sizes.append(s)
        s += step
    return [make_grid(study_area, s) for s in sizes]


# ---------------------------------------------------------------------------
# Polygon partitions

def load_polygon_partition(source, study_area: Rect, label: str | None = None) -> Partition:
    """Load a FeatureCollection of Polygon features as one partition.

    Each feature needs integer property ``id`` and text property ``level``;
    only the outer ring is honored and holes are rejected.  Coordinates are
    meters in the study plane.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source) as fh:
            doc = json.load(fh)
    else:
        doc = source
    if doc.get("type") != "FeatureCollection":
        raise PartitionError("expected a FeatureCollection")
    cells = []
    level = label
    for feat in doc.get("features", []):
        geom = feat.get("geometry", {})
        props = feat.get("properties", {})
        cid = int(props["id"])
        if geom.get("type") != "Polygon":
            raise PartitionError(f"feature {cid}: only Polygon geometry supported")
        rings = geom.get("coordinates", [])
        if len(rings) != 1:
            raise PartitionError(f"feature {cid}: holes are not supported")
        ring = validate_ring(np.asarray(rings[0], dtype=np.float64), cid)
        area = polygon_area(ring)
        if area <= 0:
            raise PartitionError(f"feature {cid}: zero-area polygon")
        clipped = clip_polygon_rect(ring, study_area)
        overlap = polygon_area(clipped) if clipped.shape[0] >= 3 else 0.0
        if overlap <= 0:
            continue  # wholly outside the study area
        cells.append(Cell(cid, ring, overlap / area))
        if level is None:
            level = str(props.get("level", "polygon"))
    return Partition(level or "polygon", None, tuple(cells), study_area)


# ---------------------------------------------------------------------------
# Assignment and division

def assign_nodes(g: SpatialGraph, p: Partition) -> np.ndarray:
    """Cell id per node, or -1 for nodes covered by no cell.

    Grid cells use half-open membership [x0,x1) x [y0,y1), except that the
    grid's outer maximum edge is closed (points clipped to the study-area
    boundary still belong to the last row/column); polygon cells use the
    even-odd rule with ties (shared boundaries) going to the lowest cell id
    containing the point.
    """
    n = g.n
    out = np.full(n, UNASSIGNED, dtype=np.int64)
    if p.nominal_size is not None and all(
        isinstance(c.geometry, Rect) for c in p.cells
    ):
        size = p.nominal_size
        sa = p.study_area
        ix = np.floor((g.x - sa.xmin) / size).astype(np.int64)
        iy = np.floor((g.y - sa.ymin) / size).astype(np.int64)
        nx = max(1, math.ceil(sa.width / size))
        ny = max(1, math.ceil(sa.height / size))
        ok = (
            (g.x >= sa.xmin) & (g.x <= sa.xmin + nx * size)
            & (g.y >= sa.ymin) & (g.y <= sa.ymin + ny * size)
        )
        ix = np.minimum(ix, nx - 1)
        iy = np.minimum(iy, ny - 1)
        out[ok] = iy[ok] * nx + ix[ok]
        return out
    for cell in sorted(p.cells, key=lambda c: c.id):
        todo = out == UNASSIGNED
        if not todo.any():
            break
        idx = np.flatnonzero(todo)
        if isinstance(cell.geometry, Rect):
            r = cell.geometry
            hit = (
                (g.x[idx] >= r.xmin) & (g.x[idx] < r.xmax)
                & (g.y[idx] >= r.ymin) & (g.y[idx] < r.ymax)
            )
        else:
            ring = cell.geometry
            xmin, ymin = ring.min(axis=0)
            xmax, ymax = ring.max(axis=0)
            box = (
                (g.x[idx] >= xmin) & (g.x[idx] <= xmax)
                & (g.y[idx] >= ymin) & (g.y[idx] <= ymax)
            )
            cand = idx[box]
            hit_c = points_in_polygon(g.x[cand], g.y[cand], ring)
            # include boundary points missed by the open half of ray casting
            out[cand[hit_c]] = cell.id
            continue
        out[idx[hit]] = cell.id
    return out


def split_edges(g: SpatialGraph, cell_of_node: np.ndarray):
    """Boolean retained mask plus the retaining cell of each retained edge."""
    cu = cell_of_node[g.edge_u]
    cv = cell_of_node[g.edge_v]
    retained = (cu == cv) & (cu != UNASSIGNED)
    return retained, cu


def divide(g: SpatialGraph, p: Partition) -> DivisionResult:
    """Divide a graph into per-cell unit networks plus the lost edges.

    Cells with zero assigned nodes produce no unit network.  Unit graphs
    reuse the parent study area and keep their nodes relabeled densely; the
    conservation identity retained + lost == |E| holds exactly.
    """
    cell_of_node = assign_nodes(g, p)
    retained, edge_cell = split_edges(g, cell_of_node)
    lost = ~retained
    lost_edges = np.stack(
        [g.edge_u[lost], g.edge_v[lost], g.edge_kind[lost].astype(np.int64)],
        axis=1,
    )
    coverage = {c.id: c.coverage for c in p.cells}
    units = []
    for cid in np.unique(cell_of_node):
        if cid == UNASSIGNED:
            continue
        node_idx = np.flatnonzero(cell_of_node == cid)
        remap = np.full(g.n, -1, dtype=np.int64)
        remap[node_idx] = np.arange(node_idx.size)
        emask = retained & (edge_cell == cid)
        sub = from_arrays(
            g.x[node_idx],
            g.y[node_idx],
            g.household[node_idx],
            g.workplace[node_idx],
            remap[g.edge_u[emask]],
            remap[g.edge_v[emask]],
            g.edge_kind[emask],
            g.study_area,
            validate=False,
        )
        units.append(UnitNetwork(int(cid), sub, coverage[int(cid)]))
    return DivisionResult(
        units=tuple(units),
        lost_edges=lost_edges,
        retained_count=int(retained.sum()),
        lost_count=int(lost.sum()),
        unassigned_nodes=int((cell_of_node == UNASSIGNED).sum()),
    )
