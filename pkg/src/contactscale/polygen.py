"""Synthetic polygon partitions for experiments without real admin zones.

A level is a jittered square lattice: interior lattice points are displaced
by a bounded random offset and each lattice quad becomes one polygon
feature.  Because neighboring quads share their (jittered) corner points,
the level tiles the study area exactly: no gaps, no overlaps, so the
division conservation identity holds just as it does for grids.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .graph import Rect

_JITTER = 0.3  # max corner displacement as a fraction of cell size


def jittered_level(
    area: Rect, cell_size: float, seed: int, label: str | None = None
) -> dict:
    """One polygon level as a GeoJSON FeatureCollection dict."""
    if cell_size <= 0:
        raise ValueError("cell_size must be positive")
    rng = np.random.default_rng(seed)
    nx = max(1, int(np.ceil(area.width / cell_size)))
    ny = max(1, int(np.ceil(area.height / cell_size)))
    px = area.xmin + np.arange(nx + 1) * cell_size
    py = area.ymin + np.arange(ny + 1) * cell_size
    gx, gy = np.meshgrid(px, py, indexing="ij")
    dx = rng.uniform(-_JITTER, _JITTER, gx.shape) * cell_size
    dy = rng.uniform(-_JITTER, _JITTER, gy.shape) * cell_size
    # boundary lattice points stay put so the union still covers the area
    dx[0, :] = dx[-1, :] = 0.0
    dy[:, 0] = dy[:, -1] = 0.0
    dx[:, 0] = dx[:, -1] = 0.0
    dy[0, :] = dy[-1, :] = 0.0
    gx = gx + dx
    gy = gy + dy
    level = label or f"poly-{int(cell_size)}"
    features = []
    for i in range(nx):
        for j in range(ny):
            ring = [
                [gx[i, j], gy[i, j]],
                [gx[i + 1, j], gy[i + 1, j]],
                [gx[i + 1, j + 1], gy[i + 1, j + 1]],
                [gx[i, j + 1], gy[i, j + 1]],
                [gx[i, j], gy[i, j]],
            ]
            features.append(
                {
                    "type": "Feature",
                    "properties": {"id": j * nx + i, "level": level},
                    "geometry": {
                        "type": "Polygon",
                        "coordinates": [[[float(x), float(y)] for x, y in ring]],
                    },
                }
            )
    return {"type": "FeatureCollection", "features": features}


def write_levels(
    area: Rect,
    cell_sizes,
    seed: int,
    out_dir,
) -> list[Path]:
    """Write one GeoJSON file per requested level size; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, size in enumerate(cell_sizes):
        fc = jittered_level(area, float(size), seed + k)
        path = out / f"polygons_{int(size)}.geojson"
        with open(path, "w") as fh:
            json.dump(fc, fh)
            fh.write("\n")
        paths.append(path)
    return paths
