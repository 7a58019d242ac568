import json

import numpy as np
import pytest

from contactscale.graph import Rect
from contactscale.partition import (
    PartitionError,
    UNASSIGNED,
    assign_nodes,
    clip_polygon_rect,
    divide,
    grid_ladder,
    load_polygon_partition,
    make_grid,
    points_in_polygon,
    polygon_area,
    validate_ring,
)
from contactscale.polygen import jittered_level, write_levels
from conftest import make_graph

AREA = Rect(0.0, 0.0, 1000.0, 600.0)


def test_polygon_area_square_and_triangle():
    sq = np.array([[0, 0], [2, 0], [2, 2], [0, 2], [0, 0]])
    assert polygon_area(sq) == 4.0
    tri = np.array([[0, 0], [4, 0], [0, 3]])  # open ring also accepted
    assert polygon_area(tri) == 6.0


def test_clip_polygon_overlap_area():
    sq = np.array([[-1, -1], [3, -1], [3, 3], [-1, 3], [-1, -1]], dtype=float)
    clipped = clip_polygon_rect(sq, Rect(0, 0, 2, 2))
    assert polygon_area(clipped) == pytest.approx(4.0)
    outside = clip_polygon_rect(sq + 100.0, Rect(0, 0, 2, 2))
    assert outside.shape[0] == 0


def test_validate_ring_rejects_open_and_bowtie():
    with pytest.raises(PartitionError, match="not closed"):
        validate_ring(np.array([[0, 0], [1, 0], [1, 1], [0, 1]]), "r")
    bowtie = np.array([[0, 0], [1, 1], [1, 0], [0, 1], [0, 0]], dtype=float)
    with pytest.raises(PartitionError, match="self-intersecting"):
        validate_ring(bowtie, "r")


def test_points_in_polygon_basic():
    ring = np.array([[0, 0], [4, 0], [4, 4], [0, 4]], dtype=float)
    x = np.array([2.0, 5.0, -1.0, 2.0])
    y = np.array([2.0, 2.0, 2.0, 10.0])
    np.testing.assert_array_equal(
        points_in_polygon(x, y, ring), [True, False, False, False]
    )


def test_make_grid_layout_and_coverage():
    p = make_grid(AREA, 400.0)
    # 3 x 2 grid; rightmost and top cells overhang
    assert p.n_cells == 6
    assert p.cells[0].geometry == Rect(0, 0, 400, 400)
    assert p.cells[0].coverage == 1.0
    # cell 2 overhangs in x: only 200 of 400 m inside
    assert p.cells[2].coverage == pytest.approx(0.5)
    # top-right corner cell overhangs both ways
    assert p.cells[5].coverage == pytest.approx(0.5 * 0.5)


def test_make_grid_single_cell_warns():
    with pytest.warns(UserWarning, match="single cell"):
        make_grid(AREA, 5000.0)


def test_grid_ladder_sizes():
    ladder = grid_ladder(AREA, 100, 500, 100)
    assert [p.nominal_size for p in ladder] == [100, 200, 300, 400, 500]
    assert [p.scale_label for p in ladder][0] == "grid-100"


def test_grid_ladder_inverted_range_warns():
    with pytest.warns(UserWarning, match="inverted"):
        assert grid_ladder(AREA, 500, 100, 100) == []


def test_assign_nodes_half_open_membership():
    g = make_graph(
        4, [],
        x=[0.0, 399.9999, 400.0, 999.0],
        y=[0.0, 0.0, 0.0, 599.0],
        area=AREA,
    )
    p = make_grid(AREA, 400.0)
    np.testing.assert_array_equal(assign_nodes(g, p), [0, 0, 1, 5])


def test_assign_nodes_outside_area_unassigned():
    # boundary cells overhang the area, so the second point must clear the
    # last row entirely (rows reach y=800 for a 400 m grid on a 600 m area)
    g = make_graph(2, [], x=[-5.0, 500.0], y=[10.0, 900.0], area=AREA)
    p = make_grid(AREA, 400.0)
    assert list(assign_nodes(g, p)) == [UNASSIGNED, UNASSIGNED]


def test_divide_conservation_and_relabeling():
    #  0-1 same cell, 1-2 crosses, 2-3 same cell
    g = make_graph(
        4, [(0, 1), (1, 2), (2, 3)],
        x=[10.0, 20.0, 450.0, 460.0],
        y=[10.0, 20.0, 10.0, 20.0],
        area=AREA,
    )
    res = divide(g, make_grid(AREA, 400.0))
    assert res.retained_count == 2
    assert res.lost_count == 1
    assert res.retained_count + res.lost_count == g.m
    assert [tuple(e[:2]) for e in res.lost_edges] == [(1, 2)]
    assert len(res.units) == 2
    unit0 = res.units[0]
    assert unit0.graph.n == 2 and unit0.graph.m == 1
    assert list(unit0.graph.edge_u) == [0]  # densely relabeled


def test_divide_keeps_zero_distance_edges():
    # co-located pair sits in exactly one cell, so its edge cannot cross
    g = make_graph(
        2, [(0, 1)], x=[100.0, 100.0], y=[100.0, 100.0], area=AREA
    )
    for size in (50.0, 130.0, 400.0):
        res = divide(g, make_grid(AREA, size))
        assert res.lost_count == 0


def _square_feature(cid, x0, y0, s, level="test"):
    ring = [[x0, y0], [x0 + s, y0], [x0 + s, y0 + s], [x0, y0 + s], [x0, y0]]
    return {
        "type": "Feature",
        "properties": {"id": cid, "level": level},
        "geometry": {"type": "Polygon", "coordinates": [ring]},
    }


def test_load_polygon_partition(tmp_path):
    doc = {
        "type": "FeatureCollection",
        "features": [
            _square_feature(0, 0, 0, 500),
            _square_feature(1, 500, 0, 500),
            _square_feature(2, 5000, 5000, 500),  # fully outside: skipped
        ],
    }
    path = tmp_path / "p.geojson"
    path.write_text(json.dumps(doc))
    p = load_polygon_partition(path, AREA)
    assert p.scale_label == "test"
    assert [c.id for c in p.cells] == [0, 1]
    assert p.cells[0].coverage == pytest.approx(1.0)


def test_load_polygon_partition_rejects_holes():
    outer = [[0, 0], [10, 0], [10, 10], [0, 10], [0, 0]]
    inner = [[4, 4], [6, 4], [6, 6], [4, 6], [4, 4]]
    doc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"id": 0, "level": "x"},
                "geometry": {"type": "Polygon", "coordinates": [outer, inner]},
            }
        ],
    }
    with pytest.raises(PartitionError, match="holes"):
        load_polygon_partition(doc, AREA)


def test_polygon_assignment_tie_goes_to_lowest_id():
    doc = {
        "type": "FeatureCollection",
        "features": [
            _square_feature(1, 0, 0, 500),
            _square_feature(0, 0, 0, 500),  # same square, lower id
        ],
    }
    p = load_polygon_partition(doc, AREA)
    g = make_graph(1, [], x=[100.0], y=[100.0], area=AREA)
    assert assign_nodes(g, p)[0] == 0


def test_jittered_levels_tile_the_area(tmp_path, small_synth):
    g = small_synth
    paths = write_levels(g.study_area, [200], seed=3, out_dir=tmp_path)
    p = load_polygon_partition(paths[0], g.study_area)
    cells = assign_nodes(g, p)
    # gap-free tiling: every node inside the area lands in some cell
    assert (cells != UNASSIGNED).all()
    res = divide(g, p)
    assert res.retained_count + res.lost_count == g.m


def test_jittered_level_is_valid_geojson():
    fc = jittered_level(AREA, 300.0, seed=1)
    assert fc["type"] == "FeatureCollection"
    ids = [f["properties"]["id"] for f in fc["features"]]
    assert len(set(ids)) == len(ids)
    for f in fc["features"]:
        ring = np.asarray(f["geometry"]["coordinates"][0])
        validate_ring(ring, f["properties"]["id"])  # closed and simple
