import numpy as np
import pytest

from contactscale.graph import (
    COWORKER,
    FAMILY,
    GraphValidationError,
    NodeRecord,
    Rect,
    build_graph,
    connected_components,
    degree_sequence,
    edge_distance,
    from_arrays,
    read_graph_csv,
    write_edges_csv,
    write_nodes_csv,
)
from conftest import make_graph
import oracle


def test_rect_properties():
    r = Rect(1.0, 2.0, 5.0, 10.0)
    assert r.width == 4.0
    assert r.height == 8.0
    assert r.area == 32.0
    assert r.as_tuple() == (1.0, 2.0, 5.0, 10.0)


def test_rect_rejects_degenerate():
    with pytest.raises(GraphValidationError):
        Rect(0, 0, 0, 5)
    with pytest.raises(GraphValidationError):
        Rect(0, 5, 3, 5)


def test_edges_canonicalized():
    g = make_graph(4, [(2, 0), (3, 1)])
    assert (g.edge_u < g.edge_v).all()
    assert list(g.edge_u) == [0, 1]
    assert list(g.edge_v) == [2, 3]


def test_self_loop_rejected_with_edge_named():
    with pytest.raises(GraphValidationError, match="self-loop at node 2"):
        make_graph(4, [(0, 1), (2, 2)])


def test_duplicate_after_canonicalization_rejected():
    with pytest.raises(GraphValidationError, match=r"duplicate edge.*\(1,3\)"):
        make_graph(5, [(1, 3), (3, 1)])


def test_dangling_endpoint_rejected():
    with pytest.raises(GraphValidationError, match="dangling"):
        make_graph(3, [(0, 5)])


def test_build_graph_roundtrip_records():
    nodes = [
        NodeRecord(0, 0.0, 0.0, 7, None),
        NodeRecord(1, 3.0, 4.0, 7, 2),
        NodeRecord(2, 1.0, 1.0, 8, 2),
    ]
    g = build_graph(nodes, [(0, 1, FAMILY), (1, 2, "coworker")], (0, 0, 10, 10))
    assert g.n == 3 and g.m == 2
    assert g.nodes() == nodes
    assert [e.kind for e in g.edges()] == [FAMILY, COWORKER]


def test_build_graph_rejects_gapped_ids():
    nodes = [NodeRecord(0, 0, 0, 0), NodeRecord(2, 1, 1, 1)]
    with pytest.raises(GraphValidationError, match="contiguous"):
        build_graph(nodes, [], (0, 0, 2, 2))


def test_degree_sum_is_twice_edges():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n, x, y, edges = oracle.random_graph(rng)
        g = make_graph(n, edges, x=x, y=y)
        assert degree_sequence(g).sum() == 2 * g.m


def test_components_match_oracle():
    rng = np.random.default_rng(1)
    for _ in range(30):
        n, x, y, edges = oracle.random_graph(rng)
        g = make_graph(n, edges, x=x, y=y)
        lab = connected_components(g)
        comps = oracle.components(n, edges)
        assert lab.c == len(comps)
        assert sorted(lab.sizes) == sorted(len(c) for c in comps)
        for comp in comps:
            assert len({int(lab.labels[i]) for i in comp}) == 1


def test_edge_distance():
    g = make_graph(2, [(0, 1)], x=[0.0, 3.0], y=[0.0, 4.0])
    assert edge_distance(g, g.edges()[0]) == 5.0
    assert g.edge_lengths()[0] == 5.0


def test_csv_roundtrip(tmp_path):
    g = make_graph(5, [(0, 1), (2, 4), (1, 3)],
                   x=[0.5, 1.25, 2.0, 3.0, 4.125],
                   y=[0.1, 0.2, 0.3, 0.4, 0.5],
                   kinds=[FAMILY, COWORKER, COWORKER])
    write_nodes_csv(g, tmp_path / "n.csv")
    write_edges_csv(g, tmp_path / "e.csv")
    h = read_graph_csv(tmp_path / "n.csv", tmp_path / "e.csv", g.study_area)
    assert np.array_equal(g.x, h.x)
    assert np.array_equal(g.y, h.y)
    assert np.array_equal(g.edge_u, h.edge_u)
    assert np.array_equal(g.edge_v, h.edge_v)
    assert np.array_equal(g.edge_kind, h.edge_kind)


def test_replace_is_functional():
    g = make_graph(3, [(0, 1)])
    h = g.replace(x=g.x + 1.0)
    assert h.x[0] == g.x[0] + 1.0
    assert h.edge_u is g.edge_u


def test_empty_graph():
    g = make_graph(0, [], x=[], y=[], area=Rect(0, 0, 1, 1))
    assert g.n == 0 and g.m == 0
    lab = connected_components(g)
    assert lab.c == 0
