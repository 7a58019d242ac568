import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np
import pytest

from contactscale.graph import Rect
from contactscale.metrics import (
    PathConfig,
    compute_metrics,
    aggregate_scale,
    edge_distance_histogram,
)
from contactscale.partition import divide, make_grid
from contactscale.pipeline import (
    ExperimentConfig,
    detect_characteristic_scale,
    emit_plots,
    network_seed,
    run_experiment,
    scale_stats,
)
from contactscale.polygen import write_levels
from contactscale.synthgen import SynthConfig, generate


@pytest.fixture(scope="module")
def exp_out(tmp_path_factory):
    """One small full experiment shared by the output-shape tests."""
    out = tmp_path_factory.mktemp("exp")
    scfg = SynthConfig.scaled(1500, seed=17)
    g = generate(scfg, 17)
    polys = write_levels(g.study_area, [400], seed=5, out_dir=out / "geo")
    cfg = ExperimentConfig(
        synth=scfg,
        grid_min=200, grid_max=600, grid_step=200,
        polygon_files=(str(polys[0]),),
        replicates=3, master_seed=100, out_dir=str(out / "run"),
    )
    return run_experiment(cfg), cfg


def test_scale_stats_matches_slow_path(small_synth):
    g = small_synth
    p = make_grid(g.study_area, 250.0)
    st = scale_stats(g, p)
    res = divide(g, p)
    recs = [
        (compute_metrics(u.graph, PathConfig()), u.weight) for u in res.units
    ]
    agg = aggregate_scale(recs)
    for name in ("s_rel", "s_other", "cc", "l_rel"):
        assert st.aggregates[name][0] == pytest.approx(agg[name][0], abs=1e-12)
        assert st.aggregates[name][2] == agg[name][2]
    assert st.cells == len(res.units)
    assert st.retained == res.retained_count
    assert st.lost == res.lost_count
    assert st.retained + st.lost == g.m


def test_scale_stats_histogram_conservation(small_synth):
    g = small_synth
    orig = edge_distance_histogram(g)
    st = scale_stats(g, make_grid(g.study_area, 150.0))
    length = max(len(orig.bins), len(st.dist.bins))
    np.testing.assert_allclose(
        st.dist.counts(length) + st.loss.counts(length), orig.counts(length)
    )
    assert st.dist.zero_count + st.loss.zero_count == orig.zero_count
    # zero-distance edges are co-located, hence never lost
    assert st.loss.zero_count == 0


def test_experiment_config_json_roundtrip():
    cfg = ExperimentConfig(
        synth=SynthConfig.scaled(2000),
        polygon_files=("a.geojson",),
        networks=("observed", "random_node"),
        replicates=5,
        study_area=None,
    )
    again = ExperimentConfig.from_json(cfg.to_json())
    assert again == cfg


def test_experiment_config_validation():
    with pytest.raises(ValueError, match="replicate count"):
        ExperimentConfig(replicates=0)
    with pytest.raises(ValueError, match="unknown network kind"):
        ExperimentConfig(networks=("observed", "bogus"))


def test_network_seed_streams_distinct():
    a = network_seed(7, "random_node")
    b = network_seed(7, "random_edge")
    assert a != b
    assert network_seed(8, "random_node") != a


def test_experiment_outputs_exist(exp_out):
    out, cfg = exp_out
    out = Path(out)
    assert (out / "manifest.json").exists()
    for family in ("grid", "polygon"):
        assert (out / f"curves_{family}.csv").exists()
    for kind in ("observed", "random_node", "random_edge"):
        assert (out / f"dist_{kind}_grid-200.csv").exists()
        assert (out / f"loss_{kind}_grid-200.csv").exists()
        assert (out / f"dist_{kind}_original.csv").exists()
    assert list((out / "plots").glob("*.svg"))


def test_experiment_curve_rows_complete(exp_out):
    out, cfg = exp_out
    with open(Path(out) / "curves_grid.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    # 3 networks x 3 scales x 4 metrics
    assert len(rows) == 36
    nets = {r["network"] for r in rows}
    assert nets == {"observed", "random_node", "random_edge"}
    for r in rows:
        assert math.isfinite(float(r["mean"]))
        assert float(r["lost_edges"]) >= 0


def test_manifest_contents(exp_out):
    out, cfg = exp_out
    man = json.loads((Path(out) / "manifest.json").read_text())
    assert man["master_seed"] == cfg.master_seed
    assert man["seed_mix"] == "splitmix64/v1"
    assert len(man["replicate_seeds"]["random_node"]) == cfg.replicates
    assert len(man["replicate_seeds"]["random_edge"]) == cfg.replicates
    roundtrip = ExperimentConfig.from_json(json.dumps(man["config"]))
    assert roundtrip == cfg


def test_null_curves_behave(exp_out):
    out, cfg = exp_out
    by = {}
    with open(Path(out) / "curves_grid.csv", newline="") as fh:
        for r in csv.DictReader(fh):
            by[(r["network"], r["scale_label"], r["metric"])] = float(r["mean"])
    for label in ("grid-200", "grid-400", "grid-600"):
        # location shuffling scatters households, shattering the cells
        assert by[("random_node", label, "s_rel")] < by[("observed", label, "s_rel")]
        # rewiring destroys triangles
        assert by[("random_edge", label, "cc")] < by[("observed", label, "cc")]


def test_experiment_byte_identical_across_workers(tmp_path):
    scfg = SynthConfig.scaled(1200, seed=23)
    base = dict(
        synth=scfg, grid_min=300, grid_max=600, grid_step=300,
        replicates=3, master_seed=9,
    )
    out1 = run_experiment(
        ExperimentConfig(**base, workers=1, out_dir=str(tmp_path / "w1"))
    )
    out2 = run_experiment(
        ExperimentConfig(**base, workers=3, out_dir=str(tmp_path / "w3"))
    )

    def digests(root):
        out = {}
        for p in sorted(Path(root).rglob("*")):
            if p.is_file() and p.name != "manifest.json":  # timings differ
                out[p.relative_to(root)] = hashlib.sha256(
                    p.read_bytes()
                ).hexdigest()
        return out

    assert digests(out1) == digests(out2)


def test_run_experiment_requires_partitions():
    cfg = ExperimentConfig(
        synth=SynthConfig.scaled(1000), grid_min=500, grid_max=100, grid_step=100
    )
    with pytest.warns(UserWarning, match="inverted"):
        with pytest.raises(ValueError, match="no partitions"):
            run_experiment(cfg)


def test_run_experiment_requires_input():
    with pytest.raises(ValueError, match="neither synth nor input files"):
        run_experiment(ExperimentConfig())


def test_detect_characteristic_scale_plateau():
    pts = [(100, 0.1), (200, 0.5), (300, 0.8), (400, 0.88), (500, 0.9)]
    # range 0.8, tol 0.1 -> within 0.08 of 0.9 from 400 on
    assert detect_characteristic_scale(pts) == 400
    # a flat curve plateaus immediately
    flat = [(s, 1.0) for s in (100, 200, 300)]
    assert detect_characteristic_scale(flat) == 100
    with pytest.raises(ValueError):
        detect_characteristic_scale([(1, 1), (2, 2)])


def test_emit_plots_requires_rows(tmp_path):
    (tmp_path / "curves_grid.csv").write_text(
        "network,scale_label,scale_m,cells,metric,mean,stdev,count,lost_edges\n"
    )
    with pytest.raises(ValueError, match="no data rows"):
        emit_plots(tmp_path)


def test_emit_plots_renders_valid_svg(exp_out):
    out, cfg = exp_out
    svgs = list((Path(out) / "plots").glob("*.svg"))
    assert svgs
    import xml.etree.ElementTree as ET

    for p in svgs:
        root = ET.fromstring(p.read_text())
        assert root.tag.endswith("svg")
