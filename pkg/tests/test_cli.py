import csv
import json
from pathlib import Path

import pytest

from contactscale.cli import (
    EXIT_INTERNAL,
    EXIT_INVALID,
    EXIT_IO,
    EXIT_OK,
    main,
)
from contactscale.graph import read_graph_csv, Rect
from contactscale.synthgen import SynthConfig


@pytest.fixture(scope="module")
def network_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("net")
    cfg = SynthConfig.scaled(1500, seed=4)
    (out / "synth.json").write_text(cfg.to_json())
    code = main(
        [
            "generate", "--config", str(out / "synth.json"), "--seed", "4",
            "--out", str(out), "--skip-validation",
        ]
    )
    assert code == EXIT_OK
    area = ",".join(str(v) for v in cfg.area.as_tuple())
    return out, area, cfg


def graph_args(network_dir):
    out, area, _ = network_dir
    return [
        "--nodes", str(out / "network_nodes.csv"),
        "--edges", str(out / "network_edges.csv"),
        "--area", area,
    ]


def test_generate_writes_csvs(network_dir):
    out, _, _ = network_dir
    assert (out / "network_nodes.csv").exists()
    assert (out / "network_edges.csv").exists()


def test_metrics_json(network_dir, capsys):
    code = main(["metrics", *graph_args(network_dir), "--no-paths"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 1500
    assert payload["l_rel"] is None
    assert 0 < payload["s_rel"] <= 1
    assert 0 < payload["zero_distance_fraction"] < 1


def test_shuffle_nodes(network_dir, tmp_path):
    out, area, cfg = network_dir
    code = main(
        ["shuffle-nodes", *graph_args(network_dir), "--seed", "3",
         "--out", str(tmp_path)]
    )
    assert code == EXIT_OK
    h = read_graph_csv(
        tmp_path / "shuffled_nodes.csv", tmp_path / "shuffled_edges.csv",
        cfg.area,
    )
    g = read_graph_csv(
        out / "network_nodes.csv", out / "network_edges.csv", cfg.area
    )
    assert sorted(zip(h.x, h.y)) == sorted(zip(g.x, g.y))
    assert set(zip(h.edge_u, h.edge_v)) == set(zip(g.edge_u, g.edge_v))


def test_rewire(network_dir, tmp_path, capsys):
    code = main(
        ["rewire", *graph_args(network_dir), "--seed", "3",
         "--out", str(tmp_path)]
    )
    assert code == EXIT_OK
    assert "accepted" in capsys.readouterr().out
    assert (tmp_path / "rewired_edges.csv").exists()


def test_divide_grid(network_dir, tmp_path, capsys):
    code = main(
        ["divide", *graph_args(network_dir), "--cell-size", "200",
         "--out", str(tmp_path)]
    )
    assert code == EXIT_OK
    msg = capsys.readouterr().out
    assert "unit networks" in msg and "lost" in msg
    assert list(tmp_path.glob("unit_*_nodes.csv"))


def test_experiment_and_plot(network_dir, tmp_path):
    _, _, scfg = network_dir
    cfg_path = tmp_path / "exp.json"
    from contactscale.pipeline import ExperimentConfig

    cfg = ExperimentConfig(
        synth=scfg, grid_min=300, grid_max=600, grid_step=300, replicates=2
    )
    cfg_path.write_text(cfg.to_json())
    out = tmp_path / "run"
    code = main(
        ["experiment", "--config", str(cfg_path), "--seed", "1",
         "--out", str(out), "--workers", "1"]
    )
    assert code == EXIT_OK
    assert (out / "manifest.json").exists()
    code = main(["plot", "--out", str(out)])
    assert code == EXIT_OK
    assert list((out / "plots").glob("*.svg"))


def test_plot_without_curves_is_io_error(tmp_path, capsys):
    code = main(["plot", "--out", str(tmp_path)])
    assert code == EXIT_IO
    assert "curves" in capsys.readouterr().err


def test_missing_file_is_io_error(network_dir, capsys):
    out, area, _ = network_dir
    code = main(
        ["metrics", "--nodes", str(out / "missing.csv"),
         "--edges", str(out / "network_edges.csv"), "--area", area]
    )
    assert code == EXIT_IO


def test_bad_area_is_invalid(network_dir, capsys):
    out, _, _ = network_dir
    code = main(
        ["metrics", "--nodes", str(out / "network_nodes.csv"),
         "--edges", str(out / "network_edges.csv"), "--area", "1,2,3"]
    )
    assert code == EXIT_INVALID


def test_unknown_subcommand_is_invalid():
    assert main(["frobnicate"]) == EXIT_INVALID


def test_corrupt_edge_csv_is_invalid(network_dir, tmp_path, capsys):
    out, area, _ = network_dir
    bad = tmp_path / "bad_edges.csv"
    bad.write_text("u,v,kind\n0,0,family\n")
    code = main(
        ["metrics", "--nodes", str(out / "network_nodes.csv"),
         "--edges", str(bad), "--area", area]
    )
    assert code == EXIT_INVALID
    assert "self-loop" in capsys.readouterr().err
