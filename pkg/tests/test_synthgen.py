import numpy as np
import pytest

from contactscale.graph import COWORKER, FAMILY, NO_WORKPLACE, Rect
from contactscale.synthgen import (
    CalibrationReport,
    SynthConfig,
    generate,
    generate_with_info,
    validate,
)


def test_config_validation():
    with pytest.raises(ValueError, match="probability vector"):
        SynthConfig(household_size_pmf=(0.5, 0.6))
    with pytest.raises(ValueError):
        SynthConfig(employment_rate=1.5)
    with pytest.raises(ValueError):
        SynthConfig(decay_scale=0.0)


def test_config_json_roundtrip():
    cfg = SynthConfig.scaled(5000, decay_scale=120.0, seed=9)
    again = SynthConfig.from_json(cfg.to_json())
    assert again == cfg


def test_scaled_keeps_density():
    base = SynthConfig()
    small = SynthConfig.scaled(base.n_individuals // 4)
    base_density = base.n_individuals / base.area.area
    small_density = small.n_individuals / small.area.area
    assert small_density == pytest.approx(base_density, rel=1e-9)


def test_generate_deterministic():
    cfg = SynthConfig.scaled(1200, seed=6)
    a = generate(cfg, 6)
    b = generate(cfg, 6)
    assert np.array_equal(a.x, b.x)
    assert np.array_equal(a.edge_u, b.edge_u)
    c = generate(cfg, 7)
    assert not np.array_equal(a.x, c.x)


def test_population_and_structure(small_synth):
    g = small_synth
    assert g.n == 3000
    # family edges are zero-distance clique edges within a household
    fam = g.edge_kind == FAMILY
    assert fam.any()
    d = g.edge_lengths()
    assert (d[fam] == 0.0).all()
    assert (g.household[g.edge_u[fam]] == g.household[g.edge_v[fam]]).all()
    # coworker edges join distinct households at the same workplace
    cow = g.edge_kind == COWORKER
    assert (
        g.workplace[g.edge_u[cow]] == g.workplace[g.edge_v[cow]]
    ).all()
    assert (g.workplace[g.edge_u[cow]] != NO_WORKPLACE).all()


def test_household_cliques_complete(small_synth):
    g = small_synth
    hh, counts = np.unique(g.household, return_counts=True)
    fam_per_hh = np.zeros(hh.max() + 1, dtype=int)
    fam = g.edge_kind == FAMILY
    np.add.at(fam_per_hh, g.household[g.edge_u[fam]], 1)
    expect = counts * (counts - 1) // 2
    np.testing.assert_array_equal(fam_per_hh[hh], expect)


def test_nodes_inside_area(small_synth):
    g = small_synth
    a = g.study_area
    assert (g.x >= a.xmin).all() and (g.x <= a.xmax).all()
    assert (g.y >= a.ymin).all() and (g.y <= a.ymax).all()


def test_generate_with_info(small_synth):
    cfg = SynthConfig.scaled(3000, seed=13)
    g, info = generate_with_info(cfg, 13)
    assert info["households"] == int(g.household.max()) + 1
    assert info["employed"] >= (g.workplace != NO_WORKPLACE).sum()
    assert info["unplaced_workers"] == 0


def test_min_household_spacing_enforced():
    cfg = SynthConfig.scaled(
        2000, min_household_spacing=60.0,
        area=Rect(0, 0, 4000, 3000), residential_cluster_count=6,
    )
    g = generate(cfg, 2)
    hx = np.array([g.x[g.household == h][0] for h in range(g.household.max() + 1)])
    hy = np.array([g.y[g.household == h][0] for h in range(g.household.max() + 1)])
    d2 = (hx[:, None] - hx) ** 2 + (hy[:, None] - hy) ** 2
    np.fill_diagonal(d2, np.inf)
    assert d2.min() >= 60.0**2 - 1e-6


def test_validate_report_roundtrip(small_synth):
    report = validate(small_synth)
    assert isinstance(report, CalibrationReport)
    assert {ln.name for ln in report.lines} == {
        "mean_degree", "mean_edge_distance", "zero_distance_fraction",
        "cc", "coworker_under_800m",
    }
    text = str(report)
    assert "mean_degree" in text and ("PASS" in text or "FAIL" in text)
    line = report.line("mean_degree")
    assert line.achieved == pytest.approx(2 * small_synth.m / small_synth.n)
    with pytest.raises(KeyError):
        report.line("nope")


def test_validate_modes():
    g = generate(SynthConfig.scaled(1500, seed=4), 4)
    targets = {
        "mean_degree": (1.0, 0.01, "rel"),  # designed to fail
        "cc": (0.0, 0.0, "min"),  # always passes
    }
    report = validate(g, targets)
    assert not report.line("mean_degree").passed
    assert report.line("cc").passed
    assert not report.passed
    with pytest.raises(ValueError, match="unknown tolerance mode"):
        validate(g, {"cc": (0.0, 0.0, "weird")})


def test_new_field_validation():
    with pytest.raises(ValueError, match="long_range_fraction"):
        SynthConfig(long_range_fraction=1.2)
    with pytest.raises(ValueError, match="long_range_scale"):
        SynthConfig(long_range_scale=0.0)
    with pytest.raises(ValueError, match="linear_settlement_fraction"):
        SynthConfig(linear_settlement_fraction=-0.1)


def test_geometry_options_roundtrip_and_bounds():
    cfg = SynthConfig.scaled(
        3000,
        seed=5,
        cluster_grid=True,
        cluster_tail_exponent=1.2,
        linear_settlement_fraction=0.15,
        settlement_line_count=8,
        commute_radius=250.0,
    )
    assert SynthConfig.from_json(cfg.to_json()) == cfg
    g = generate(cfg, 5)
    a = g.study_area
    assert (g.x >= a.xmin).all() and (g.x <= a.xmax).all()
    assert (g.y >= a.ymin).all() and (g.y <= a.ymax).all()
    # same config, same seed: geometry options stay deterministic
    h = generate(cfg, 5)
    assert np.array_equal(g.x, h.x) and np.array_equal(g.edge_u, h.edge_u)
