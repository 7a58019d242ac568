import numpy as np
import pytest

from contactscale.graph import Rect, from_arrays


def make_graph(n, edges, x=None, y=None, area=None, kinds=None):
    """Small-graph helper: positions default to a unit-spaced line."""
    x = np.asarray(x, dtype=np.float64) if x is not None else np.arange(n, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64) if y is not None else np.zeros(n)
    if area is None:
        hi_x = float(x.max()) + 1.0 if n else 1.0
        hi_y = float(y.max()) + 1.0 if n else 1.0
        area = Rect(min(float(x.min()) if n else 0.0, 0.0) - 1.0,
                    min(float(y.min()) if n else 0.0, 0.0) - 1.0, hi_x, hi_y)
    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    if kinds is None:
        kinds = np.ones(len(edges), dtype=np.uint8)
    return from_arrays(
        x, y,
        np.arange(n, dtype=np.int64), np.full(n, -1, dtype=np.int64),
        eu, ev, np.asarray(kinds, dtype=np.uint8), area,
    )


@pytest.fixture(scope="session")
def small_synth():
    """A ~3k-node calibrated synthetic network shared across test modules."""
    from contactscale.synthgen import SynthConfig, generate

    cfg = SynthConfig.scaled(3000, seed=13)
    return generate(cfg, 13)
