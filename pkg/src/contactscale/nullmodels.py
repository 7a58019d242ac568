"""Reference randomizations of a spatial contact graph.

Two null models:

* ``random_node`` keeps the edge set (hence the whole topology) and shuffles
  the node locations: the location multiset is preserved, who-sits-where is
  randomized.
* ``random_edge`` keeps node locations, the per-node degree sequence, and
  the binned edge-distance histogram, and randomizes the wiring with
  bin-preserving double-edge swaps: two edges (a,b), (c,d) are replaced by
  (a,d), (c,b), accepted only when both proposed edges are new and the pair
  of distance-bin indices is unchanged as a multiset.  Proposals are
  spatially local (d is drawn near b), because uniformly random edge pairs
  almost never satisfy the bin constraint and the chain would not mix
  within any workable attempt budget.

For the bin test, exact-zero edges share the first bin [0, w) with
near-zero edges; freezing them at exactly zero would lock complete
household cliques in place and no rewiring of family edges could happen.

``run_ensemble`` evaluates a metric function over k independently seeded
replicates; replicate seeds come from the splitmix64 stream so results do
not depend on worker scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from ._kernels import build_edge_table, rewire_chunk
from .graph import SpatialGraph
from .seeds import replicate_seed

RANDOM_NODE = "random_node"
RANDOM_EDGE = "random_edge"

_CHUNK = 1 << 18


@dataclass(frozen=True)
class NullModelConfig:
    kind: str = RANDOM_EDGE
    bin_width: float = 50.0
    swap_budget: int | None = None  # accepted swaps; default 10 * |E|
    max_attempts: int | None = None  # proposals; default 100 * |E|
    master_seed: int = 0
    acceptance_floor: float = 0.001  # over the final 10% of attempts

    def __post_init__(self):
        if self.bin_width <= 0:
            raise ValueError("bin_width must be positive")
        if self.swap_budget is not None and self.swap_budget < 0:
            raise ValueError("swap_budget must be non-negative")


@dataclass(frozen=True)
class RewireStats:
    accepted: int
    attempts: int
    tail_acceptance: float
    warning: str | None


@dataclass(frozen=True)
class EnsembleResult:
    replicates: int
    seeds: tuple[int, ...]
    mean: dict[str, float]
    stdev: dict[str, float]
    per_replicate: tuple[Mapping[str, float], ...] = ()


def random_node(g: SpatialGraph, seed: int) -> SpatialGraph:
    """Permute the location multiset over nodes; topology untouched.

    Node i of the output sits at the location node ``perm[i]`` had in the
    input.  Household tags travel with the node, so co-location of household
    members no longer holds on the output.
    """
    rng = np.random.default_rng(seed)
    perm = rng.permutation(g.n)
    return g.replace(x=g.x[perm].copy(), y=g.y[perm].copy())


def _location_blocks(g: SpatialGraph, cell_size: float):
    """Static location grid: for each cell, the nodes of its 3x3 block.

    Proposal locality for the rewiring chain: candidate replacement nodes
    for an endpoint are drawn from the endpoint's block, so proposed edges
    land in the right distance bin often enough to mix.
    """
    x0 = float(g.x.min())
    y0 = float(g.y.min())
    cx = np.floor((g.x - x0) / cell_size).astype(np.int64)
    cy = np.floor((g.y - y0) / cell_size).astype(np.int64)
    ncx = int(cx.max()) + 1
    ncy = int(cy.max()) + 1
    ncells = ncx * ncy
    node_cell = cy * ncx + cx
    targets = []
    members = []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            tx = cx + dx
            ty = cy + dy
            ok = (tx >= 0) & (tx < ncx) & (ty >= 0) & (ty < ncy)
            targets.append(ty[ok] * ncx + tx[ok])
            members.append(np.flatnonzero(ok))
    targets = np.concatenate(targets)
    members = np.concatenate(members)
    order = np.argsort(targets, kind="stable")
    block_nodes = members[order].astype(np.int64)
    counts = np.bincount(targets, minlength=ncells)
    block_ptr = np.zeros(ncells + 1, dtype=np.int64)
    np.cumsum(counts, out=block_ptr[1:])
    return node_cell, block_ptr, block_nodes


def _incidence_csr(g: SpatialGraph):
    """Mutable per-node incidence lists (edge slot ids) in CSR layout."""
    nodes = np.concatenate([g.edge_u, g.edge_v])
    edges = np.concatenate([np.arange(g.m), np.arange(g.m)]).astype(np.int64)
    order = np.argsort(nodes, kind="stable")
    inc_list = edges[order]
    counts = np.bincount(nodes, minlength=g.n)
    inc_ptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=inc_ptr[1:])
    return inc_ptr, inc_list


def random_edge(
    g: SpatialGraph, cfg: NullModelConfig, seed: int
) -> tuple[SpatialGraph, RewireStats]:
    """Distance-bin-preserving degree-preserving rewiring of a graph.

    Runs until ``swap_budget`` accepted swaps or ``max_attempts`` proposals.
    A tail acceptance rate below the configured floor yields a warning in
    the returned stats (an under-mixed, not failed, rewiring).
    """
    m = g.m
    budget = cfg.swap_budget if cfg.swap_budget is not None else 10 * m
    max_attempts = cfg.max_attempts if cfg.max_attempts is not None else 100 * m
    eu = g.edge_u.copy()
    ev = g.edge_v.copy()
    d = g.edge_lengths()
    ebin = (d / cfg.bin_width).astype(np.int64)
    if m < 2 or budget == 0:
        stats = RewireStats(0, 0, math.nan, None)
        return g.replace(edge_u=eu, edge_v=ev), stats

    capacity = 1 << max(4, int(math.ceil(math.log2(4 * m))))
    keys = build_edge_table(eu * g.n + ev, capacity)
    mask = capacity - 1
    node_cell, block_ptr, block_nodes = _location_blocks(g, cfg.bin_width)
    inc_ptr, inc_list = _incidence_csr(g)
    rng = np.random.default_rng(seed)

    accepted = 0
    attempts = 0
    history: list[tuple[int, int]] = []  # (consumed, accepted) per chunk
    while accepted < budget and attempts < max_attempts:
        chunk = min(_CHUNK, max_attempts - attempts)
        prop_edge = rng.integers(0, m, size=chunk, dtype=np.int64)
        floats = rng.random((3, chunk))
        got, consumed = rewire_chunk(
            eu, ev, ebin, g.x, g.y, cfg.bin_width, g.n,
            keys, mask, node_cell, block_ptr, block_nodes,
            inc_ptr, inc_list,
            prop_edge, floats[0], floats[1], floats[2],
            budget - accepted,
        )
        accepted += got
        attempts += consumed
        history.append((consumed, got))

    tail_target = max(1, attempts // 10)
    tail_att = tail_acc = 0
    for consumed, got in reversed(history):
        tail_att += consumed
        tail_acc += got
        if tail_att >= tail_target:
            break
    tail_rate = tail_acc / tail_att if tail_att else math.nan
    warning = None
    if accepted < budget and tail_rate < cfg.acceptance_floor:
        warning = (
            f"under-mixed rewiring: tail acceptance {tail_rate:.5f} below "
            f"{cfg.acceptance_floor} after {attempts} attempts "
            f"({accepted}/{budget} swaps)"
        )
    out = g.replace(edge_u=eu, edge_v=ev, edge_kind=g.edge_kind.copy())
    return out, RewireStats(accepted, attempts, tail_rate, warning)


def make_replicate(
    g: SpatialGraph, cfg: NullModelConfig, seed: int
) -> tuple[SpatialGraph, RewireStats | None]:
    """One null-model replicate of either kind from an explicit seed."""
    if cfg.kind == RANDOM_NODE:
        return random_node(g, seed), None
    if cfg.kind == RANDOM_EDGE:
        return random_edge(g, cfg, seed)
    raise ValueError(f"unknown null-model kind {cfg.kind!r}")


_WORK_GRAPH: SpatialGraph | None = None
_WORK_CFG: NullModelConfig | None = None
_WORK_FN: Callable | None = None


def _init_worker(g, cfg, fn):
    global _WORK_GRAPH, _WORK_CFG, _WORK_FN
    _WORK_GRAPH = g
    _WORK_CFG = cfg
    _WORK_FN = fn


def _run_replicate(args):
    index, seed = args
    replica, _ = make_replicate(_WORK_GRAPH, _WORK_CFG, seed)
    return index, dict(_WORK_FN(replica))


def run_ensemble(
    g: SpatialGraph,
    cfg: NullModelConfig,
    k: int,
    downstream: Callable[[SpatialGraph], Mapping[str, float]],
    workers: int = 1,
    keep_replicates: bool = False,
) -> EnsembleResult:
    """Replicate-averaged metrics of a null model.

    ``downstream`` maps a replicate graph to a flat name->value mapping; the
    result carries per-metric mean and (population) stdev across replicates.
    Identical (graph, cfg, k) give identical results for any worker count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    seeds = tuple(replicate_seed(cfg.master_seed, i) for i in range(k))
    results: list[Mapping[str, float] | None] = [None] * k
    jobs = list(enumerate(seeds))
    if workers > 1 and k > 1:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(g, cfg, downstream),
        ) as pool:
            for index, vals in pool.map(_run_replicate, jobs, chunksize=1):
                results[index] = vals
    else:
        for index, seed in jobs:
            replica, _ = make_replicate(g, cfg, seed)
            results[index] = dict(downstream(replica))

    names = sorted(results[0])
    mean: dict[str, float] = {}
    stdev: dict[str, float] = {}
    for name in names:
        vals = np.array([r[name] for r in results], dtype=np.float64)
        finite = vals[~np.isnan(vals)]
        if finite.size == 0:
            mean[name] = math.nan
            stdev[name] = math.nan
        else:
            mean[name] = float(finite.mean())
            stdev[name] = float(finite.std())
    return EnsembleResult(
        replicates=k,
        seeds=seeds,
        mean=mean,
        stdev=stdev,
        per_replicate=tuple(results) if keep_replicates else (),
    )
