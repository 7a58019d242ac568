"""Multi-scale structural analysis of spatially embedded contact networks.

The library covers five stages of an analysis run:

* ``graph``      -- the spatial graph data model (nodes with planar
  coordinates, typed undirected edges) plus components and degrees.
* ``metrics``    -- component, clustering, path-length, and edge-distance
  statistics of a graph, with per-scale weighted aggregation.
* ``partition``  -- regular-grid ladders and polygon partitions of the study
  area, node-to-cell assignment, and division of a graph into per-cell unit
  networks plus the boundary-crossing (lost) edges.
* ``nullmodels`` -- the two reference randomizations: location shuffling
  (keeps topology) and distance-bin-preserving edge rewiring (keeps node
  locations, degrees, and the binned edge-distance histogram).
* ``synthgen``   -- calibrated synthetic contact networks built from
  household cliques and distance-decayed workplace cliques.

``pipeline`` orchestrates full experiments across networks, partitions, and
scales, and ``cli`` exposes everything as subcommands.
"""

from .graph import (
    FAMILY,
    COWORKER,
    Rect,
    NodeRecord,
    EdgeRecord,
    SpatialGraph,
    ComponentLabeling,
    GraphValidationError,
    build_graph,
    connected_components,
    degree_sequence,
    edge_distance,
)
from .metrics import (
    MetricRecord,
    DistanceHistogram,
    PathConfig,
    largest_component_share,
    mean_other_component_size,
    node_clustering,
    network_clustering,
    average_path_length,
    relative_path_length,
    edge_distance_histogram,
    loss_histogram,
    aggregate_scale,
    compute_metrics,
)
from .partition import (
    Cell,
    Partition,
    UnitNetwork,
    DivisionResult,
    make_grid,
    grid_ladder,
    load_polygon_partition,
    assign_nodes,
    divide,
)
from .nullmodels import (
    NullModelConfig,
    EnsembleResult,
    random_node,
    random_edge,
    run_ensemble,
)
from .synthgen import SynthConfig, CalibrationReport, generate, validate
from .seeds import splitmix64, replicate_seed
from .pipeline import (
    ExperimentConfig,
    ScaleStats,
    scale_stats,
    run_experiment,
    detect_characteristic_scale,
    emit_plots,
)
from ._version import __version__

__all__ = [
    "FAMILY",
    "COWORKER",
    "Rect",
    "NodeRecord",
    "EdgeRecord",
    "SpatialGraph",
    "ComponentLabeling",
    "GraphValidationError",
    "build_graph",
    "connected_components",
    "degree_sequence",
    "edge_distance",
    "MetricRecord",
    "DistanceHistogram",
    "PathConfig",
    "largest_component_share",
    "mean_other_component_size",
    "node_clustering",
    "network_clustering",
    "average_path_length",
    "relative_path_length",
    "edge_distance_histogram",
    "loss_histogram",
    "aggregate_scale",
    "compute_metrics",
    "Cell",
    "Partition",
    "UnitNetwork",
    "DivisionResult",
    "make_grid",
    "grid_ladder",
    "load_polygon_partition",
    "assign_nodes",
    "divide",
    "NullModelConfig",
    "EnsembleResult",
    "random_node",
    "random_edge",
    "run_ensemble",
    "SynthConfig",
    "CalibrationReport",
    "generate",
    "validate",
    "splitmix64",
    "replicate_seed",
    "ExperimentConfig",
    "ScaleStats",
    "scale_stats",
    "run_experiment",
    "detect_characteristic_scale",
    "emit_plots",
]
