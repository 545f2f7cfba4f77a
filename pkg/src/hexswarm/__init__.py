"""Collective learning simulator.

Agents explore a hexagonal arena, gathering noisy evidence about one
location at a time and fusing their three-valued beliefs pairwise when
eligible, until the population reaches a unanimous, fully certain view of
the world or a tick limit expires. Communication is gated by two stacked
networks: a dynamic proximity graph and a static interaction graph.
"""

from .belief import (
    FALSE,
    TRUE,
    UNKNOWN,
    Belief,
    GroundTruth,
    TruthValue,
    belief_error,
    fuse_beliefs,
    fuse_value,
    uncertain_indices,
    update_with_evidence,
)
from .engine import RunRecord, SimConfig, average_error, consensus_reached, initialize, run, tick
from .environment import HexGrid, NoiseModel, build_grid, observe, sample_ground_truth
from .errors import ConfigError
from .experiment import CellSummary, SweepSpec, aggregate, expand, run_sweep
from .network import complete_graph, eligible_edges, physical_edges, ring_lattice

__all__ = [
    "Belief",
    "CellSummary",
    "ConfigError",
    "FALSE",
    "GroundTruth",
    "HexGrid",
    "NoiseModel",
    "RunRecord",
    "SimConfig",
    "SweepSpec",
    "TRUE",
    "TruthValue",
    "UNKNOWN",
    "aggregate",
    "average_error",
    "belief_error",
    "build_grid",
    "complete_graph",
    "consensus_reached",
    "eligible_edges",
    "expand",
    "fuse_beliefs",
    "fuse_value",
    "initialize",
    "observe",
    "physical_edges",
    "ring_lattice",
    "run",
    "run_sweep",
    "sample_ground_truth",
    "tick",
    "uncertain_indices",
    "update_with_evidence",
]
