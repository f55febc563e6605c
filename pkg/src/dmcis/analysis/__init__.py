"""Topology analysis: geometry, SDCC-DPC collapse and structural validation."""

from dmcis.analysis.geometry import (
    apply_collapse,
    collapse_pairs,
    distance,
    route_distance,
    route_visits,
)
from dmcis.analysis.levels import LevelSummary, level_summary
from dmcis.analysis.topology_validator import TopologyValidator, validate_topology

__all__ = [
    "apply_collapse",
    "collapse_pairs",
    "distance",
    "route_distance",
    "route_visits",
    "LevelSummary",
    "level_summary",
    "TopologyValidator",
    "validate_topology",
]
