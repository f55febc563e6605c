"""Level one: sensors, clustering and SDCC aggregation."""

from dmcis.sensing.clustering import assign_clusters, cluster_topology
from dmcis.sensing.collector import ConfigurationError, RoutingError, SdccStation
from dmcis.sensing.readings import generate_readings

__all__ = [
    "assign_clusters",
    "cluster_topology",
    "ConfigurationError",
    "RoutingError",
    "SdccStation",
    "generate_readings",
]
