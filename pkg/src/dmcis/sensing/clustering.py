"""Nearest-SDCC clustering of sensors."""

from dataclasses import replace
from typing import Iterable

from dmcis.analysis.geometry import distance
from dmcis.core.models import Sdcc, SensorNode, Topology
from dmcis.sensing.collector import ConfigurationError


def assign_clusters(
    sensors: Iterable[SensorNode],
    sdccs: Iterable[Sdcc],
) -> dict[int, int]:
    """Map every sensor to the nearest SDCC of its own region.

    Ties go to the lower SDCC id. Sensors that already carry an
    ``assigned_sdcc`` keep it.

    Raises:
        ConfigurationError: If a sensor's region has no SDCC, or an explicit
            assignment names an SDCC of another region
    """
    by_region: dict[int, list[Sdcc]] = {}
    for sdcc in sdccs:
        by_region.setdefault(sdcc.region, []).append(sdcc)

    assignment: dict[int, int] = {}
    for sensor in sensors:
        candidates = by_region.get(sensor.region)
        if not candidates:
            raise ConfigurationError(f"Region {sensor.region} has no SDCC for sensor {sensor.sensor_id}")
        if sensor.assigned_sdcc is not None:
            if sensor.assigned_sdcc not in {s.sdcc_id for s in candidates}:
                raise ConfigurationError(
                    f"Sensor {sensor.sensor_id} is assigned to SDCC {sensor.assigned_sdcc} "
                    f"outside region {sensor.region}"
                )
            assignment[sensor.sensor_id] = sensor.assigned_sdcc
            continue
        nearest = min(candidates, key=lambda s: (distance(sensor.position, s.position), s.sdcc_id))
        assignment[sensor.sensor_id] = nearest.sdcc_id
    return assignment


def cluster_topology(topology: Topology) -> Topology:
    """Return a topology whose sensors all carry ``assigned_sdcc``."""
    assignment = assign_clusters(topology.iter_sensors(), topology.iter_sdccs())
    regions = tuple(
        replace(
            region,
            sensors=tuple(replace(s, assigned_sdcc=assignment[s.sensor_id]) for s in region.sensors),
        )
        for region in topology.regions
    )
    return replace(topology, regions=regions)
