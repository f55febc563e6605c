"""Hazard, reading and event-batch models."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional


class Modality(Enum):
    """Physical parameter a sensor monitors."""
    ACOUSTIC = "acoustic"
    SEISMIC = "seismic"
    MAGNETIC = "magnetic"
    THERMAL = "thermal"
    WATER_LEVEL = "water-level"


class HazardClass(Enum):
    """Kind of disaster a hazard process or report refers to."""
    FLOOD = "flood"
    TSUNAMI = "tsunami"
    CYCLONE = "cyclone"
    EARTHQUAKE = "earthquake"
    LANDSLIDE = "landslide"
    FLASH_FLOOD = "flash_flood"
    BUILDING_COLLAPSE = "building_collapse"
    TORNADO = "tornado"


# Hint used by an SDCC that does not declare the hazard it watches.
MODALITY_HINTS: dict[Modality, HazardClass] = {
    Modality.WATER_LEVEL: HazardClass.FLOOD,
    Modality.SEISMIC: HazardClass.EARTHQUAKE,
    Modality.ACOUSTIC: HazardClass.TSUNAMI,
    Modality.MAGNETIC: HazardClass.LANDSLIDE,
    Modality.THERMAL: HazardClass.BUILDING_COLLAPSE,
}

DEFAULT_BYPASS_CLASSES: frozenset[HazardClass] = frozenset({
    HazardClass.TORNADO,
    HazardClass.FLASH_FLOOD,
    HazardClass.EARTHQUAKE,
    HazardClass.LANDSLIDE,
    HazardClass.BUILDING_COLLAPSE,
})


@dataclass(frozen=True)
class HazardEvent:
    """A scripted ground-truth hazard process.

    Attributes:
        hazard_id: Stable identifier from the scenario
        hazard_class: Kind of disaster
        onset_time: Simulated second at which the hazard starts
        region: Area id the hazard affects
        magnitude: Unitless severity, reported as the reading value
        footprint: Sensor ids that truly observe the hazard
        duration: Active span in seconds; None keeps it active to the horizon
    """
    hazard_id: int
    hazard_class: HazardClass
    onset_time: float
    region: int
    magnitude: float
    footprint: frozenset[int]
    duration: Optional[float] = None

    def __post_init__(self) -> None:
        if self.magnitude < 0:
            raise ValueError(f"Hazard {self.hazard_id} magnitude must be >= 0")
        if self.onset_time < 0:
            raise ValueError(f"Hazard {self.hazard_id} onset must be >= 0")

    def active_during(self, start: float, end: float) -> bool:
        """Whether the hazard overlaps the half-open window (start, end]."""
        if self.onset_time > end:
            return False
        if self.duration is None:
            return True
        return self.onset_time + self.duration > start

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.hazard_id,
            "class": self.hazard_class.value,
            "onset": self.onset_time,
            "region": self.region,
            "magnitude": self.magnitude,
            "footprint": sorted(self.footprint),
            "duration": self.duration,
        }


@dataclass(frozen=True)
class SensorReading:
    """One observation sent by a sensor to its SDCC.

    ``truthful`` and ``hazard_id`` are ground-truth tags for metrics;
    SDCC logic never reads them.
    """
    sensor_id: int
    timestamp: float
    parameter: Modality
    value: float
    truthful: bool
    hazard_id: Optional[int] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "sensor": self.sensor_id,
            "parameter": self.parameter.value,
            "value": self.value,
            "truthful": self.truthful,
            "hazard": self.hazard_id,
        }


@dataclass(frozen=True)
class EventBatch:
    """Aggregate an SDCC emits once its distinct-sensor count reaches tau."""
    batch_id: int
    sdcc_id: int
    area_id: int
    trigger_time: float
    contributing_sensors: frozenset[int]
    readings: tuple[SensorReading, ...]
    payload_bytes: int
    hazard_class_hint: HazardClass
    window_used: float
    baseline_bytes: int = 0

    def __post_init__(self) -> None:
        if self.payload_bytes <= 0:
            raise ValueError(f"Batch {self.batch_id} payload must be positive")

    @property
    def truthful_hazards(self) -> list[int]:
        """Ground-truth hazard ids behind this batch (metrics only)."""
        return sorted({r.hazard_id for r in self.readings if r.truthful and r.hazard_id is not None})

    @property
    def sensor_values(self) -> dict[int, float]:
        """Mean reading value per contributing sensor."""
        grouped: dict[int, list[float]] = {}
        for reading in self.readings:
            grouped.setdefault(reading.sensor_id, []).append(reading.value)
        return {sid: sum(vals) / len(vals) for sid, vals in sorted(grouped.items())}

    def to_dict(self) -> dict[str, Any]:
        return {
            "batch": self.batch_id,
            "sdcc": self.sdcc_id,
            "area": self.area_id,
            "sensors": sorted(self.contributing_sensors),
            "readings": len(self.readings),
            "bytes": self.payload_bytes,
            "baseline_bytes": self.baseline_bytes,
            "hint": self.hazard_class_hint.value,
            "window": self.window_used,
            "truth": self.truthful_hazards,
        }
