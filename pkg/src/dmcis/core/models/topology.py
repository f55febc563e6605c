"""Static topology models: sensors, collection centers, mules and data centers.

Everything here is immutable once a scenario is loaded, so a single
Scenario can be shared read-only by concurrently executing runs.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Optional

from dmcis.core.models.geometry import GeoPoint
from dmcis.core.models.reports import DisasterRecord
from dmcis.core.models.sensing import (
    DEFAULT_BYPASS_CLASSES,
    HazardClass,
    HazardEvent,
    Modality,
)


class LinkStandard(Enum):
    """Wi-Fi standard of a wireless transceiver."""
    B = "802.11b"
    G = "802.11g"
    A = "802.11a"


# standard -> (rate Mbps, band GHz, non-overlapping channels)
_LINK_TABLE: dict[LinkStandard, tuple[float, float, int]] = {
    LinkStandard.B: (11.0, 2.4, 3),
    LinkStandard.G: (54.0, 2.4, 3),
    LinkStandard.A: (54.0, 5.0, 12),
}


@dataclass(frozen=True)
class LinkSpec:
    """Nominal radio capabilities; the fields are fixed by the standard."""
    standard: LinkStandard
    rate_mbps: float
    band_ghz: float
    channels: int

    def __post_init__(self) -> None:
        if (self.rate_mbps, self.band_ghz, self.channels) != _LINK_TABLE[self.standard]:
            raise ValueError(f"Inconsistent link parameters for {self.standard.value}")

    @classmethod
    def for_standard(cls, standard: LinkStandard | str) -> "LinkSpec":
        std = standard if isinstance(standard, LinkStandard) else LinkStandard(standard)
        rate, band, channels = _LINK_TABLE[std]
        return cls(standard=std, rate_mbps=rate, band_ghz=band, channels=channels)

    def to_dict(self) -> dict[str, Any]:
        return {
            "standard": self.standard.value,
            "rate_mbps": self.rate_mbps,
            "band_ghz": self.band_ghz,
            "channels": self.channels,
        }


DEFAULT_LINK = LinkSpec.for_standard(LinkStandard.G)


class BaselineCategory(Enum):
    """Kind of pre-disaster baseline data."""
    DEMOGRAPHIC = "demographic"
    HEALTH = "health"
    RESOURCES = "resources"
    INFRASTRUCTURE = "infrastructure"


@dataclass(frozen=True)
class BaselineRecord:
    """Pre-disaster data manually inserted into an SDCC."""
    area_id: int
    category: BaselineCategory
    payload_bytes: int
    description: str = ""

    def __post_init__(self) -> None:
        if self.payload_bytes < 0:
            raise ValueError("Baseline payload_bytes must be >= 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "area": self.area_id,
            "category": self.category.value,
            "bytes": self.payload_bytes,
            "description": self.description,
        }


@dataclass(frozen=True)
class SensorNode:
    """A fixed wireless sensor."""
    sensor_id: int
    region: int
    position: GeoPoint
    modality: Modality = Modality.WATER_LEVEL
    false_report_prob: float = 0.0
    failed: bool = False
    assigned_sdcc: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.false_report_prob <= 1.0:
            raise ValueError(
                f"Sensor {self.sensor_id} false_report_prob must be in [0, 1]"
            )

    @property
    def live(self) -> bool:
        return not self.failed


@dataclass(frozen=True)
class Sdcc:
    """Sensor Data Collection Center: the per-area sink.

    The reading buffer lives in the engine-owned station; this record
    carries the configuration and the baseline loaded with the scenario.
    """
    sdcc_id: int
    region: int
    position: GeoPoint
    tau: int
    window: float
    link: LinkSpec = DEFAULT_LINK
    hazard_class: Optional[HazardClass] = None
    baseline: tuple[BaselineRecord, ...] = ()
    collapsed_with: Optional[int] = None

    def __post_init__(self) -> None:
        if self.tau < 1:
            raise ValueError(f"SDCC {self.sdcc_id} tau must be >= 1")
        if self.window <= 0:
            raise ValueError(f"SDCC {self.sdcc_id} window must be > 0")


class MobilityMode(Enum):
    PATROL = "patrol"
    RANDOM_WAYPOINT = "random_waypoint"


@dataclass(frozen=True)
class MapUnit:
    """Mobile Access Point carried on a vehicle.

    Attributes:
        map_id: Identifier j
        region: Area the MAP serves (MAPs are never shared across areas)
        speed: Meters per second
        route: Patrol waypoints; the loop wraps from last to first
        contact_range: Inclusive ad hoc range in meters
        buffer_capacity: Bytes the MAP can carry
        link: Transceiver standard
        sdccs: SDCCs this MAP collects from
        dpcs: DPCs this MAP delivers to
        mobility: Patrol loop or seeded random waypoint
        bounds: (xmin, ymin, xmax, ymax) for random-waypoint targets
    """
    map_id: int
    region: int
    speed: float
    route: tuple[GeoPoint, ...]
    contact_range: float
    buffer_capacity: int
    link: LinkSpec = DEFAULT_LINK
    sdccs: tuple[int, ...] = ()
    dpcs: tuple[int, ...] = ()
    mobility: MobilityMode = MobilityMode.PATROL
    bounds: Optional[tuple[float, float, float, float]] = None

    def __post_init__(self) -> None:
        if self.speed <= 0:
            raise ValueError(f"MAP {self.map_id} speed must be > 0")
        if not self.route:
            raise ValueError(f"MAP {self.map_id} route must not be empty")
        if self.contact_range < 0:
            raise ValueError(f"MAP {self.map_id} contact_range must be >= 0")
        if self.buffer_capacity < 0:
            raise ValueError(f"MAP {self.map_id} buffer_capacity must be >= 0")

    @property
    def start(self) -> GeoPoint:
        return self.route[0]


@dataclass(frozen=True)
class Dpc:
    """Data Processing Center."""
    dpc_id: int
    region: int
    position: GeoPoint
    confidence_threshold: float = 0.5
    max_reprocess: int = 2
    peers: tuple[int, ...] = ()
    history_db: tuple[DisasterRecord, ...] = ()
    service_time: float = 5.0
    urgent_service_time: Optional[float] = None
    link: LinkSpec = DEFAULT_LINK

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError(f"DPC {self.dpc_id} confidence_threshold must be in [0, 1]")
        if self.max_reprocess < 0:
            raise ValueError(f"DPC {self.dpc_id} max_reprocess must be >= 0")
        if self.service_time < 0:
            raise ValueError(f"DPC {self.dpc_id} service_time must be >= 0")

    def service_time_for(self, hazard_class: HazardClass, urgent: frozenset[HazardClass]) -> float:
        """Seconds to process one batch; sudden-onset classes may be fast-tracked."""
        if self.urgent_service_time is not None and hazard_class in urgent:
            return self.urgent_service_time
        return self.service_time


@dataclass(frozen=True)
class SmsProvider:
    """A mobile operator that relays DCC warnings to its subscribers."""
    name: str
    subscribers: int
    per_message_latency: float = 1.0
    batch_size: int = 10_000
    area_id: Optional[int] = None

    def __post_init__(self) -> None:
        if self.subscribers < 0 or self.batch_size < 1 or self.per_message_latency < 0:
            raise ValueError(f"Invalid SMS provider parameters for '{self.name}'")

    def serves(self, area_id: int) -> bool:
        return self.area_id is None or self.area_id == area_id


@dataclass(frozen=True)
class CdcDcc:
    """Central Data Center and Decision and Command Center configuration."""
    cdc_count: int = 1
    reference_db: tuple[DisasterRecord, ...] = ()
    match_threshold: float = 0.8
    sms_providers: tuple[SmsProvider, ...] = ()
    bypass_classes: frozenset[HazardClass] = DEFAULT_BYPASS_CLASSES
    escalate_unmatched: bool = False
    departments: tuple[str, ...] = ("police", "fire", "medical")

    def __post_init__(self) -> None:
        if self.cdc_count < 1:
            raise ValueError("cdc_count must be >= 1")
        if not 0.0 <= self.match_threshold <= 1.0:
            raise ValueError("match_threshold must be in [0, 1]")


@dataclass(frozen=True)
class Region:
    """All entities of one area a."""
    region_id: int
    sensors: tuple[SensorNode, ...] = ()
    sdccs: tuple[Sdcc, ...] = ()
    maps: tuple[MapUnit, ...] = ()
    dpcs: tuple[Dpc, ...] = ()

    def live_sensors_of(self, sdcc_id: int) -> list[SensorNode]:
        return [s for s in self.sensors if s.assigned_sdcc == sdcc_id and s.live]


@dataclass(frozen=True)
class Topology:
    """The full four-level deployment."""
    regions: tuple[Region, ...]
    cdc_dcc: CdcDcc
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError("delta must be >= 0")

    @property
    def region_ids(self) -> list[int]:
        return [r.region_id for r in self.regions]

    def region(self, region_id: int) -> Region:
        for region in self.regions:
            if region.region_id == region_id:
                return region
        raise KeyError(f"Unknown region {region_id}")

    def iter_sensors(self) -> Iterator[SensorNode]:
        for region in self.regions:
            yield from region.sensors

    def iter_sdccs(self) -> Iterator[Sdcc]:
        for region in self.regions:
            yield from region.sdccs

    def iter_maps(self) -> Iterator[MapUnit]:
        for region in self.regions:
            yield from region.maps

    def iter_dpcs(self) -> Iterator[Dpc]:
        for region in self.regions:
            yield from region.dpcs

    def sdcc(self, sdcc_id: int) -> Sdcc:
        return _lookup(self.iter_sdccs(), "sdcc_id", sdcc_id, "SDCC")

    def dpc(self, dpc_id: int) -> Dpc:
        return _lookup(self.iter_dpcs(), "dpc_id", dpc_id, "DPC")

    def map_unit(self, map_id: int) -> MapUnit:
        return _lookup(self.iter_maps(), "map_id", map_id, "MAP")

    def live_sensor_count(self, sdcc_id: int) -> int:
        return sum(1 for s in self.iter_sensors() if s.assigned_sdcc == sdcc_id and s.live)


def _lookup(items: Iterator[Any], attr: str, key: int, label: str) -> Any:
    for item in items:
        if getattr(item, attr) == key:
            return item
    raise KeyError(f"Unknown {label} {key}")


@dataclass(frozen=True)
class SimulationSettings:
    """Run-wide constants.

    Attributes:
        horizon: Simulated seconds to run
        seed: Default seed when the CLI gives none
        reading_bytes: Wire size of one sensor reading
        mobility_step: Seconds between MAP position updates
        link_efficiency: Fraction of the nominal rate actually achieved
        peer_latency: Inter-DPC latency (replication and load hand-off)
        dpc_cdc_latency: DPC to CDC forwarding latency
        cdc_dcc_latency: CDC to DCC request latency
        bypass_latency: Wireless latency of a MAP/DPC emergency call
        internet_latency: Delay of the internet messaging channel
        merge_lookback: Age limit of peer reports used by reprocess
        severity_scale: Severity that maps to feature value 1.0
    """
    horizon: float = 86_400.0
    seed: int = 0
    reading_bytes: int = 64
    mobility_step: float = 1.0
    link_efficiency: float = 1.0
    peer_latency: float = 1.0
    dpc_cdc_latency: float = 1.0
    cdc_dcc_latency: float = 1.0
    bypass_latency: float = 1.0
    internet_latency: float = 0.0
    merge_lookback: float = 3600.0
    severity_scale: float = 10.0

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.mobility_step <= 0:
            raise ValueError("mobility_step must be > 0")
        if not 0.0 < self.link_efficiency <= 1.0:
            raise ValueError("link_efficiency must be in (0, 1]")
        if self.reading_bytes < 1:
            raise ValueError("reading_bytes must be >= 1")


@dataclass(frozen=True)
class Scenario:
    """A loaded scenario: topology, hazard script and settings."""
    name: str
    topology: Topology
    hazards: tuple[HazardEvent, ...] = ()
    settings: SimulationSettings = field(default_factory=SimulationSettings)
