"""SDCC station: sliding-window reading buffer and the tau trigger."""

from collections import Counter, deque
from typing import Iterator, Optional

from dmcis.core.logging import get_logger
from dmcis.core.models import (
    MODALITY_HINTS,
    BaselineRecord,
    EventBatch,
    HazardClass,
    Sdcc,
    SensorReading,
)

logger = get_logger("sensing")

_BOUNDARY_EPS = 1e-9


class ConfigurationError(Exception):
    """Raised when scenario entities are wired inconsistently."""
    pass


class RoutingError(Exception):
    """Raised when a reading reaches an SDCC its sensor is not assigned to."""
    pass


class SdccStation:
    """Engine-owned runtime state of one SDCC.

    The buffer keeps readings whose timestamp lies in (now - window, now].
    A batch is emitted once per contiguous period in which the count of
    distinct sensors in the window is at least tau.

    Attributes:
        sdcc: Static configuration
        assigned: Sensor ids clustered to this SDCC
        reading_bytes: Wire size of one reading
    """

    def __init__(
        self,
        sdcc: Sdcc,
        assigned: set[int],
        reading_bytes: int = 64,
    ) -> None:
        self.sdcc = sdcc
        self.assigned = frozenset(assigned)
        self.reading_bytes = reading_bytes
        self.buffer: deque[SensorReading] = deque()
        self.baseline: list[BaselineRecord] = list(sdcc.baseline)
        self._pending_baseline: list[BaselineRecord] = list(sdcc.baseline)
        self._clock = 0.0
        self._exceeding = False
        self.emitted_snapshot: list[BaselineRecord] = []

    @property
    def sdcc_id(self) -> int:
        return self.sdcc.sdcc_id

    def ingest(self, reading: SensorReading) -> "SdccStation":
        """Append a reading and evict everything outside the window.

        Raises:
            RoutingError: If the sensor is not assigned to this SDCC
        """
        if reading.sensor_id not in self.assigned:
            raise RoutingError(
                f"Sensor {reading.sensor_id} is not assigned to SDCC {self.sdcc_id}"
            )
        self.buffer.append(reading)
        self.evict(max(self._clock, reading.timestamp))
        return self

    def evict(self, now: float) -> None:
        """Drop readings at or before ``now - window``.

        Eviction alone never ends an exceedance: readings stamped at one
        window end are evicted before the next window is ingested.
        """
        self._clock = max(self._clock, now)
        # Float tolerance at the window boundary.
        cutoff = self._clock - self.sdcc.window + _BOUNDARY_EPS
        self.buffer = deque(r for r in self.buffer if r.timestamp > cutoff)

    def distinct_sensors(self) -> frozenset[int]:
        return frozenset(r.sensor_id for r in self.buffer)

    @property
    def exceeding(self) -> bool:
        """True while the last evaluation found at least tau distinct sensors."""
        return self._exceeding

    def evaluate_threshold(
        self,
        now: float,
        batch_ids: Iterator[int],
    ) -> Optional[EventBatch]:
        """Emit a batch if the window holds at least tau distinct sensors.

        Only the first evaluation of a contiguous exceedance emits; the
        period ends when an evaluation after ingest finds fewer than tau
        distinct sensors.
        """
        self.evict(now)
        sensors = self.distinct_sensors()
        if len(sensors) < self.sdcc.tau:
            self._exceeding = False
            return None
        if self._exceeding:
            return None
        self._exceeding = True

        snapshot = self._pending_baseline
        self._pending_baseline = []
        self.emitted_snapshot = snapshot
        baseline_bytes = sum(r.payload_bytes for r in snapshot)
        readings = tuple(self.buffer)
        batch = EventBatch(
            batch_id=next(batch_ids),
            sdcc_id=self.sdcc_id,
            area_id=self.sdcc.region,
            trigger_time=self._clock,
            contributing_sensors=sensors,
            readings=readings,
            payload_bytes=self.reading_bytes * len(readings) + baseline_bytes,
            hazard_class_hint=self._hint(readings),
            window_used=self.sdcc.window,
            baseline_bytes=baseline_bytes,
        )
        logger.debug(
            f"SDCC {self.sdcc_id} triggered batch {batch.batch_id} "
            f"({len(sensors)} sensors >= tau={self.sdcc.tau})"
        )
        return batch

    def ingest_baseline(self, record: BaselineRecord) -> "SdccStation":
        """Store baseline data; it rides along with the next emitted batch.

        Raises:
            ConfigurationError: If the record's area is not the SDCC's region
        """
        if record.area_id != self.sdcc.region:
            raise ConfigurationError(
                f"Baseline for area {record.area_id} cannot be stored at "
                f"SDCC {self.sdcc_id} of area {self.sdcc.region}"
            )
        self.baseline.append(record)
        self._pending_baseline.append(record)
        return self

    @property
    def pending_baseline_bytes(self) -> int:
        return sum(r.payload_bytes for r in self._pending_baseline)

    def _hint(self, readings: tuple[SensorReading, ...]) -> HazardClass:
        if self.sdcc.hazard_class is not None:
            return self.sdcc.hazard_class
        counts = Counter(r.parameter for r in readings)
        # Ties resolve in hint-table order.
        dominant = max(MODALITY_HINTS, key=lambda m: counts.get(m, 0))
        return MODALITY_HINTS[dominant]
