"""Event kinds and the (time, sequence)-ordered event queue."""

import heapq
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from dmcis.core.models import MobilityMode, Topology


class SchedulingError(Exception):
    """Raised when an event is scheduled before the current clock."""
    pass


class EventKind(Enum):
    """Every kind of event the simulator schedules or traces.

    Trace-only kinds record what happened; the remaining kinds drive the
    scheduler and never appear as trace lines.
    """
    # trace records
    RUN = "run"
    HAZARD = "hazard"
    READING = "reading"
    EXCEEDANCE = "exceedance"
    TRIGGER = "trigger"
    BUNDLE = "bundle"
    CONTACT = "contact"
    SESSION = "session"
    BLOCKED = "blocked"
    TRANSFER = "transfer"
    CUSTODY = "custody"
    DEFERRED = "deferred"
    DELIVERY = "delivery"
    HANDOFF = "handoff"
    QUEUE = "queue"
    PROCESS = "process"
    VERDICT = "verdict"
    REPROCESS = "reprocess"
    REPLICATE = "replicate"
    FORWARD = "forward"
    MATCH = "match"
    ARCHIVE = "archive"
    REQUEST = "request"
    WARNING = "warning"
    SMS = "sms"
    DISPATCH = "dispatch"
    END = "end"
    # scheduler
    WINDOW = "window"
    MOBILITY = "mobility"
    TRANSFER_DONE = "transfer_done"
    DIRECT_ARRIVAL = "direct_arrival"
    DPC_ARRIVAL = "dpc_arrival"
    DPC_DONE = "dpc_done"
    REPLICA = "replica"
    CDC_ARRIVAL = "cdc_arrival"
    DCC_REQUEST = "dcc_request"
    BYPASS = "bypass"


# Everything that follows a bundle once it exists: sessions, custody,
# processing and the decision level, plus the conservation totals.
BUNDLE_FLOW_KINDS: frozenset[str] = frozenset({
    "session", "blocked", "transfer", "custody", "deferred", "delivery",
    "handoff", "queue", "process", "verdict", "reprocess", "replicate",
    "forward", "match", "archive", "request", "warning", "sms", "dispatch",
    "end",
})

# False-report draws change which readings exist, hence which windows
# exceed tau and which bundles are created. Contacts depend on positions only.
SENSOR_DRAW_KINDS: frozenset[str] = frozenset(
    {"reading", "exceedance", "trigger", "bundle"} | BUNDLE_FLOW_KINDS
)

# Random-waypoint targets change contacts and therefore every session;
# readings and bundle creation are unaffected.
MOBILITY_DRAW_KINDS: frozenset[str] = frozenset({"contact"} | BUNDLE_FLOW_KINDS)

# Upper bound over any scenario; run and hazard records never depend on the seed.
STOCHASTIC_KINDS: frozenset[str] = SENSOR_DRAW_KINDS | MOBILITY_DRAW_KINDS


def stochastic_kinds(topology: Topology) -> frozenset[str]:
    """Trace kinds whose content can change with the seed for this topology.

    Sensors with a zero false-report probability still draw, but the draw
    can never produce a reading; patrol MAPs never draw.
    """
    kinds: set[str] = set()
    if any(s.live and s.false_report_prob > 0 for s in topology.iter_sensors()):
        kinds |= SENSOR_DRAW_KINDS
    if any(m.mobility is MobilityMode.RANDOM_WAYPOINT for m in topology.iter_maps()):
        kinds |= MOBILITY_DRAW_KINDS
    return frozenset(kinds)


@dataclass(order=True)
class SimEvent:
    """A scheduled event; ordered by time, then insertion sequence."""
    time: float
    sequence: int
    kind: EventKind = field(compare=False)
    payload: dict[str, Any] = field(default_factory=dict, compare=False)


class EventQueue:
    """Min-heap of SimEvents with a monotone clock.

    Example:
        >>> q = EventQueue()
        >>> _ = q.schedule(5.0, EventKind.WINDOW, {"name": "A"})
        >>> _ = q.schedule(5.0, EventKind.WINDOW, {"name": "B"})
        >>> q.pop().payload["name"]
        'A'
    """

    def __init__(self) -> None:
        self._heap: list[SimEvent] = []
        self._sequence = itertools.count()
        self.now = 0.0

    def schedule(
        self,
        time: float,
        kind: EventKind,
        payload: Optional[dict[str, Any]] = None,
    ) -> SimEvent:
        """Enqueue an event.

        Raises:
            SchedulingError: If ``time`` lies before the current clock
        """
        if time < self.now:
            raise SchedulingError(
                f"Cannot schedule {kind.value} at t={time} before the clock (t={self.now})"
            )
        event = SimEvent(time, next(self._sequence), kind, payload or {})
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> SimEvent:
        event = heapq.heappop(self._heap)
        self.now = event.time
        return event

    def peek_time(self) -> Optional[float]:
        return self._heap[0].time if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
