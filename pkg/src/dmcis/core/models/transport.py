"""Custody-tracked bundles and ad hoc sessions."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from dmcis.core.models.sensing import EventBatch
from dmcis.core.models.topology import BaselineRecord


class BundleStatus(Enum):
    """Where a bundle is; the four states partition all created bundles."""
    BUFFERED = "buffered"
    DEFERRED = "deferred"
    IN_FLIGHT = "in_flight"
    DELIVERED = "delivered"


class Direction(Enum):
    COLLECT = "collect"
    DELIVER = "deliver"


def holder_key(kind: str, entity_id: int) -> str:
    """Trace name of an entity, e.g. ``holder_key("map", 2) == "map:2"``."""
    return f"{kind}:{entity_id}"


@dataclass(frozen=True)
class CustodyEntry:
    holder: str
    time: float

    def to_dict(self) -> dict[str, Any]:
        return {"holder": self.holder, "time": self.time}


@dataclass
class DataBundle:
    """Payload a MAP carries from an SDCC to a DPC.

    Baseline snapshot bytes are already counted in the batch payload, so
    ``total_bytes`` is the sum of batch payloads.
    """
    bundle_id: int
    batches: list[EventBatch]
    baseline_snapshots: list[BaselineRecord] = field(default_factory=list)
    custody: list[CustodyEntry] = field(default_factory=list)
    created_time: float = 0.0
    urgent: bool = False
    status: BundleStatus = BundleStatus.BUFFERED
    deferred_reason: Optional[str] = None

    @property
    def total_bytes(self) -> int:
        return sum(b.payload_bytes for b in self.batches)

    @property
    def holder(self) -> Optional[str]:
        return self.custody[-1].holder if self.custody else None

    @property
    def batch_ids(self) -> tuple[int, ...]:
        return tuple(b.batch_id for b in self.batches)

    def hand_over(self, holder: str, time: float) -> None:
        """Append a custody entry; the bundle has exactly one holder at a time."""
        self.custody.append(CustodyEntry(holder, time))

    def custody_shape(self) -> tuple[str, ...]:
        """Holder kinds in custody order, e.g. ("sdcc", "map", "dpc")."""
        return tuple(entry.holder.split(":", 1)[0] for entry in self.custody)

    def to_dict(self) -> dict[str, Any]:
        return {
            "bundle": self.bundle_id,
            "batches": list(self.batch_ids),
            "bytes": self.total_bytes,
            "baseline": len(self.baseline_snapshots),
            "created": self.created_time,
            "urgent": self.urgent,
            "status": self.status.value,
            "custody": [c.to_dict() for c in self.custody],
        }


@dataclass
class AdhocSession:
    """An open MAP-endpoint session on one channel.

    ``endpoint`` is a holder key such as "sdcc:1" or "dpc:2".
    """
    map_id: int
    endpoint: str
    direction: Direction
    channel: int
    start_time: float
    rate_mbps: float
    bundle_id: Optional[int] = None
    bundle_started: float = 0.0
    token: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "map": self.map_id,
            "endpoint": self.endpoint,
            "direction": self.direction.value,
            "channel": self.channel,
            "rate_mbps": self.rate_mbps,
        }
