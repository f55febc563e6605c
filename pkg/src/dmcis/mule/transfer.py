"""Bundle transfer over ad hoc sessions and direct SDCC-DPC links."""

from typing import Optional

from dmcis.core.logging import get_logger
from dmcis.core.models import (
    AdhocSession,
    BundleStatus,
    DataBundle,
    Dpc,
    MapUnit,
    Sdcc,
    holder_key,
)
from dmcis.mule.mobility import MapMotion

logger = get_logger("mule")


class TransferError(Exception):
    """Raised when a transfer is requested over a link that does not exist."""
    pass


def bytes_per_second(rate_mbps: float) -> float:
    return rate_mbps * 1e6 / 8.0


def transfer_duration(nbytes: float, rate_mbps: float) -> float:
    """Seconds needed to move ``nbytes`` at a nominal rate."""
    if nbytes <= 0:
        return 0.0
    return nbytes * 8.0 / (rate_mbps * 1e6)


def transfer(session: AdhocSession, remaining_bytes: float, dt: float) -> float:
    """Bytes moved during ``dt`` seconds of an open session."""
    if dt < 0:
        raise ValueError("dt must be >= 0")
    return min(remaining_bytes, bytes_per_second(session.rate_mbps) * dt)


class TransferLedger:
    """Partial progress of interrupted transfers.

    Progress is kept per bundle together with the (MAP, endpoint) link it
    was made on. Asking for the bundle over any other link discards it,
    so a transfer resumes only with the same endpoint and otherwise
    restarts from zero.
    """

    def __init__(self) -> None:
        self._progress: dict[int, tuple[str, float]] = {}

    @staticmethod
    def link_key(map_id: int, endpoint: str) -> str:
        return f"{holder_key('map', map_id)}>{endpoint}"

    def sent(self, bundle_id: int, link: str) -> float:
        entry = self._progress.get(bundle_id)
        if entry is None:
            return 0.0
        if entry[0] != link:
            del self._progress[bundle_id]
            logger.debug(f"Bundle {bundle_id}: partial transfer over {entry[0]} discarded")
            return 0.0
        return entry[1]

    def record(self, bundle_id: int, link: str, sent: float) -> None:
        self._progress[bundle_id] = (link, sent)

    def clear(self, bundle_id: int) -> None:
        self._progress.pop(bundle_id, None)

    def __contains__(self, bundle_id: int) -> bool:
        return bundle_id in self._progress


class MapCarrier:
    """Runtime state of one MAP: movement, cargo and the current session.

    Attributes:
        motion: Position state
        cargo: Bundles in custody, in load order
        session: Open session, if any
        contacts: Holder keys of endpoints currently in range
    """

    def __init__(self, motion: MapMotion) -> None:
        self.motion = motion
        self.cargo: list[DataBundle] = []
        self.session: Optional[AdhocSession] = None
        self.contacts: set[str] = set()
        self.reserved = 0

    @property
    def map_unit(self) -> MapUnit:
        return self.motion.map_unit

    @property
    def map_id(self) -> int:
        return self.motion.map_id

    @property
    def key(self) -> str:
        return holder_key("map", self.map_id)

    @property
    def used_bytes(self) -> int:
        return sum(b.total_bytes for b in self.cargo) + self.reserved

    def fits(self, bundle: DataBundle) -> bool:
        return self.used_bytes + bundle.total_bytes <= self.map_unit.buffer_capacity

    def load(self, bundle: DataBundle, now: float) -> None:
        """Take custody of a bundle collected from an SDCC."""
        bundle.hand_over(self.key, now)
        bundle.status = BundleStatus.IN_FLIGHT
        bundle.deferred_reason = None
        self.cargo.append(bundle)

    def unload(self, bundle: DataBundle) -> None:
        self.cargo.remove(bundle)

    def delivery_order(self) -> list[DataBundle]:
        """Cargo in delivery order: urgent bundles first, then load order."""
        return sorted(self.cargo, key=lambda b: not b.urgent)


def direct_transfer(
    sdcc: Sdcc,
    dpc: Dpc,
    bundle: DataBundle,
    now: float,
    efficiency: float = 1.0,
) -> float:
    """Send a bundle straight from an SDCC to its collapsed DPC.

    The bundle moves at the SDCC's link rate with no mobility delay. The
    caller appends the DPC custody entry at the returned arrival time, so
    the chain records no MAP.

    Returns:
        Simulated arrival time at the DPC

    Raises:
        TransferError: If the SDCC is not collapsed with this DPC
    """
    if sdcc.collapsed_with != dpc.dpc_id:
        raise TransferError(
            f"SDCC {sdcc.sdcc_id} and DPC {dpc.dpc_id} are not a collapsed pair"
        )
    bundle.status = BundleStatus.IN_FLIGHT
    return now + transfer_duration(bundle.total_bytes, sdcc.link.rate_mbps * efficiency)
