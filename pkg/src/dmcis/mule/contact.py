"""Contact detection and channel-limited ad hoc session formation."""

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

from dmcis.analysis.geometry import distance
from dmcis.core.logging import get_logger
from dmcis.core.models import AdhocSession, Direction, GeoPoint, LinkSpec
from dmcis.mule.mobility import MapMotion

logger = get_logger("mule")


def detect_contact(motion: MapMotion, target: GeoPoint) -> bool:
    """Whether the MAP is within contact range of a fixed node (inclusive)."""
    return distance(motion.position, target) <= motion.map_unit.contact_range


@dataclass(frozen=True)
class Blocked:
    """Session request refused because every channel at the endpoint is busy.

    Attributes:
        map_id: MAP left waiting in contact
        endpoint: Holder key of the saturated endpoint
        active: Sessions open at the endpoint when the request was made
        position: 0-based place of the MAP in the endpoint's wait queue
    """
    map_id: int
    endpoint: str
    active: int
    position: int


class ChannelPool:
    """Non-overlapping channels of one SDCC or DPC.

    Channels are numbered from 1. Allocation always takes the lowest free
    channel and MAPs that find the pool saturated wait in FIFO order.
    """

    def __init__(self, endpoint: str, link: LinkSpec) -> None:
        self.endpoint = endpoint
        self.link = link
        self.capacity = link.channels
        self._in_use: dict[int, int] = {}
        self.waiting: deque[int] = deque()
        self.peak = 0

    @property
    def active(self) -> int:
        return len(self._in_use)

    def acquire(self, map_id: int) -> Optional[int]:
        for channel in range(1, self.capacity + 1):
            if channel not in self._in_use:
                self._in_use[channel] = map_id
                self.peak = max(self.peak, self.active)
                return channel
        return None

    def release(self, channel: int) -> None:
        self._in_use.pop(channel, None)

    def enqueue(self, map_id: int) -> bool:
        """Add a MAP to the wait queue; False if it is already waiting."""
        if map_id in self.waiting:
            return False
        self.waiting.append(map_id)
        return True

    def leave(self, map_id: int) -> None:
        if map_id in self.waiting:
            self.waiting.remove(map_id)

    def next_waiting(self) -> Optional[int]:
        return self.waiting[0] if self.waiting else None


def form_session(
    motion: MapMotion,
    pool: ChannelPool,
    direction: Direction,
    now: float,
    efficiency: float = 1.0,
) -> Union[AdhocSession, Blocked]:
    """Open a session between a MAP in contact and an endpoint.

    The rate is the slower of the two transceivers, scaled by the link
    efficiency. A MAP may not jump ahead of MAPs already waiting.

    Args:
        motion: The MAP, already in contact with the endpoint
        pool: Channel pool of the endpoint
        direction: COLLECT at an SDCC, DELIVER at a DPC
        now: Current simulated time
        efficiency: Fraction of the nominal rate achieved

    Returns:
        The opened session, or Blocked if no channel is free
    """
    map_id = motion.map_id
    head = pool.next_waiting()
    channel = None
    if head is None or head == map_id:
        channel = pool.acquire(map_id)

    if channel is None:
        pool.enqueue(map_id)
        return Blocked(
            map_id=map_id,
            endpoint=pool.endpoint,
            active=pool.active,
            position=list(pool.waiting).index(map_id),
        )

    pool.leave(map_id)
    rate = min(motion.map_unit.link.rate_mbps, pool.link.rate_mbps) * efficiency
    logger.debug(f"MAP {map_id} opened {direction.value} session on {pool.endpoint} ch{channel}")
    return AdhocSession(
        map_id=map_id,
        endpoint=pool.endpoint,
        direction=direction,
        channel=channel,
        start_time=now,
        rate_mbps=rate,
    )
