"""Level two: MAP data mules and ad hoc links."""

from dmcis.mule.contact import Blocked, ChannelPool, detect_contact, form_session
from dmcis.mule.mobility import MapMotion, step_mobility
from dmcis.mule.transfer import (
    MapCarrier,
    TransferError,
    TransferLedger,
    direct_transfer,
    transfer,
    transfer_duration,
)

__all__ = [
    "Blocked",
    "ChannelPool",
    "detect_contact",
    "form_session",
    "MapMotion",
    "step_mobility",
    "MapCarrier",
    "TransferError",
    "TransferLedger",
    "direct_transfer",
    "transfer",
    "transfer_duration",
]
