"""Level four: CDC matching and DCC response."""

from dmcis.decision.command import (
    INTERNET,
    CommandCenter,
    bypass_emergency,
    disseminate_sms,
    sms_channel,
)
from dmcis.decision.matching import (
    CentralDataCenter,
    ResponseRequest,
    match_reference,
    similarity,
)

__all__ = [
    "INTERNET",
    "CommandCenter",
    "bypass_emergency",
    "disseminate_sms",
    "sms_channel",
    "CentralDataCenter",
    "ResponseRequest",
    "match_reference",
    "similarity",
]
