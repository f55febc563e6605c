"""Domain models package."""

from dmcis.core.models.geometry import GeoPoint
from dmcis.core.models.reports import (
    FEATURE_NAMES,
    DisasterRecord,
    DispatchEvent,
    MatchResult,
    ProcessedReport,
    SmsDelivery,
    Verdict,
    WarningOrder,
)
from dmcis.core.models.sensing import (
    DEFAULT_BYPASS_CLASSES,
    MODALITY_HINTS,
    EventBatch,
    HazardClass,
    HazardEvent,
    Modality,
    SensorReading,
)
from dmcis.core.models.topology import (
    BaselineCategory,
    BaselineRecord,
    CdcDcc,
    Dpc,
    LinkSpec,
    LinkStandard,
    MapUnit,
    MobilityMode,
    Region,
    Scenario,
    Sdcc,
    SensorNode,
    SimulationSettings,
    SmsProvider,
    Topology,
)
from dmcis.core.models.transport import (
    AdhocSession,
    BundleStatus,
    CustodyEntry,
    DataBundle,
    Direction,
    holder_key,
)
from dmcis.core.models.validation import Finding, FindingSeverity, Rule, ValidationReport

__all__ = [
    "GeoPoint",
    "FEATURE_NAMES", "DisasterRecord", "DispatchEvent", "MatchResult",
    "ProcessedReport", "SmsDelivery", "Verdict", "WarningOrder",
    "DEFAULT_BYPASS_CLASSES", "MODALITY_HINTS", "EventBatch", "HazardClass",
    "HazardEvent", "Modality", "SensorReading",
    "BaselineCategory", "BaselineRecord", "CdcDcc", "Dpc", "LinkSpec",
    "LinkStandard", "MapUnit", "MobilityMode", "Region", "Scenario", "Sdcc",
    "SensorNode", "SimulationSettings", "SmsProvider", "Topology",
    "AdhocSession", "BundleStatus", "CustodyEntry", "DataBundle", "Direction",
    "holder_key",
    "Finding", "FindingSeverity", "Rule", "ValidationReport",
]
