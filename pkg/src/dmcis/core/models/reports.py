"""Processing and decision-tier models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from dmcis.core.models.sensing import HazardClass


# Order of values in every feature vector.
FEATURE_NAMES: tuple[str, ...] = ("coverage", "agreement", "severity")


class Verdict(Enum):
    """Outcome of the DPC confidence check."""
    PASS = "pass"
    REPROCESS = "reprocess"
    REJECT = "reject"


@dataclass(frozen=True)
class DisasterRecord:
    """A past disaster kept in a DPC history or the CDC reference database."""
    area_id: int
    hazard_class: HazardClass
    feature_vector: tuple[float, ...]
    occurred_time: float
    outcome: str = ""

    def __post_init__(self) -> None:
        if len(self.feature_vector) != len(FEATURE_NAMES):
            raise ValueError(
                f"Feature vector must have {len(FEATURE_NAMES)} values "
                f"({', '.join(FEATURE_NAMES)}), got {len(self.feature_vector)}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "area": self.area_id,
            "class": self.hazard_class.value,
            "features": list(self.feature_vector),
            "occurred": self.occurred_time,
            "outcome": self.outcome,
        }


@dataclass(frozen=True)
class ProcessedReport:
    """DPC output for one delivered bundle.

    Attributes:
        report_id: Unique id within a run
        source_batches: Ids of the batches this report covers
        dpc_id: DPC that produced the report
        hazard_class: Taken from the batch hint
        severity_estimate: Mean reading value
        confidence: coverage x agreement, in [0, 1]
        reprocess_count: Completed reprocess iterations
        area_id: Region of the source SDCC(s)
        feature_vector: (coverage, agreement, normalized severity)
        contributing_sensors: Union of sensors behind the report
        sensor_values: Mean value per contributing sensor
        live_sensors: Live sensors assigned to the source SDCC(s)
        source_sdccs: SDCCs the evidence came from
        truth: Ground-truth hazard ids (metrics only)
    """
    report_id: int
    source_batches: tuple[int, ...]
    dpc_id: int
    hazard_class: HazardClass
    severity_estimate: float
    confidence: float
    reprocess_count: int
    area_id: int
    feature_vector: tuple[float, ...]
    contributing_sensors: frozenset[int] = frozenset()
    sensor_values: dict[int, float] = field(default_factory=dict)
    live_sensors: int = 0
    source_sdccs: tuple[int, ...] = ()
    created_time: float = 0.0
    truth: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"Confidence must be in [0, 1], got {self.confidence}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "report": self.report_id,
            "batches": list(self.source_batches),
            "dpc": self.dpc_id,
            "class": self.hazard_class.value,
            "severity": self.severity_estimate,
            "confidence": self.confidence,
            "reprocess_count": self.reprocess_count,
            "area": self.area_id,
            "features": list(self.feature_vector),
            "sensors": sorted(self.contributing_sensors),
            "truth": list(self.truth),
        }


@dataclass(frozen=True)
class MatchResult:
    """Outcome of the CDC reference-database similarity check."""
    report_id: int
    best_record: Optional[DisasterRecord]
    similarity: float
    matched: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "report": self.report_id,
            "best": self.best_record.to_dict() if self.best_record else None,
            "similarity": self.similarity,
            "matched": self.matched,
        }


@dataclass(frozen=True)
class WarningOrder:
    """A DCC dissemination command.

    ``path`` lists the trace ancestry of the order, e.g.
    ("sdcc:1", "map:2", "dpc:1", "cdc", "dcc").
    """
    order_id: int
    hazard_class: HazardClass
    area_id: int
    severity: float
    issue_time: float
    channels: tuple[str, ...]
    bypass: bool
    source_report: int
    source_batches: tuple[int, ...]
    path: tuple[str, ...]
    truth: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order_id,
            "class": self.hazard_class.value,
            "area": self.area_id,
            "severity": self.severity,
            "channels": list(self.channels),
            "bypass": self.bypass,
            "report": self.source_report,
            "batches": list(self.source_batches),
            "path": list(self.path),
            "truth": list(self.truth),
        }


@dataclass(frozen=True)
class DispatchEvent:
    """A call to the emergency departments.

    Bypass dispatches originate at a MAP or DPC and never carry CDC or DCC
    in their path.
    """
    dispatch_id: int
    source: str
    hazard_class: HazardClass
    area_id: int
    departments: tuple[str, ...]
    bypass: bool
    source_batches: tuple[int, ...]
    path: tuple[str, ...]
    truth: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "dispatch": self.dispatch_id,
            "source": self.source,
            "class": self.hazard_class.value,
            "area": self.area_id,
            "departments": list(self.departments),
            "bypass": self.bypass,
            "batches": list(self.source_batches),
            "path": list(self.path),
            "truth": list(self.truth),
        }


@dataclass(frozen=True)
class SmsDelivery:
    """Delivery statistics for one provider and one warning order."""
    provider_index: int
    provider_name: str
    subscribers: int
    first_delivery: float
    last_delivery: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "provider": self.provider_index,
            "name": self.provider_name,
            "subscribers": self.subscribers,
            "first": self.first_delivery,
            "last": self.last_delivery,
        }
