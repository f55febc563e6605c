"""CDC reference-database matching."""

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from dmcis.core.logging import get_logger
from dmcis.core.models import (
    DisasterRecord,
    HazardClass,
    MatchResult,
    ProcessedReport,
)

logger = get_logger("decision")


def similarity(
    features: Sequence[float],
    hazard_class: HazardClass,
    record: DisasterRecord,
) -> float:
    """1 - normalized Euclidean distance, gated on the hazard class.

    Feature values lie in [0, 1], so dividing the distance by sqrt(d)
    normalizes it to [0, 1]. A class mismatch scores 0.
    """
    if record.hazard_class is not hazard_class:
        return 0.0
    a = np.asarray(features, dtype=float)
    b = np.asarray(record.feature_vector, dtype=float)
    if a.shape != b.shape:
        raise ValueError(
            f"Feature vector length {a.size} does not match reference record ({b.size})"
        )
    normalized = float(np.linalg.norm(a - b)) / np.sqrt(a.size)
    return float(np.clip(1.0 - normalized, 0.0, 1.0))


def match_reference(
    report: ProcessedReport,
    reference_db: Iterable[DisasterRecord],
    match_threshold: float,
) -> MatchResult:
    """Best same-area reference record for a report."""
    best: Optional[DisasterRecord] = None
    best_score = 0.0
    for record in reference_db:
        if record.area_id != report.area_id:
            continue
        score = similarity(report.feature_vector, report.hazard_class, record)
        if best is None or score > best_score:
            best, best_score = record, score
    matched = best is not None and best_score >= match_threshold
    return MatchResult(
        report_id=report.report_id,
        best_record=best,
        similarity=best_score,
        matched=matched,
    )


@dataclass(frozen=True)
class ResponseRequest:
    """A CDC request asking the DCC to act on a report.

    ``path`` is the trace ancestry of the report up to and including "cdc".
    """
    request_id: int
    report: ProcessedReport
    match: MatchResult
    path: tuple[str, ...]
    time: float


class CentralDataCenter:
    """Reference database and matching step at the CDC.

    Every received report is stored as a future reference, matched or not.
    """

    def __init__(
        self,
        reference_db: Iterable[DisasterRecord] = (),
        match_threshold: float = 0.8,
        escalate_unmatched: bool = False,
    ) -> None:
        self.reference_db: list[DisasterRecord] = list(reference_db)
        self.match_threshold = match_threshold
        self.escalate_unmatched = escalate_unmatched
        self._request_ids = itertools.count(1)

    def receive(self, report: ProcessedReport, now: float) -> MatchResult:
        result = match_reference(report, self.reference_db, self.match_threshold)
        self.reference_db.append(DisasterRecord(
            area_id=report.area_id,
            hazard_class=report.hazard_class,
            feature_vector=report.feature_vector,
            occurred_time=now,
            outcome="matched" if result.matched else "unmatched",
        ))
        logger.debug(
            f"CDC: report {report.report_id} similarity {result.similarity:.3f} "
            f"({'matched' if result.matched else 'unmatched'}), reference db size {len(self.reference_db)}"
        )
        return result

    def request_response(
        self,
        report: ProcessedReport,
        match: MatchResult,
        path: tuple[str, ...],
        now: float,
    ) -> Optional[ResponseRequest]:
        """Ask the DCC to respond; None means the report is archived."""
        if not match.matched and not self.escalate_unmatched:
            return None
        return ResponseRequest(
            request_id=next(self._request_ids),
            report=report,
            match=match,
            path=path,
            time=now,
        )
