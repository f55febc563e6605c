"""DPC confidence scoring, the threshold check and the reprocess merge."""

from dataclasses import replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from dmcis.core.logging import get_logger
from dmcis.core.models import (
    DataBundle,
    Dpc,
    ProcessedReport,
    Verdict,
)

logger = get_logger("processing")


class ProcessingError(Exception):
    """Raised when a bundle cannot be turned into a report."""
    pass


class CoverageModel:
    """How much of an SDCC's live sensor population a report covers.

    Coverage of a sensor set is the best fraction over the SDCCs the
    sensors belong to, so adding sensors never lowers it.

    Attributes:
        assignment: sensor id -> SDCC id
        live: SDCC id -> live assigned sensor count
    """

    def __init__(self, assignment: Mapping[int, int], live: Mapping[int, int]) -> None:
        self.assignment = dict(assignment)
        self.live = dict(live)

    def coverage(self, sensors: Iterable[int]) -> float:
        per_sdcc: dict[int, int] = {}
        for sensor_id in sensors:
            sdcc_id = self.assignment.get(sensor_id)
            if sdcc_id is not None:
                per_sdcc[sdcc_id] = per_sdcc.get(sdcc_id, 0) + 1
        best = 0.0
        for sdcc_id, count in per_sdcc.items():
            live = self.live.get(sdcc_id, 0)
            if live > 0:
                best = max(best, min(1.0, count / live))
        return best

    def live_total(self, sdcc_ids: Iterable[int]) -> int:
        return sum(self.live.get(s, 0) for s in set(sdcc_ids))


def agreement(values: Sequence[float]) -> float:
    """1 minus the normalized dispersion (std / |mean|) of the values, in [0, 1]."""
    if not values:
        return 0.0
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std())
    if mean == 0.0:
        dispersion = 0.0 if std == 0.0 else 1.0
    else:
        dispersion = std / abs(mean)
    return float(np.clip(1.0 - dispersion, 0.0, 1.0))


def _score(
    sensor_values: Mapping[int, float],
    coverage_model: CoverageModel,
    severity_scale: float,
) -> tuple[float, float, tuple[float, ...]]:
    values = list(sensor_values.values())
    coverage = coverage_model.coverage(sensor_values.keys())
    agree = agreement(values)
    severity = float(np.mean(values)) if values else 0.0
    normalized = min(1.0, severity / severity_scale) if severity_scale > 0 else 0.0
    confidence = float(np.clip(coverage * agree, 0.0, 1.0))
    return confidence, severity, (coverage, agree, normalized)


def process_batch(
    dpc: Dpc,
    bundle: DataBundle,
    coverage_model: CoverageModel,
    report_id: int,
    now: float,
    severity_scale: float = 10.0,
) -> ProcessedReport:
    """Turn a delivered bundle into a scored report.

    confidence = coverage x agreement, where coverage is the fraction of
    the source SDCC's live sensors that contributed and agreement is 1
    minus the normalized dispersion of their reading values.

    Raises:
        ProcessingError: If the bundle carries no readings
    """
    readings = [r for batch in bundle.batches for r in batch.readings]
    if not readings:
        raise ProcessingError(f"Bundle {bundle.bundle_id} is empty")

    grouped: dict[int, list[float]] = {}
    for reading in readings:
        grouped.setdefault(reading.sensor_id, []).append(reading.value)
    sensor_values = {sid: float(np.mean(vals)) for sid, vals in sorted(grouped.items())}

    confidence, severity, features = _score(sensor_values, coverage_model, severity_scale)
    sdccs = tuple(sorted({b.sdcc_id for b in bundle.batches}))
    truth = sorted({h for b in bundle.batches for h in b.truthful_hazards})

    return ProcessedReport(
        report_id=report_id,
        source_batches=bundle.batch_ids,
        dpc_id=dpc.dpc_id,
        hazard_class=bundle.batches[0].hazard_class_hint,
        severity_estimate=severity,
        confidence=confidence,
        reprocess_count=0,
        area_id=bundle.batches[0].area_id,
        feature_vector=features,
        contributing_sensors=frozenset(sensor_values),
        sensor_values=sensor_values,
        live_sensors=coverage_model.live_total(sdccs),
        source_sdccs=sdccs,
        created_time=now,
        truth=tuple(truth),
    )


def check_confidence(report: ProcessedReport, dpc: Dpc) -> Verdict:
    if report.confidence >= dpc.confidence_threshold:
        return Verdict.PASS
    if report.reprocess_count < dpc.max_reprocess:
        return Verdict.REPROCESS
    return Verdict.REJECT


def reprocess(
    dpc: Dpc,
    report: ProcessedReport,
    peer_reports: Iterable[ProcessedReport],
    coverage_model: CoverageModel,
    now: float,
    lookback: float = 3600.0,
    severity_scale: float = 10.0,
) -> ProcessedReport:
    """Merge related peer evidence into a report and score it again.

    Peer reports qualify when they cover the same area, were created
    within ``lookback`` seconds and name the same hazard class. The
    report's own values win for sensors present on both sides.
    """
    merged = dict(report.sensor_values)
    batches = set(report.source_batches)
    sdccs = set(report.source_sdccs)
    truth = set(report.truth)
    used = 0

    for peer in peer_reports:
        if peer.report_id == report.report_id or peer.area_id != report.area_id:
            continue
        if peer.created_time < now - lookback:
            continue
        if peer.hazard_class is not report.hazard_class:
            logger.info(
                f"DPC {dpc.dpc_id}: report {peer.report_id} ({peer.hazard_class.value}) "
                f"conflicts with report {report.report_id} ({report.hazard_class.value}); not merged"
            )
            continue
        for sensor_id, value in peer.sensor_values.items():
            merged.setdefault(sensor_id, value)
        batches.update(peer.source_batches)
        sdccs.update(peer.source_sdccs)
        truth.update(peer.truth)
        used += 1

    confidence, severity, features = _score(merged, coverage_model, severity_scale)
    logger.debug(
        f"DPC {dpc.dpc_id}: reprocessed report {report.report_id} with {used} peer report(s), "
        f"confidence {report.confidence:.3f} -> {confidence:.3f}"
    )
    return replace(
        report,
        source_batches=tuple(sorted(batches)),
        severity_estimate=severity,
        confidence=confidence,
        reprocess_count=report.reprocess_count + 1,
        feature_vector=features,
        contributing_sensors=frozenset(merged),
        sensor_values=dict(sorted(merged.items())),
        live_sensors=coverage_model.live_total(sdccs),
        source_sdccs=tuple(sorted(sdccs)),
        truth=tuple(sorted(truth)),
    )
