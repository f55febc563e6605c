"""Unit tests for the domain models."""

import pytest

from dmcis.core.models import (
    BaselineCategory,
    BaselineRecord,
    BundleStatus,
    DataBundle,
    DisasterRecord,
    EventBatch,
    Finding,
    FindingSeverity,
    GeoPoint,
    HazardClass,
    HazardEvent,
    LinkSpec,
    LinkStandard,
    ProcessedReport,
    Rule,
    SensorNode,
    SimulationSettings,
    SmsProvider,
    holder_key,
)


def _batch(batch_id: int = 1, payload: int = 64) -> EventBatch:
    return EventBatch(
        batch_id=batch_id,
        sdcc_id=1,
        area_id=1,
        trigger_time=10.0,
        contributing_sensors=frozenset({1}),
        readings=(),
        payload_bytes=payload,
        hazard_class_hint=HazardClass.FLOOD,
        window_used=10.0,
    )


# ─────────────────────────────────────────────────────────────────
# Geometry and links
# ─────────────────────────────────────────────────────────────────

class TestGeoPoint:
    """Tests for GeoPoint."""

    def test_from_sequence(self) -> None:
        assert GeoPoint.from_sequence([3, 4]).as_tuple() == (3.0, 4.0)

    def test_from_sequence_wrong_length(self) -> None:
        with pytest.raises(ValueError, match=r"Expected \[x, y\]"):
            GeoPoint.from_sequence([1, 2, 3])

    def test_non_finite_rejected(self) -> None:
        with pytest.raises(ValueError, match="finite"):
            GeoPoint(float("inf"), 0.0)


class TestLinkSpec:
    """Tests for the nominal link table."""

    @pytest.mark.parametrize(
        "standard,rate,channels",
        [(LinkStandard.B, 11.0, 3), (LinkStandard.G, 54.0, 3), (LinkStandard.A, 54.0, 12)],
    )
    def test_table(self, standard: LinkStandard, rate: float, channels: int) -> None:
        spec = LinkSpec.for_standard(standard)
        assert spec.rate_mbps == rate
        assert spec.channels == channels

    def test_band(self) -> None:
        assert LinkSpec.for_standard("802.11a").band_ghz == 5.0
        assert LinkSpec.for_standard("802.11g").band_ghz == 2.4

    def test_inconsistent_fields_rejected(self) -> None:
        with pytest.raises(ValueError, match="Inconsistent"):
            LinkSpec(LinkStandard.B, rate_mbps=54.0, band_ghz=2.4, channels=3)


# ─────────────────────────────────────────────────────────────────
# Sensing models
# ─────────────────────────────────────────────────────────────────

class TestHazardEvent:
    """Tests for hazard activity windows."""

    def test_active_overlapping_window(self) -> None:
        hazard = HazardEvent(1, HazardClass.FLOOD, 5.0, 1, 1.0, frozenset({1}), duration=10.0)
        assert hazard.active_during(0.0, 10.0)
        assert hazard.active_during(10.0, 20.0)

    def test_inactive_after_duration(self) -> None:
        hazard = HazardEvent(1, HazardClass.FLOOD, 0.0, 1, 1.0, frozenset({1}), duration=10.0)
        assert not hazard.active_during(10.0, 20.0)

    def test_inactive_before_onset(self) -> None:
        hazard = HazardEvent(1, HazardClass.FLOOD, 30.0, 1, 1.0, frozenset({1}))
        assert not hazard.active_during(10.0, 20.0)

    def test_open_ended(self) -> None:
        hazard = HazardEvent(1, HazardClass.FLOOD, 0.0, 1, 1.0, frozenset({1}))
        assert hazard.active_during(1e6, 1e6 + 60)

    def test_negative_magnitude_rejected(self) -> None:
        with pytest.raises(ValueError, match="magnitude"):
            HazardEvent(1, HazardClass.FLOOD, 0.0, 1, -1.0, frozenset())


class TestSensorNode:
    """Tests for sensor validation."""

    def test_probability_range(self) -> None:
        with pytest.raises(ValueError, match="false_report_prob"):
            SensorNode(1, 1, GeoPoint(0, 0), false_report_prob=1.5)

    def test_live(self) -> None:
        assert SensorNode(1, 1, GeoPoint(0, 0)).live
        assert not SensorNode(1, 1, GeoPoint(0, 0), failed=True).live


class TestEventBatch:
    """Tests for EventBatch."""

    def test_payload_must_be_positive(self) -> None:
        with pytest.raises(ValueError, match="payload"):
            _batch(payload=0)


# ─────────────────────────────────────────────────────────────────
# Transport and reports
# ─────────────────────────────────────────────────────────────────

class TestDataBundle:
    """Tests for custody tracking."""

    def test_custody_shape(self) -> None:
        bundle = DataBundle(bundle_id=1, batches=[_batch()])
        bundle.hand_over(holder_key("sdcc", 1), 10.0)
        bundle.hand_over(holder_key("map", 2), 20.0)
        bundle.hand_over(holder_key("dpc", 1), 30.0)

        assert bundle.custody_shape() == ("sdcc", "map", "dpc")
        assert bundle.holder == "dpc:1"

    def test_total_bytes_sums_batches(self) -> None:
        bundle = DataBundle(bundle_id=1, batches=[_batch(1, 64), _batch(2, 128)])
        assert bundle.total_bytes == 192
        assert bundle.batch_ids == (1, 2)

    def test_to_dict(self) -> None:
        bundle = DataBundle(bundle_id=3, batches=[_batch()], created_time=10.0)
        data = bundle.to_dict()
        assert data["bundle"] == 3
        assert data["status"] == BundleStatus.BUFFERED.value


class TestReports:
    """Tests for decision-tier models."""

    def test_feature_vector_length_checked(self) -> None:
        with pytest.raises(ValueError, match="Feature vector must have 3 values"):
            DisasterRecord(1, HazardClass.FLOOD, (1.0, 0.5), 0.0)

    def test_confidence_range_checked(self) -> None:
        with pytest.raises(ValueError, match="Confidence"):
            ProcessedReport(
                report_id=1, source_batches=(1,), dpc_id=1, hazard_class=HazardClass.FLOOD,
                severity_estimate=1.0, confidence=1.2, reprocess_count=0, area_id=1,
                feature_vector=(1.0, 1.0, 0.1),
            )

    def test_baseline_payload_non_negative(self) -> None:
        with pytest.raises(ValueError):
            BaselineRecord(1, BaselineCategory.HEALTH, -1)

    def test_sms_provider_serves(self) -> None:
        assert SmsProvider("any", 10).serves(7)
        assert not SmsProvider("local", 10, area_id=1).serves(2)


class TestValidationModels:
    """Tests for findings."""

    def test_label(self) -> None:
        finding = Finding(FindingSeverity.ERROR, Rule.EQ2, "too few MAPs")
        assert finding.label() == "ERROR(Eq2)"


class TestSimulationSettings:
    """Tests for run settings validation."""

    def test_defaults(self) -> None:
        settings = SimulationSettings()
        assert settings.horizon == 86_400.0
        assert settings.reading_bytes == 64

    @pytest.mark.parametrize(
        "kwargs",
        [{"horizon": -1.0}, {"mobility_step": 0.0}, {"link_efficiency": 0.0}, {"reading_bytes": 0}],
    )
    def test_invalid(self, kwargs: dict) -> None:
        with pytest.raises(ValueError):
            SimulationSettings(**kwargs)
