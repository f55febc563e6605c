"""Unit tests for the JSON and Markdown reporters and run output files."""

import json
from pathlib import Path

import pandas as pd
import pytest

from dmcis.analysis import validate_topology
from dmcis.core.orchestrator import (
    DIGEST_FILE,
    METRICS_FILE,
    QUEUE_FILE,
    SUMMARY_FILE,
    TRACE_FILE,
    SimulationRunner,
    queue_frame,
    write_atomic,
)
from dmcis.engine import SimulationResult, load_trace, run, trace_digest
from dmcis.reporters import JSONReporter, MarkdownReporter
from dmcis.sensing import cluster_topology
from tests.builders import line_scenario, two_sdcc_scenario


@pytest.fixture(scope="module")
def flood_result() -> SimulationResult:
    return run(line_scenario())


# ─────────────────────────────────────────────────────────────────
# JSON
# ─────────────────────────────────────────────────────────────────

class TestJSONReporter:
    """Tests for machine-readable reports."""

    def test_validation_report_pass(self) -> None:
        report = validate_topology(cluster_topology(line_scenario().topology))
        doc = JSONReporter().validation_report("line", report)

        assert doc["status"] == "pass"
        assert doc["valid"] is True
        assert doc["scenario"] == "line"
        assert any(f["rule"] == "Eq3" for f in doc["findings"])

    def test_validation_report_fail(self) -> None:
        report = validate_topology(cluster_topology(two_sdcc_scenario(maps=1).topology))
        doc = JSONReporter().validation_report("two", report)
        assert doc["status"] == "fail"
        assert doc["errors"] == 1

    def test_run_report(self, flood_result: SimulationResult) -> None:
        doc = JSONReporter().run_report(flood_result)

        assert doc["trace_sha256"] == flood_result.digest
        assert doc["bundles"]["created"] == 1
        assert doc["bundles"]["delivered"] == 1
        assert doc["metrics"]["warning_latency"]["1"] == pytest.approx(188.0, abs=1e-3)

    def test_to_string_is_valid_json(self, flood_result: SimulationResult) -> None:
        reporter = JSONReporter()
        text = reporter.to_string(reporter.run_report(flood_result), pretty=False)
        assert json.loads(text)["scenario"] == "line-flood"
        assert "\n" not in text

    def test_save(self, tmp_path: Path, flood_result: SimulationResult) -> None:
        reporter = JSONReporter()
        path = tmp_path / "run.json"
        reporter.save(reporter.run_report(flood_result), path)
        assert json.loads(path.read_text())["seed"] == 0


# ─────────────────────────────────────────────────────────────────
# Markdown
# ─────────────────────────────────────────────────────────────────

class TestMarkdownReporter:
    """Tests for human-readable reports."""

    def test_run_summary(self, flood_result: SimulationResult) -> None:
        text = MarkdownReporter().run_summary(flood_result)

        assert text.startswith("# Run summary: line-flood")
        assert flood_result.digest in text
        assert "| delivered | 1 |" in text
        assert "## Warning latency per hazard" in text
        assert "## Validation warnings" in text
        assert "| Windows in exceedance | 1 |" in text
        assert "## SMS delivery per provider" in text
        assert "| carrier |" in text

    def test_validation_summary(self) -> None:
        report = validate_topology(cluster_topology(two_sdcc_scenario(maps=1).topology))
        text = MarkdownReporter().validation_summary("two", report)

        assert "# Validation: two" in text
        assert "**FAIL**" in text
        assert "- ERROR(Eq2)" in text

    def test_sweep_table(self) -> None:
        frame = pd.DataFrame({"value": [1, 2], "runs": [3, 3], "delivery_ratio_mean": [1.0, float("nan")]})
        text = MarkdownReporter().sweep_table(frame, "tau")

        assert text.startswith("# Sweep over tau")
        assert "| value | runs | delivery_ratio_mean |" in text
        assert "| 2 | 3 | - |" in text

    def test_reporter_is_reusable(self, flood_result: SimulationResult) -> None:
        reporter = MarkdownReporter()
        first = reporter.run_summary(flood_result)
        assert reporter.run_summary(flood_result) == first


# ─────────────────────────────────────────────────────────────────
# Output files
# ─────────────────────────────────────────────────────────────────

class TestSimulationRunner:
    """Tests for the run output files."""

    def test_writes_every_file(self, tmp_path: Path) -> None:
        result = SimulationRunner(tmp_path / "out").execute(line_scenario())
        out = tmp_path / "out"

        for name in (TRACE_FILE, METRICS_FILE, QUEUE_FILE, SUMMARY_FILE, DIGEST_FILE):
            assert (out / name).exists()
        assert len(load_trace(out / TRACE_FILE)) == len(result.records)
        assert (out / DIGEST_FILE).read_text() == f"{result.digest}  {TRACE_FILE}\n"
        assert trace_digest((out / TRACE_FILE).read_bytes()) == result.digest

    def test_metrics_csv_has_one_row(self, tmp_path: Path) -> None:
        SimulationRunner(tmp_path).execute(line_scenario())
        frame = pd.read_csv(tmp_path / METRICS_FILE)
        assert len(frame) == 1
        assert frame.loc[0, "delivery_ratio"] == 1.0

    def test_queue_frame_orders_by_time(self) -> None:
        frame = queue_frame(run(line_scenario()))
        assert list(frame.columns) == ["t", "dpc", "length"]
        assert frame["t"].is_monotonic_increasing
        assert frame["length"].tolist() == [1, 0]

    def test_queue_frame_empty_run(self) -> None:
        frame = queue_frame(run(line_scenario(), horizon=5.0))
        assert frame.empty
        assert list(frame.columns) == ["t", "dpc", "length"]

    def test_write_atomic_creates_parents(self, tmp_path: Path) -> None:
        path = tmp_path / "a" / "b" / "c.txt"
        write_atomic(path, "x\n")
        assert path.read_text() == "x\n"
        assert [p.name for p in path.parent.iterdir()] == ["c.txt"]
