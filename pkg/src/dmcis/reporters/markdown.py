"""Markdown report generator."""

from typing import Any, Optional

import pandas as pd

from dmcis.core.models import ValidationReport
from dmcis.engine import SimulationResult


def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        if pd.isna(value):
            return "-"
        return f"{value:.4g}"
    return str(value)


class MarkdownReporter:
    """Generates human-readable Markdown from run and sweep results.

    Creates reports with sections for:
    - Run identity and trace digest
    - Bundle accounting at the horizon
    - Latency, delivery and utilization metrics
    - Validation warnings carried into the run
    """

    def __init__(self) -> None:
        self._sections: list[str] = []

    def run_summary(self, result: SimulationResult) -> str:
        """Generate the summary.md of one run."""
        self._sections.clear()
        m = result.metrics

        self._add_section(
            f"# Run summary: {result.scenario}",
            "\n".join([
                f"- Seed: {result.seed}",
                f"- Horizon: {result.horizon:g} s",
                f"- Trace records: {len(result.trace)}",
                f"- Trace SHA-256: `{result.digest}`",
            ]),
        )

        counts = result.bundle_counts()
        self._add_section("## Bundles", self._table(["Status", "Count"], sorted(counts.items())))

        rows = [
            ("Hazards", m.hazards),
            ("Windows in exceedance", m.exceedance_windows),
            ("Triggers", m.triggers),
            ("Warnings", m.warnings),
            ("Mean warning latency (s)", m.mean_warning_latency),
            ("Mean detection latency (s)", m.mean_detection_latency),
            ("False warnings", m.false_warning_count),
            ("Missed events", m.missed_event_count),
            ("Delivery ratio", m.delivery_ratio),
            ("MAP utilization", m.map_utilization),
            ("DPC makespan (s)", m.dpc_makespan),
            ("Channel blocks", m.channel_block_count),
            ("Dispatches (bypass)", f"{m.dispatches} ({m.bypass_dispatches})"),
            ("Reprocessed / rejected", f"{m.reprocessed} / {m.rejected}"),
        ]
        self._add_section("## Metrics", self._table(["Metric", "Value"], rows))

        if m.warning_latency:
            self._add_section(
                "## Warning latency per hazard",
                self._table(["Hazard", "Latency (s)"], sorted(m.warning_latency.items())),
            )

        if m.sms_first:
            self._add_section(
                "## SMS delivery per provider",
                self._table(
                    ["Provider", "First delivery (s)", "Last delivery (s)"],
                    [(name, m.sms_first[name], m.sms_last[name]) for name in sorted(m.sms_first)],
                ),
            )

        if result.validation.warnings:
            self._add_section("## Validation warnings", self._findings(result.validation))

        return "\n\n".join(self._sections) + "\n"

    def validation_summary(self, scenario: str, report: ValidationReport) -> str:
        self._sections.clear()
        status = "PASS" if report.ok else "FAIL"
        self._add_section(
            f"# Validation: {scenario}",
            f"**{status}**: {len(report.errors)} error(s), {len(report.warnings)} warning(s)",
        )
        if report.findings:
            self._add_section("## Findings", self._findings(report))
        return "\n\n".join(self._sections) + "\n"

    def sweep_table(self, aggregate: pd.DataFrame, parameter: Optional[str] = None) -> str:
        """Render a sweep aggregate (mean and standard error per value)."""
        title = f"# Sweep over {parameter}" if parameter else "# Sweep"
        return self.frame_table(title, aggregate)

    def frame_table(self, title: str, frame: pd.DataFrame) -> str:
        """Render any metrics DataFrame as a titled Markdown table."""
        frame = frame.reset_index() if frame.index.name else frame
        headers = [str(c) for c in frame.columns]
        rows = [tuple(row) for row in frame.itertuples(index=False)]
        return f"{title}\n\n{self._table(headers, rows)}\n"

    def _add_section(self, title: str, body: str) -> None:
        self._sections.append(f"{title}\n\n{body}")

    @staticmethod
    def _findings(report: ValidationReport) -> str:
        return "\n".join(f"- {f.label()} {f.message}" for f in report.findings)

    @staticmethod
    def _table(headers: list[str], rows: list[tuple[Any, ...]]) -> str:
        lines = [
            "| " + " | ".join(headers) + " |",
            "|" + "|".join("---" for _ in headers) + "|",
        ]
        for row in rows:
            lines.append("| " + " | ".join(_fmt(v) for v in row) + " |")
        return "\n".join(lines)
