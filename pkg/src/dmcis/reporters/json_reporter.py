"""JSON report generator for validation and run results."""

import json
from pathlib import Path
from typing import Any

from dmcis.core.models import ValidationReport
from dmcis.engine import SimulationResult


class JSONReporter:
    """Generates machine-readable reports.

    The documents are deterministic for a given input: no wall-clock
    timestamps are included, so two runs of the same scenario and seed
    give identical JSON.
    """

    def validation_report(self, scenario: str, report: ValidationReport) -> dict[str, Any]:
        """Generate the document printed by ``dmcis validate --format json``."""
        return {
            "version": "1.0",
            "scenario": scenario,
            "status": "pass" if report.ok else "fail",
            **report.to_dict(),
        }

    def run_report(self, result: SimulationResult) -> dict[str, Any]:
        """Generate the summary document of one run.

        Args:
            result: Finished run

        Returns:
            Dictionary with run identity, digest, bundle accounting and metrics
        """
        return {
            "version": "1.0",
            "scenario": result.scenario,
            "seed": result.seed,
            "horizon": result.horizon,
            "trace_records": len(result.trace),
            "trace_sha256": result.digest,
            "bundles": result.bundle_counts(),
            "metrics": result.metrics.to_dict(),
            "validation": {
                "errors": len(result.validation.errors),
                "warnings": len(result.validation.warnings),
            },
        }

    def save(self, report: dict[str, Any], path: Path) -> None:
        path.write_text(self.to_string(report), encoding="utf-8")

    def to_string(self, report: dict[str, Any], pretty: bool = True) -> str:
        """Convert report to JSON string.

        Args:
            report: Report dictionary
            pretty: Whether to format with indentation

        Returns:
            JSON string
        """
        if pretty:
            return json.dumps(report, indent=2, default=str)
        return json.dumps(report, default=str)
