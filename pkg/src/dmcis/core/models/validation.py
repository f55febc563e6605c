"""Topology validation findings."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class FindingSeverity(Enum):
    """Severity of a validation finding.

    - ERROR: the topology violates a necessary condition; runs are refused
    - WARNING: a soft condition ("much greater than") is not met
    """
    ERROR = "error"
    WARNING = "warning"


class Rule(Enum):
    """Structural condition a finding refers to."""
    EQ1 = "Eq1"
    EQ2 = "Eq2"
    EQ3 = "Eq3"
    ROUTE = "Route"
    COVERAGE = "Coverage"
    PEERS = "Peers"


@dataclass(frozen=True)
class Finding:
    """One validation result.

    Attributes:
        severity: ERROR or WARNING
        rule: Which condition was checked
        message: Human-readable explanation
        region: Area the finding applies to (None for global checks)
        entity: Holder key of the offending entity, if any
    """
    severity: FindingSeverity
    rule: Rule
    message: str
    region: Optional[int] = None
    entity: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "severity": self.severity.value,
            "rule": self.rule.value,
            "region": self.region,
            "entity": self.entity,
            "message": self.message,
        }

    def label(self) -> str:
        return f"{self.severity.value.upper()}({self.rule.value})"


@dataclass(frozen=True)
class ValidationReport:
    """All findings for one topology, in a stable order."""
    findings: tuple[Finding, ...] = ()
    collapsed_pairs: tuple[tuple[int, int], ...] = ()
    region_summary: dict[int, dict[str, int]] = field(default_factory=dict)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is FindingSeverity.ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is FindingSeverity.WARNING]

    @property
    def ok(self) -> bool:
        return not self.errors

    def has(self, severity: FindingSeverity, rule: Rule) -> bool:
        return any(f.severity is severity and f.rule is rule for f in self.findings)

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.ok,
            "errors": len(self.errors),
            "warnings": len(self.warnings),
            "collapsed_pairs": [list(p) for p in self.collapsed_pairs],
            "regions": {str(k): v for k, v in sorted(self.region_summary.items())},
            "findings": [f.to_dict() for f in self.findings],
        }
