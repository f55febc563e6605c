"""Per-level summary of a topology: entities, media and necessary condition."""

from dataclasses import dataclass
from typing import Any

from dmcis.core.models import FindingSeverity, Rule, Topology, ValidationReport


@dataclass(frozen=True)
class LevelSummary:
    """One row of the level table."""
    level: int
    name: str
    entities: str
    media: str
    condition: str
    status: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "name": self.name,
            "entities": self.entities,
            "media": self.media,
            "condition": self.condition,
            "status": self.status,
        }


def _status(report: ValidationReport, rules: tuple[Rule, ...]) -> str:
    severities = {f.severity for f in report.findings if f.rule in rules}
    if FindingSeverity.ERROR in severities:
        return "error"
    if FindingSeverity.WARNING in severities:
        return "warning"
    return "ok"


def level_summary(topology: Topology, report: ValidationReport) -> list[LevelSummary]:
    """Cross-check the wiring of each level against its validation findings."""
    sensors = list(topology.iter_sensors())
    sdccs = list(topology.iter_sdccs())
    maps = list(topology.iter_maps())
    dpcs = list(topology.iter_dpcs())
    standards = sorted({m.link.standard.value for m in maps} | {s.link.standard.value for s in sdccs})
    collapsed = len(report.collapsed_pairs)
    cdc = topology.cdc_dcc
    return [
        LevelSummary(
            1, "Sensing",
            f"{len(sensors)} sensor(s) ({sum(1 for s in sensors if s.live)} live), {len(sdccs)} SDCC(s)",
            "sensor radio to the cluster SDCC",
            "1 <= tau <= live sensors per SDCC",
            _status(report, (Rule.EQ1,)),
        ),
        LevelSummary(
            2, "Transport",
            f"{len(maps)} MAP(s), {collapsed} collapsed SDCC-DPC pair(s)",
            ", ".join(standards) + " ad hoc" if standards else "none",
            "MAPs >= non-collapsed SDCCs and DPCs per area; routes reach endpoints",
            _status(report, (Rule.EQ2, Rule.ROUTE, Rule.COVERAGE)),
        ),
        LevelSummary(
            3, "Processing",
            f"{len(dpcs)} DPC(s)",
            "inter-DPC network",
            "DPCs of an area form a connected peer network",
            _status(report, (Rule.PEERS,)),
        ),
        LevelSummary(
            4, "Decision",
            f"{cdc.cdc_count} CDC(s), DCC with {len(cdc.sms_providers)} SMS provider(s)",
            "internet, SMS",
            "DPCs across all areas much greater than CDCs",
            _status(report, (Rule.EQ3,)),
        ),
    ]
