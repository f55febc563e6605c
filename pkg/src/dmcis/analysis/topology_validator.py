"""Structural validation of a topology before any simulation runs.

Checks the necessary conditions of each level:
- Eq1: tau must not exceed the live sensors assigned to an SDCC
- Eq2: per region, MAPs must cover the non-collapsed SDCCs and DPCs
- Eq3: DPCs across all areas should be much more numerous than CDCs
- Route/Coverage: every MAP route reaches its endpoints, every
  non-collapsed SDCC is served by a MAP that also reaches a DPC
- Peers: the DPCs of a region form a connected network
"""

import networkx as nx

from dmcis.analysis.geometry import apply_collapse, collapse_pairs, route_visits
from dmcis.core.logging import get_logger
from dmcis.core.models import (
    Finding,
    FindingSeverity,
    Region,
    Rule,
    Topology,
    ValidationReport,
)

logger = get_logger("validator")

ERROR = FindingSeverity.ERROR
WARNING = FindingSeverity.WARNING


class TopologyValidator:
    """Runs every structural check and collects findings.

    Validation never aborts: each check appends findings and the report
    is the output. The validator holds no state between calls.
    """

    def validate(self, topology: Topology) -> ValidationReport:
        topology = apply_collapse(topology)
        pairs = collapse_pairs(topology)
        findings: list[Finding] = []
        summary: dict[int, dict[str, int]] = {}

        for region in topology.regions:
            findings.extend(self._check_sensing(region))
            findings.extend(self._check_mule_counts(region, pairs, summary))
            findings.extend(self._check_routes(region))
            findings.extend(self._check_coverage(region))
            findings.extend(self._check_peers(region))

        findings.extend(self._check_cdc_ratio(topology))

        report = ValidationReport(
            findings=tuple(findings),
            collapsed_pairs=tuple(pairs),
            region_summary=summary,
        )
        logger.info(
            f"Validated {len(topology.regions)} region(s): "
            f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)"
        )
        return report

    def _check_sensing(self, region: Region) -> list[Finding]:
        findings = []
        if region.sensors and not region.sdccs:
            findings.append(Finding(
                ERROR, Rule.EQ1,
                f"Region {region.region_id} has sensors but no SDCC",
                region=region.region_id,
            ))
        for sdcc in region.sdccs:
            live = len(region.live_sensors_of(sdcc.sdcc_id))
            key = f"sdcc:{sdcc.sdcc_id}"
            if sdcc.tau > live:
                findings.append(Finding(
                    ERROR, Rule.EQ1,
                    f"SDCC {sdcc.sdcc_id}: tau={sdcc.tau} exceeds {live} live assigned sensor(s)",
                    region=region.region_id, entity=key,
                ))
            if live < 2:
                findings.append(Finding(
                    WARNING, Rule.EQ1,
                    f"SDCC {sdcc.sdcc_id}: only {live} live sensor(s); sensor count should be much greater than 1",
                    region=region.region_id, entity=key,
                ))
        return findings

    def _check_mule_counts(
        self,
        region: Region,
        pairs: list[tuple[int, int]],
        summary: dict[int, dict[str, int]],
    ) -> list[Finding]:
        sdcc_ids = {s.sdcc_id for s in region.sdccs}
        dpc_ids = {d.dpc_id for d in region.dpcs}
        # Collapsed SDCCs and DPCs talk directly and need no MAP legs.
        collapsed_sdccs = {s for s, _ in pairs if s in sdcc_ids}
        collapsed_dpcs = {d for _, d in pairs if d in dpc_ids}

        r_eff = len(region.sdccs) - len(collapsed_sdccs)
        t_eff = len([d for d in region.dpcs if d.dpc_id not in collapsed_dpcs])
        j = len(region.maps)
        summary[region.region_id] = {
            "sensors": len(region.sensors),
            "live_sensors": sum(1 for s in region.sensors if s.live),
            "sdccs": len(region.sdccs),
            "dpcs": len(region.dpcs),
            "maps": j,
            "sdccs_needing_maps": r_eff,
            "dpcs_needing_maps": t_eff,
        }

        findings = []
        if j < r_eff:
            findings.append(Finding(
                ERROR, Rule.EQ2,
                f"Region {region.region_id}: {j} MAP(s) < {r_eff} non-collapsed SDCC(s)",
                region=region.region_id,
            ))
        if j < t_eff:
            findings.append(Finding(
                ERROR, Rule.EQ2,
                f"Region {region.region_id}: {j} MAP(s) < {t_eff} non-collapsed DPC(s)",
                region=region.region_id,
            ))
        return findings

    def _check_routes(self, region: Region) -> list[Finding]:
        findings = []
        sdccs = {s.sdcc_id: s for s in region.sdccs}
        dpcs = {d.dpc_id: d for d in region.dpcs}
        for map_unit in region.maps:
            reaches_sdcc = any(
                route_visits(map_unit, sdccs[s].position) for s in map_unit.sdccs if s in sdccs
            )
            reaches_dpc = any(
                route_visits(map_unit, dpcs[d].position) for d in map_unit.dpcs if d in dpcs
            )
            if not reaches_sdcc and not reaches_dpc:
                findings.append(Finding(
                    ERROR, Rule.ROUTE,
                    f"MAP {map_unit.map_id}: route reaches neither its SDCC(s) nor its DPC(s)",
                    region=region.region_id, entity=f"map:{map_unit.map_id}",
                ))
        return findings

    def _check_coverage(self, region: Region) -> list[Finding]:
        findings = []
        dpcs = {d.dpc_id: d for d in region.dpcs}
        for sdcc in region.sdccs:
            if sdcc.collapsed_with is not None:
                continue
            served = any(
                sdcc.sdcc_id in m.sdccs
                and route_visits(m, sdcc.position)
                and any(route_visits(m, dpcs[d].position) for d in m.dpcs if d in dpcs)
                for m in region.maps
            )
            if not served:
                findings.append(Finding(
                    ERROR, Rule.COVERAGE,
                    f"SDCC {sdcc.sdcc_id}: no MAP route visits it and a DPC",
                    region=region.region_id, entity=f"sdcc:{sdcc.sdcc_id}",
                ))
        return findings

    def _check_peers(self, region: Region) -> list[Finding]:
        if len(region.dpcs) < 2:
            return []
        graph = nx.Graph()
        ids = {d.dpc_id for d in region.dpcs}
        graph.add_nodes_from(sorted(ids))
        findings = []
        for dpc in region.dpcs:
            for peer in dpc.peers:
                if peer not in ids:
                    findings.append(Finding(
                        ERROR, Rule.PEERS,
                        f"DPC {dpc.dpc_id}: peer {peer} is not a DPC of region {region.region_id}",
                        region=region.region_id, entity=f"dpc:{dpc.dpc_id}",
                    ))
                    continue
                graph.add_edge(dpc.dpc_id, peer)
        if not nx.is_connected(graph):
            parts = [sorted(c) for c in nx.connected_components(graph)]
            findings.append(Finding(
                ERROR, Rule.PEERS,
                f"Region {region.region_id}: DPC network is split into {parts}",
                region=region.region_id,
            ))
        return findings

    def _check_cdc_ratio(self, topology: Topology) -> list[Finding]:
        total = sum(len(r.dpcs) for r in topology.regions)
        c = topology.cdc_dcc.cdc_count
        if total <= c:
            return [Finding(
                WARNING, Rule.EQ3,
                f"{total} DPC(s) across all areas should be much greater than {c} CDC(s)",
            )]
        return []


def validate_topology(topology: Topology) -> ValidationReport:
    """Validate a topology; pure, same input gives an identical report."""
    return TopologyValidator().validate(topology)
