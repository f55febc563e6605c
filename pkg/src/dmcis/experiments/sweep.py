"""Parameter sweeps: one run per (value, replication), aggregated with pandas.

Replications of a value differ only by seed (``base_seed + index``).
Points whose modified topology fails validation are skipped and
reported; the remaining points still run.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

import pandas as pd

from dmcis.analysis import apply_collapse, validate_topology
from dmcis.core.logging import get_logger
from dmcis.core.models import LinkSpec, LinkStandard, Region, Scenario, Topology
from dmcis.core.orchestrator import SimulationRunner, write_atomic
from dmcis.sensing import ConfigurationError, cluster_topology

logger = get_logger("sweep")

SweepValue = Union[int, float, str]

AGGREGATED = (
    "warning_latency",
    "detection_latency",
    "false_warning_count",
    "missed_event_count",
    "delivery_ratio",
    "map_utilization",
    "dpc_makespan",
    "channel_block_count",
    "last_completion",
    "triggers",
    "trigger_rate",
    "exceedance_windows",
    "exceedance_rate",
)


class SweepParameter(Enum):
    """Scenario parameter a sweep varies."""
    TAU = "tau"
    MAP_COUNT = "map_count"
    LINK_STANDARD = "link_standard"
    MATCH_THRESHOLD = "match_threshold"
    DPC_COUNT = "dpc_count"


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and how often.

    Attributes:
        parameter: Parameter to vary
        values: Values in sweep order
        replications: Runs per value
        base_seed: Seed of replication 0
    """
    parameter: SweepParameter
    values: tuple[SweepValue, ...]
    replications: int = 1
    base_seed: int = 0

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("Sweep values must not be empty")
        if self.replications < 1:
            raise ValueError("Sweep replications must be >= 1")

    def seeds(self) -> list[int]:
        return [self.base_seed + r for r in range(self.replications)]


@dataclass
class SweepOutcome:
    """Per-run rows, per-value aggregate and skipped points."""
    spec: SweepSpec
    rows: pd.DataFrame
    aggregate: pd.DataFrame
    skipped: list[tuple[SweepValue, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.skipped


def parse_values(parameter: SweepParameter, raw: list[str]) -> tuple[SweepValue, ...]:
    """Convert command-line strings to typed sweep values.

    Raises:
        ValueError: If a value does not fit the parameter
    """
    values: list[SweepValue] = []
    for item in raw:
        for token in str(item).split(","):
            token = token.strip()
            if not token:
                continue
            if parameter is SweepParameter.LINK_STANDARD:
                values.append(_link_standard(token).value)
            elif parameter is SweepParameter.MATCH_THRESHOLD:
                values.append(float(token))
            else:
                values.append(int(token))
    return tuple(values)


def _link_standard(value: str) -> LinkStandard:
    aliases = {"b": LinkStandard.B, "g": LinkStandard.G, "a": LinkStandard.A}
    if value.lower() in aliases:
        return aliases[value.lower()]
    return LinkStandard(value)


def apply_parameter(scenario: Scenario, parameter: SweepParameter, value: SweepValue) -> Scenario:
    """Return a copy of the scenario with one parameter set.

    map_count and dpc_count are applied per area: extra entities are
    dropped by descending id, missing ones cloned from the highest id.
    DPC clones are co-located with their template and served by the
    same MAPs; the DPCs of an area are re-meshed as full peers.

    Raises:
        ValueError: If the value is out of range for the parameter
    """
    topology = scenario.topology
    if parameter is SweepParameter.TAU:
        tau = int(value)
        topology = _map_regions(topology, lambda r: replace(
            r, sdccs=tuple(replace(s, tau=tau) for s in r.sdccs)
        ))
    elif parameter is SweepParameter.LINK_STANDARD:
        link = LinkSpec.for_standard(_link_standard(str(value)))
        topology = _map_regions(topology, lambda r: replace(
            r,
            sdccs=tuple(replace(s, link=link) for s in r.sdccs),
            maps=tuple(replace(m, link=link) for m in r.maps),
            dpcs=tuple(replace(d, link=link) for d in r.dpcs),
        ))
    elif parameter is SweepParameter.MATCH_THRESHOLD:
        topology = replace(topology, cdc_dcc=replace(topology.cdc_dcc, match_threshold=float(value)))
    elif parameter is SweepParameter.MAP_COUNT:
        count = int(value)
        next_id = max((m.map_id for m in topology.iter_maps()), default=0) + 1
        regions = []
        for region in topology.regions:
            region, next_id = _resize_maps(region, count, next_id)
            regions.append(region)
        topology = replace(topology, regions=tuple(regions))
    elif parameter is SweepParameter.DPC_COUNT:
        count = int(value)
        next_id = max((d.dpc_id for d in topology.iter_dpcs()), default=0) + 1
        regions = []
        for region in topology.regions:
            region, next_id = _resize_dpcs(region, count, next_id)
            regions.append(region)
        topology = replace(topology, regions=tuple(regions))
    return replace(scenario, topology=topology)


def _map_regions(topology: Topology, fn: Any) -> Topology:
    return replace(topology, regions=tuple(fn(r) for r in topology.regions))


def _resize_maps(region: Region, count: int, next_id: int) -> tuple[Region, int]:
    if count < 0:
        raise ValueError("map_count must be >= 0")
    maps = sorted(region.maps, key=lambda m: m.map_id)[:count]
    if len(maps) < count:
        if not maps:
            raise ValueError(f"Region {region.region_id} has no MAP to clone")
        template = maps[-1]
        while len(maps) < count:
            maps.append(replace(template, map_id=next_id))
            next_id += 1
    return replace(region, maps=tuple(maps)), next_id


def _resize_dpcs(region: Region, count: int, next_id: int) -> tuple[Region, int]:
    if count < 1:
        raise ValueError("dpc_count must be >= 1")
    dpcs = sorted(region.dpcs, key=lambda d: d.dpc_id)[:count]
    if not dpcs:
        raise ValueError(f"Region {region.region_id} has no DPC to clone")
    template = dpcs[-1]
    clones = []
    while len(dpcs) + len(clones) < count:
        clones.append(replace(template, dpc_id=next_id))
        next_id += 1
    dpcs.extend(clones)
    ids = [d.dpc_id for d in dpcs]
    dpcs = [replace(d, peers=tuple(i for i in ids if i != d.dpc_id)) for d in dpcs]

    kept = set(ids)
    clone_ids = tuple(c.dpc_id for c in clones)
    maps = []
    for map_unit in region.maps:
        served = tuple(d for d in map_unit.dpcs if d in kept)
        if template.dpc_id in served:
            served += clone_ids
        maps.append(replace(map_unit, dpcs=served))
    return replace(region, dpcs=tuple(dpcs), maps=tuple(maps)), next_id


def window_count(topology: Topology, horizon: float) -> int:
    """Detection windows closed before the horizon, over all SDCCs."""
    total = 0
    for sdcc in topology.iter_sdccs():
        total += max(0, math.ceil(horizon / sdcc.window) - 1)
    return total


def _run_point(
    scenario: Scenario,
    parameter: str,
    value: SweepValue,
    replication: int,
    seed: int,
    horizon: Optional[float],
    out_dir: Optional[Path],
) -> dict[str, Any]:
    from dmcis.engine import run

    result = run(scenario, seed=seed, horizon=horizon)
    extra = {"parameter": parameter, "value": value, "replication": replication}
    if out_dir is not None:
        SimulationRunner(out_dir / f"{parameter}={value}" / f"rep{replication}").write(result, **extra)
    windows = window_count(scenario.topology, result.horizon)
    return {
        **extra,
        "scenario": result.scenario,
        "seed": result.seed,
        "horizon": result.horizon,
        **result.metrics.to_row(),
        "windows": windows,
        "trigger_rate": result.metrics.triggers / windows if windows else float("nan"),
        "exceedance_rate": result.metrics.exceedance_windows / windows if windows else float("nan"),
        "trace_sha256": result.digest,
    }


def check_point(scenario: Scenario) -> Optional[str]:
    """First validation error of a sweep point, or None if it can run."""
    try:
        topology = apply_collapse(cluster_topology(scenario.topology))
    except ConfigurationError as e:
        return str(e)
    report = validate_topology(topology)
    if report.ok:
        return None
    first = report.errors[0]
    return f"{first.label()} {first.message}"


def aggregate(rows: pd.DataFrame) -> pd.DataFrame:
    """Mean and standard error per sweep value, in sweep order."""
    columns = [c for c in AGGREGATED if c in rows.columns]
    if rows.empty:
        return pd.DataFrame(columns=["value", "runs"] + [f"{c}_{s}" for c in columns for s in ("mean", "sem")])
    numeric = rows[columns].apply(pd.to_numeric, errors="coerce")
    numeric.insert(0, "value", rows["value"])
    grouped = numeric.groupby("value", sort=False)
    summary = grouped[columns].agg(["mean", "sem"])
    summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
    summary.insert(0, "runs", grouped.size())
    return summary.reset_index()


def run_sweep(
    scenario: Scenario,
    spec: SweepSpec,
    out_dir: Optional[Path] = None,
    horizon: Optional[float] = None,
    jobs: int = 1,
) -> SweepOutcome:
    """Run every valid (value, replication) point of a sweep.

    Args:
        scenario: Base scenario
        spec: Sweep definition
        out_dir: If given, per-run outputs plus sweep_metrics.csv and
            sweep_summary.csv/.md are written here
        horizon: Override of the scenario horizon
        jobs: Worker processes; 1 runs in-process

    Returns:
        SweepOutcome with one row per executed run
    """
    parameter = spec.parameter.value
    points: list[tuple[Scenario, SweepValue, int, int]] = []
    skipped: list[tuple[SweepValue, str]] = []
    for value in spec.values:
        try:
            variant = apply_parameter(scenario, spec.parameter, value)
        except ValueError as e:
            problem: Optional[str] = str(e)
        else:
            problem = check_point(variant)
        if problem is not None:
            logger.warning(f"Sweep point {parameter}={value} skipped: {problem}")
            skipped.append((value, problem))
            continue
        for replication, seed in enumerate(spec.seeds()):
            points.append((variant, value, replication, seed))

    logger.info(f"Sweep over {parameter}: {len(points)} run(s), {len(skipped)} skipped value(s)")
    args = [(s, parameter, v, r, seed, horizon, out_dir) for s, v, r, seed in points]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_point, *zip(*args)))
    else:
        records = [_run_point(*a) for a in args]

    rows = pd.DataFrame(records)
    summary = aggregate(rows)
    outcome = SweepOutcome(spec=spec, rows=rows, aggregate=summary, skipped=skipped)

    if out_dir is not None:
        from dmcis.reporters import MarkdownReporter

        write_atomic(out_dir / "sweep_metrics.csv", rows.to_csv(index=False))
        write_atomic(out_dir / "sweep_summary.csv", summary.to_csv(index=False))
        write_atomic(out_dir / "sweep_summary.md", MarkdownReporter().sweep_table(summary, parameter))
    return outcome
