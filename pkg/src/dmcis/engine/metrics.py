"""Run metrics, computed from trace records alone."""

from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np

from dmcis.engine.trace import load_trace


@dataclass
class Metrics:
    """Summary of one run.

    Attributes:
        warning_latency: hazard id -> onset to first warning delivery (s)
        detection_latency: hazard id -> onset to first truthful trigger (s)
        false_warning_count: Warnings whose source batches hold no truthful reading
        missed_event_count: Hazards with no warning before the horizon
        delivery_ratio: Delivered / created bundles
        map_utilization: Session time / (MAP count x horizon)
        dpc_makespan: First DPC arrival to last processing completion (s)
        channel_block_count: Session requests refused for lack of a channel
        exceedance_windows: SDCC windows holding at least tau distinct sensors
        sms_first: provider name -> earliest first delivery over all orders
        sms_last: provider name -> latest last delivery over all orders
    """
    warning_latency: dict[int, float] = field(default_factory=dict)
    detection_latency: dict[int, float] = field(default_factory=dict)
    false_warning_count: int = 0
    missed_event_count: int = 0
    delivery_ratio: float = 0.0
    map_utilization: float = 0.0
    dpc_makespan: float = 0.0
    channel_block_count: int = 0
    hazards: int = 0
    exceedance_windows: int = 0
    triggers: int = 0
    bundles_created: int = 0
    bundles_delivered: int = 0
    warnings: int = 0
    dispatches: int = 0
    bypass_dispatches: int = 0
    reprocessed: int = 0
    rejected: int = 0
    sessions: int = 0
    last_completion: float = 0.0
    max_queue: dict[int, int] = field(default_factory=dict)
    peak_sessions: dict[str, int] = field(default_factory=dict)
    sms_first: dict[str, float] = field(default_factory=dict)
    sms_last: dict[str, float] = field(default_factory=dict)

    @property
    def mean_warning_latency(self) -> Optional[float]:
        return _mean(self.warning_latency.values())

    @property
    def mean_detection_latency(self) -> Optional[float]:
        return _mean(self.detection_latency.values())

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["warning_latency"] = {str(k): v for k, v in sorted(self.warning_latency.items())}
        data["detection_latency"] = {str(k): v for k, v in sorted(self.detection_latency.items())}
        data["max_queue"] = {str(k): v for k, v in sorted(self.max_queue.items())}
        data["mean_warning_latency"] = self.mean_warning_latency
        data["mean_detection_latency"] = self.mean_detection_latency
        return data

    def to_row(self) -> dict[str, Any]:
        """Flat record for one metrics CSV row."""
        row: dict[str, Any] = {
            "warning_latency": self.mean_warning_latency,
            "detection_latency": self.mean_detection_latency,
            "false_warning_count": self.false_warning_count,
            "missed_event_count": self.missed_event_count,
            "delivery_ratio": self.delivery_ratio,
            "map_utilization": self.map_utilization,
            "dpc_makespan": self.dpc_makespan,
            "channel_block_count": self.channel_block_count,
            "hazards": self.hazards,
            "exceedance_windows": self.exceedance_windows,
            "triggers": self.triggers,
            "bundles_created": self.bundles_created,
            "bundles_delivered": self.bundles_delivered,
            "warnings": self.warnings,
            "dispatches": self.dispatches,
            "bypass_dispatches": self.bypass_dispatches,
            "reprocessed": self.reprocessed,
            "rejected": self.rejected,
            "sessions": self.sessions,
            "last_completion": self.last_completion,
        }
        for dpc_id, length in sorted(self.max_queue.items()):
            row[f"max_queue_dpc_{dpc_id}"] = length
        for name in sorted(self.sms_first):
            row[f"sms_first_{name}"] = self.sms_first[name]
            row[f"sms_last_{name}"] = self.sms_last[name]
        return row


def _mean(values: Iterable[float]) -> Optional[float]:
    vals = list(values)
    return float(np.mean(vals)) if vals else None


def collect_metrics(records: Iterable[dict[str, Any]]) -> Metrics:
    """Compute Metrics from trace records in emission order.

    Pure function of the records: the same trace always gives the same
    numbers.
    """
    metrics = Metrics()
    horizon = 0.0
    maps = 0
    onsets: dict[int, float] = {}
    first_warning: dict[int, float] = {}
    first_trigger: dict[int, float] = {}
    open_sessions: dict[tuple[Any, Any, Any], float] = {}
    active: dict[str, int] = defaultdict(int)
    session_time = 0.0
    first_arrival: Optional[float] = None

    for record in records:
        kind = record["kind"]
        t = float(record["t"])
        if kind == "run":
            horizon = float(record.get("horizon", 0.0))
            maps = int(record.get("maps", 0))
        elif kind == "hazard":
            onsets.setdefault(int(record["hazard"]), t)
        elif kind == "exceedance":
            metrics.exceedance_windows += 1
        elif kind == "trigger":
            metrics.triggers += 1
            for hazard_id in record.get("truth", []):
                first_trigger.setdefault(int(hazard_id), t)
        elif kind == "bundle":
            metrics.bundles_created += 1
        elif kind == "delivery":
            metrics.bundles_delivered += 1
            if first_arrival is None:
                first_arrival = t
        elif kind == "session":
            key = (record["map"], record["endpoint"], record["channel"])
            endpoint = str(record["endpoint"])
            if record["state"] == "open":
                metrics.sessions += 1
                open_sessions[key] = t
                active[endpoint] += 1
                metrics.peak_sessions[endpoint] = max(
                    metrics.peak_sessions.get(endpoint, 0), active[endpoint]
                )
            else:
                start = open_sessions.pop(key, t)
                session_time += t - start
                active[endpoint] -= 1
        elif kind == "blocked":
            metrics.channel_block_count += 1
        elif kind == "queue":
            dpc_id = int(record["dpc"])
            metrics.max_queue[dpc_id] = max(metrics.max_queue.get(dpc_id, 0), int(record["length"]))
        elif kind == "process":
            metrics.last_completion = max(metrics.last_completion, t)
        elif kind == "verdict":
            if record["verdict"] == "reject":
                metrics.rejected += 1
        elif kind == "reprocess":
            metrics.reprocessed += 1
        elif kind == "warning":
            metrics.warnings += 1
            truth = record.get("truth", [])
            if not truth:
                metrics.false_warning_count += 1
            delivered = float(record.get("first_delivery", t))
            for hazard_id in truth:
                hazard_id = int(hazard_id)
                first_warning[hazard_id] = min(first_warning.get(hazard_id, delivered), delivered)
        elif kind == "sms":
            name = str(record["name"])
            first, last = float(record["first"]), float(record["last"])
            metrics.sms_first[name] = min(metrics.sms_first.get(name, first), first)
            metrics.sms_last[name] = max(metrics.sms_last.get(name, last), last)
        elif kind == "dispatch":
            metrics.dispatches += 1
            if record.get("bypass"):
                metrics.bypass_dispatches += 1

    for start in open_sessions.values():
        session_time += max(0.0, horizon - start)

    metrics.hazards = len(onsets)
    metrics.warning_latency = {
        h: first_warning[h] - onset for h, onset in sorted(onsets.items()) if h in first_warning
    }
    metrics.detection_latency = {
        h: first_trigger[h] - onset for h, onset in sorted(onsets.items()) if h in first_trigger
    }
    metrics.missed_event_count = sum(1 for h in onsets if h not in first_warning)
    if metrics.bundles_created:
        metrics.delivery_ratio = metrics.bundles_delivered / metrics.bundles_created
    if maps and horizon > 0:
        metrics.map_utilization = min(1.0, session_time / (maps * horizon))
    if first_arrival is not None and metrics.last_completion >= first_arrival:
        metrics.dpc_makespan = metrics.last_completion - first_arrival
    return metrics


def metrics_from_file(path: Path) -> Metrics:
    return collect_metrics(load_trace(path))


def queue_series(records: Iterable[dict[str, Any]]) -> dict[int, list[tuple[float, int]]]:
    """Per-DPC queue length over time, one point per queue change."""
    series: dict[int, list[tuple[float, int]]] = defaultdict(list)
    for record in records:
        if record["kind"] == "queue":
            series[int(record["dpc"])].append((float(record["t"]), int(record["length"])))
    return dict(series)


def custody_chains(records: Iterable[dict[str, Any]]) -> dict[int, list[str]]:
    """Bundle id -> holder keys in custody order, rebuilt from the trace."""
    chains: dict[int, list[str]] = {}
    for record in records:
        if record["kind"] == "bundle":
            chains[int(record["bundle"])] = [f"sdcc:{record['sdcc']}"]
        elif record["kind"] == "custody":
            chains.setdefault(int(record["bundle"]), []).append(str(record["to"]))
    return chains
