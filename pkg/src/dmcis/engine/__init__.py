"""Discrete-event engine: scheduler, random streams, trace and metrics."""

from dmcis.engine.events import (
    MOBILITY_DRAW_KINDS,
    SENSOR_DRAW_KINDS,
    STOCHASTIC_KINDS,
    EventKind,
    EventQueue,
    SchedulingError,
    SimEvent,
    stochastic_kinds,
)
from dmcis.engine.metrics import (
    Metrics,
    collect_metrics,
    custody_chains,
    metrics_from_file,
    queue_series,
)
from dmcis.engine.rng import RandomStreams
from dmcis.engine.simulation import Simulation, SimulationResult, ValidationFailed, run
from dmcis.engine.trace import (
    TRACE_SCHEMA_VERSION,
    TraceError,
    TraceRecorder,
    load_trace,
    parse_trace,
    trace_digest,
)

__all__ = [
    "MOBILITY_DRAW_KINDS",
    "SENSOR_DRAW_KINDS",
    "STOCHASTIC_KINDS",
    "EventKind",
    "stochastic_kinds",
    "EventQueue",
    "SchedulingError",
    "SimEvent",
    "Metrics",
    "collect_metrics",
    "custody_chains",
    "metrics_from_file",
    "queue_series",
    "RandomStreams",
    "Simulation",
    "SimulationResult",
    "ValidationFailed",
    "run",
    "TRACE_SCHEMA_VERSION",
    "TraceError",
    "TraceRecorder",
    "load_trace",
    "parse_trace",
    "trace_digest",
]
