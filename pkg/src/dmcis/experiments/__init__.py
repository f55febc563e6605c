"""Experiment harness: parameter sweeps over a base scenario."""

from dmcis.experiments.sweep import (
    SweepOutcome,
    SweepParameter,
    SweepSpec,
    aggregate,
    apply_parameter,
    parse_values,
    run_sweep,
    window_count,
)

__all__ = [
    "SweepOutcome",
    "SweepParameter",
    "SweepSpec",
    "aggregate",
    "apply_parameter",
    "parse_values",
    "run_sweep",
    "window_count",
]
