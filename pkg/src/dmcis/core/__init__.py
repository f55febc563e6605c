"""Core module for dmcis data models, logging and run orchestration."""

from dmcis.core.logging import get_logger, setup_logging
from dmcis.core.orchestrator import SimulationRunner, metrics_frame, queue_frame, write_atomic

__all__ = [
    "get_logger",
    "setup_logging",
    "SimulationRunner",
    "metrics_frame",
    "queue_frame",
    "write_atomic",
]
