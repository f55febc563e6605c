"""Level three: DPC processing, confidence loop and load partitioning."""

from dmcis.processing.partition import (
    LoadPlan,
    RoundRobinPartitioner,
    partition_load,
    uniform_makespan,
)
from dmcis.processing.scoring import (
    CoverageModel,
    ProcessingError,
    agreement,
    check_confidence,
    process_batch,
    reprocess,
)
from dmcis.processing.station import DpcStation, ProcessingJob

__all__ = [
    "LoadPlan",
    "RoundRobinPartitioner",
    "partition_load",
    "uniform_makespan",
    "CoverageModel",
    "ProcessingError",
    "agreement",
    "check_confidence",
    "process_batch",
    "reprocess",
    "DpcStation",
    "ProcessingJob",
]
