"""Round-robin partitioning of batches across the DPCs of a region."""

import math
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Sequence


class RoundRobinPartitioner:
    """Hands out DPC ids of each region in a fixed cyclic order.

    The cycle is the region's DPC ids sorted ascending; the cursor is
    per region and advances once per assignment.
    """

    def __init__(self, dpcs_by_region: Mapping[int, Sequence[int]]) -> None:
        self._cycle = {region: sorted(ids) for region, ids in dpcs_by_region.items()}
        self._cursor = {region: 0 for region in self._cycle}

    def next_dpc(self, region: int) -> int:
        cycle = self._cycle.get(region)
        if not cycle:
            raise ValueError(f"Region {region} has no DPC to process its data")
        dpc_id = cycle[self._cursor[region] % len(cycle)]
        self._cursor[region] += 1
        return dpc_id


@dataclass
class LoadPlan:
    """Batches per DPC and the resulting makespan.

    Attributes:
        assignment: DPC id -> batch keys in FIFO order
        service_times: DPC id -> seconds per batch
    """
    assignment: dict[int, list[Hashable]] = field(default_factory=dict)
    service_times: dict[int, float] = field(default_factory=dict)

    @property
    def makespan(self) -> float:
        """Completion time of the last batch when all start at time zero."""
        if not self.assignment:
            return 0.0
        return max(len(batches) * self.service_times[d] for d, batches in self.assignment.items())

    def to_dict(self) -> dict[str, Any]:
        return {
            "assignment": {str(d): list(b) for d, b in sorted(self.assignment.items())},
            "makespan": self.makespan,
        }


def partition_load(
    pending: Sequence[Hashable],
    dpc_ids: Sequence[int],
    service_time: float | Mapping[int, float] = 5.0,
) -> LoadPlan:
    """Assign pending batches round-robin, in arrival order, across DPCs.

    With a uniform service time s, the makespan is ceil(B / k) * s.
    """
    if not dpc_ids:
        raise ValueError("At least one DPC is required")
    ids = sorted(dpc_ids)
    if isinstance(service_time, Mapping):
        times = {d: float(service_time[d]) for d in ids}
    else:
        times = {d: float(service_time) for d in ids}

    partitioner = RoundRobinPartitioner({0: ids})
    plan = LoadPlan(assignment={d: [] for d in ids}, service_times=times)
    for item in pending:
        plan.assignment[partitioner.next_dpc(0)].append(item)
    return plan


def uniform_makespan(batches: int, dpcs: int, service_time: float) -> float:
    """ceil(B / k) * s."""
    return math.ceil(batches / dpcs) * service_time if batches else 0.0
