"""Engine-owned runtime state of a Data Processing Center."""

from collections import deque
from dataclasses import dataclass
from typing import Optional

from dmcis.core.logging import get_logger
from dmcis.core.models import DataBundle, DisasterRecord, Dpc, ProcessedReport

logger = get_logger("processing")


@dataclass
class ProcessingJob:
    """A queued unit of DPC work: a fresh bundle or a report to reprocess."""
    bundle: DataBundle
    arrival: float
    report: Optional[ProcessedReport] = None
    path: tuple[str, ...] = ()


class DpcStation:
    """FIFO work queue, history and peer replicas of one DPC.

    Attributes:
        dpc: Static configuration
        queue: Jobs waiting for service; reprocess jobs go to the head
        history: History database, seeded from the scenario
        replicas: Reports received from peers, available to reprocess
        busy: Whether a job is in service
    """

    def __init__(self, dpc: Dpc) -> None:
        self.dpc = dpc
        self.queue: deque[ProcessingJob] = deque()
        self.history: list[DisasterRecord] = list(dpc.history_db)
        self.replicas: list[ProcessedReport] = []
        self.busy = False
        self.passed = 0
        self.max_queue = 0

    @property
    def dpc_id(self) -> int:
        return self.dpc.dpc_id

    def enqueue(self, job: ProcessingJob, urgent: bool = False) -> int:
        if urgent:
            self.queue.appendleft(job)
        else:
            self.queue.append(job)
        self.max_queue = max(self.max_queue, len(self.queue))
        return len(self.queue)

    def next_job(self) -> Optional[ProcessingJob]:
        if self.busy or not self.queue:
            return None
        self.busy = True
        return self.queue.popleft()

    def finish(self) -> None:
        self.busy = False

    def replicate(self, report: ProcessedReport) -> list[int]:
        """Peers that receive a copy of a passed report; len() is the ack count."""
        peers = sorted(self.dpc.peers)
        logger.debug(f"DPC {self.dpc_id}: replicating report {report.report_id} to {peers}")
        return peers

    def receive_replica(self, report: ProcessedReport) -> None:
        self.replicas.append(report)

    def peer_reports(self, area_id: int, since: float) -> list[ProcessedReport]:
        return [r for r in self.replicas if r.area_id == area_id and r.created_time >= since]

    def forward_to_cdc(self, report: ProcessedReport) -> DisasterRecord:
        """Record a passed report in the local history before it leaves for the CDC."""
        record = DisasterRecord(
            area_id=report.area_id,
            hazard_class=report.hazard_class,
            feature_vector=report.feature_vector,
            occurred_time=report.created_time,
            outcome=f"report {report.report_id}",
        )
        self.history.append(record)
        self.passed += 1
        logger.debug(f"DPC {self.dpc_id}: report {report.report_id} forwarded to CDC")
        return record
