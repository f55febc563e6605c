"""Run orchestration: load, validate, simulate and write run outputs.

Coordinates the pipeline behind ``dmcis run`` and every sweep point.
"""

import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Any, Optional

from dmcis.core.logging import get_logger

if TYPE_CHECKING:
    from dmcis.core.models import Scenario
    from dmcis.engine import SimulationResult

logger = get_logger("orchestrator")

TRACE_FILE = "trace.jsonl"
METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "summary.md"
DIGEST_FILE = "trace.sha256"
QUEUE_FILE = "queue_series.csv"


def write_atomic(path: Path, text: str) -> None:
    """Write text so readers never observe a partially written file.

    Raises:
        OSError: If the directory is not writable
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def metrics_frame(results: list["SimulationResult"], **extra: Any) -> Any:
    """One metrics row per run as a pandas DataFrame."""
    import pandas as pd

    rows = [
        {**extra, "scenario": r.scenario, "seed": r.seed, "horizon": r.horizon, **r.metrics.to_row()}
        for r in results
    ]
    return pd.DataFrame(rows)


def queue_frame(result: "SimulationResult") -> Any:
    """Per-DPC queue length after every change, as columns t, dpc, length."""
    import pandas as pd

    from dmcis.engine import queue_series

    rows = [
        {"t": t, "dpc": dpc_id, "length": length}
        for dpc_id, points in sorted(queue_series(result.records).items())
        for t, length in points
    ]
    frame = pd.DataFrame(rows, columns=["t", "dpc", "length"])
    return frame.sort_values(["t", "dpc"], kind="stable", ignore_index=True)


class SimulationRunner:
    """Runs a scenario and writes its output files.

    Output layout of ``out_dir``:
        trace.jsonl   one JSON record per line
        metrics.csv   one row for the run
        queue_series.csv  per-DPC queue length after every change
        summary.md    human-readable summary
        trace.sha256  digest of trace.jsonl in sha256sum format

    Attributes:
        out_dir: Directory the files are written to (created if missing)
    """

    def __init__(self, out_dir: Path) -> None:
        self.out_dir = out_dir

    def execute(
        self,
        scenario: "Scenario",
        seed: Optional[int] = None,
        horizon: Optional[float] = None,
    ) -> "SimulationResult":
        """Validate, run and write outputs.

        Raises:
            ValidationFailed: If the topology has ERROR findings
            OSError: If an output file cannot be written
        """
        from dmcis.engine import run

        result = run(scenario, seed=seed, horizon=horizon)
        self.write(result)
        return result

    def write(self, result: "SimulationResult", **extra: Any) -> dict[str, Path]:
        """Write the output files of a finished run.

        Args:
            result: Finished run
            **extra: Leading metrics.csv columns (e.g. sweep parameter and value)

        Returns:
            Mapping of file role to written path
        """
        from dmcis.reporters import MarkdownReporter

        paths = {
            "trace": self.out_dir / TRACE_FILE,
            "metrics": self.out_dir / METRICS_FILE,
            "summary": self.out_dir / SUMMARY_FILE,
            "digest": self.out_dir / DIGEST_FILE,
            "queue": self.out_dir / QUEUE_FILE,
        }
        trace_text = result.trace.text()
        write_atomic(paths["trace"], trace_text)
        write_atomic(paths["metrics"], metrics_frame([result], **extra).to_csv(index=False))
        write_atomic(paths["queue"], queue_frame(result).to_csv(index=False))
        write_atomic(paths["summary"], MarkdownReporter().run_summary(result))
        write_atomic(paths["digest"], f"{result.digest}  {TRACE_FILE}\n")
        logger.info(f"Wrote {len(result.trace)} trace record(s) to {self.out_dir}")
        return paths
