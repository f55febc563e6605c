"""JSON Lines run trace, its digest and a strict reader."""

import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Union

from dmcis.engine.events import EventKind

TRACE_SCHEMA_VERSION = 1

_REQUIRED = ("t", "seq", "kind")

# Fields the offline readers index directly, per record kind.
KIND_FIELDS: dict[str, tuple[str, ...]] = {
    "hazard": ("hazard",),
    "exceedance": ("sdcc",),
    "bundle": ("bundle", "sdcc"),
    "session": ("map", "endpoint", "channel", "state"),
    "custody": ("bundle", "to"),
    "queue": ("dpc", "length"),
    "verdict": ("verdict",),
    "sms": ("name", "first", "last"),
}


class TraceError(Exception):
    """Raised when a trace line cannot be parsed.

    Attributes:
        line_number: 1-based line of the offending record
    """

    def __init__(self, message: str, line_number: int) -> None:
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


def encode_record(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


class TraceRecorder:
    """Collects trace records in emission order.

    Each record carries the simulated time ``t``, a running ``seq`` and
    the ``kind``; timestamps are nondecreasing because records are only
    emitted while handling the current event.
    """

    def __init__(self) -> None:
        self.records: list[dict[str, Any]] = []

    def emit(self, time: float, kind: EventKind, **fields: Any) -> dict[str, Any]:
        record = {"t": time, "seq": len(self.records), "kind": kind.value, **fields}
        self.records.append(record)
        return record

    def lines(self) -> list[str]:
        return [encode_record(r) for r in self.records]

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    def digest(self) -> str:
        return trace_digest(self.text())

    def __len__(self) -> int:
        return len(self.records)


def trace_digest(text: Union[str, bytes]) -> str:
    """SHA-256 hex digest of the serialized trace."""
    data = text.encode("utf-8") if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()


def parse_trace(lines: Iterable[str]) -> list[dict[str, Any]]:
    """Decode trace lines; blank lines are skipped.

    Raises:
        TraceError: On invalid JSON, a non-object record or missing fields
    """
    records = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceError(f"invalid JSON ({e.msg})", number) from e
        if not isinstance(record, dict):
            raise TraceError("record is not an object", number)
        missing = [key for key in _REQUIRED if key not in record]
        if missing:
            raise TraceError(f"missing field(s) {', '.join(missing)}", number)
        if not isinstance(record["t"], (int, float)):
            raise TraceError("field 't' is not a number", number)
        kind = record["kind"]
        if not isinstance(kind, str):
            raise TraceError("field 'kind' is not a string", number)
        missing = [key for key in KIND_FIELDS.get(kind, ()) if key not in record]
        if missing:
            raise TraceError(f"{kind} record missing field(s) {', '.join(missing)}", number)
        records.append(record)
    return records


def load_trace(path: Path) -> list[dict[str, Any]]:
    with open(path, encoding="utf-8") as f:
        return parse_trace(f)
