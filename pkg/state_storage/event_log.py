"""
Append-only audit log, one JSON record per line.

Writes always go to the end of the file and every line is flushed and fsynced
before append returns. Versions in a log are strictly consecutive. A crash can
leave at most one incomplete trailing line, which readers drop when recovering.
"""

import json
import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import Field, ValidationError

from errors import LogCorruptionError, LogGapError
from learner_state.models import FrozenModel
from orchestrator.state_graph import AuditRecord
from orchestrator.triggers import Trigger

logger = logging.getLogger(__name__)


class EventRecord(FrozenModel):
    version: int = Field(ge=1)
    timestamp: str
    trigger_kind: str
    payload: dict
    accepted_deltas: list = Field(default_factory=list)
    rejected: list = Field(default_factory=list)
    agent_failures: list = Field(default_factory=list)
    state_digest: str = Field(pattern=r"^[0-9a-f]{64}$")
    latency_ms: float = 0.0
    status: str = "committed"
    error: str = ""

    @classmethod
    def from_audit(cls, audit: AuditRecord) -> "EventRecord":
        accepted = []
        rejected = []
        for outcome in audit.proposals:
            agent_id = outcome.proposal.agent_id
            if outcome.accepted:
                for delta in outcome.proposal.deltas:
                    accepted.append({"agent_id": agent_id, **delta.model_dump(mode="json")})
            else:
                rejected.append({"agent_id": agent_id, "reason": outcome.reason, "detail": outcome.detail})
        return cls(
            version=audit.version_after,
            timestamp=audit.trigger.timestamp.isoformat(),
            trigger_kind=audit.trigger.kind.value,
            payload=audit.trigger.payload.model_dump(mode="json"),
            accepted_deltas=accepted,
            rejected=rejected,
            agent_failures=[f.model_dump(mode="json") for f in audit.agent_failures],
            state_digest=audit.state_digest_after,
            latency_ms=audit.wall_time_ms,
            status=audit.status,
            error=audit.error,
        )

    def to_trigger(self) -> Trigger:
        return Trigger.model_validate({"timestamp": self.timestamp, "payload": self.payload})


def _parse_line(line: str, expected: int) -> EventRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise LogCorruptionError(expected, f"unparseable line: {e}") from e
    version = data.get("version", expected) if isinstance(data, dict) else expected
    try:
        return EventRecord.model_validate(data)
    except ValidationError as e:
        raise LogCorruptionError(version, f"invalid record: {e}") from e


def read_events(log_path, recover: bool = True, base_version: int = 0) -> list[EventRecord]:
    """
    Reads a log, checking that versions follow base_version consecutively.

    Args:
        log_path: Path to the JSONL log.
        recover (bool): Drop an incomplete trailing line instead of failing.
        base_version (int): Version of the state the log starts from.

    Returns:
        list: EventRecord entries in order.

    Raises:
        LogCorruptionError: a bad line before the end, or a bad tail without recover.
        LogGapError: versions are not consecutive.
    """
    path = Path(log_path)
    if not path.exists():
        return []
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()

    lines = text.split("\n")
    tail = lines.pop()
    records = []
    expected = base_version + 1
    for line in lines:
        if not line.strip():
            raise LogCorruptionError(expected, "empty line")
        record = _parse_line(line, expected)
        if record.version != expected:
            raise LogGapError(expected, record.version)
        records.append(record)
        expected += 1

    if tail.strip():
        try:
            record = _parse_line(tail, expected)
        except LogCorruptionError:
            if not recover:
                raise
            logger.warning("Dropping incomplete trailing line of %s (version %d)", path, expected)
        else:
            if record.version != expected:
                raise LogGapError(expected, record.version)
            records.append(record)
    return records


def repair_log(log_path) -> int:
    """Truncates an incomplete trailing line; returns the number of bytes removed."""
    path = Path(log_path)
    if not path.exists():
        return 0
    data = path.read_bytes()
    if not data or data.endswith(b"\n"):
        return 0
    keep = data.rfind(b"\n") + 1
    tail = data[keep:]
    try:
        EventRecord.model_validate_json(tail)
    except ValidationError:
        with open(path, "r+b") as f:
            f.truncate(keep)
        logger.warning("Truncated %d bytes of incomplete record from %s", len(tail), path)
        return len(tail)
    with open(path, "ab") as f:
        f.write(b"\n")
    return 0


def _write_line(path: Path, record: EventRecord) -> None:
    with open(path, "a", encoding="utf-8") as f:
        f.write(record.model_dump_json() + "\n")
        f.flush()
        os.fsync(f.fileno())


def append_event(log_path, record: EventRecord, base_version: int = 0) -> None:
    """
    Appends one record after checking it continues the log.

    Raises:
        LogGapError: record.version is not the last version + 1.
    """
    records = read_events(log_path, recover=True, base_version=base_version)
    last = records[-1].version if records else base_version
    if record.version != last + 1:
        raise LogGapError(last + 1, record.version)
    repair_log(log_path)
    _write_line(Path(log_path), record)


class EventLog:
    """Appender that remembers the last version instead of rescanning the file."""

    def __init__(self, log_path, base_version: int = 0, last_version: Optional[int] = None):
        self.path = Path(log_path)
        self.base_version = base_version
        if last_version is None:
            repair_log(self.path)
            records = read_events(self.path, recover=True, base_version=base_version)
            last_version = records[-1].version if records else base_version
        self.last_version = last_version

    def append(self, record: EventRecord) -> None:
        if record.version != self.last_version + 1:
            raise LogGapError(self.last_version + 1, record.version)
        _write_line(self.path, record)
        self.last_version = record.version

    def read(self, recover: bool = True) -> list[EventRecord]:
        return read_events(self.path, recover=recover, base_version=self.base_version)
