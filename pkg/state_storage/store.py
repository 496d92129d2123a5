"""
File-based learner store.

One directory per learner:

    initial.json(.sha256)   version-0 snapshot the log replays from
    snapshot.json(.sha256)  latest committed state
    events.jsonl            audit log, versions 1..n
    config.json             constants fixed at init
    bank.json               problem bank fixed at init
    .lock                   present while a writer holds the directory
"""

import json
import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Sequence

from agents.backends import make_backend
from config import TutorConfig, load_config, save_config
from curriculum.bank import ProblemItem, load_bank
from errors import ReplayDivergenceError, StoreLockedError
from learner_state.models import LearnerState
from orchestrator.state_graph import AuditRecord, Orchestrator
from state_storage.canonical import state_digest
from state_storage.event_log import EventLog, EventRecord, read_events
from state_storage.snapshot import read_snapshot, write_snapshot

logger = logging.getLogger(__name__)


def reconstruct(initial: LearnerState, log: Iterable[EventRecord], orchestrator: Orchestrator) -> LearnerState:
    """
    Replays a log on top of a snapshot, verifying every recorded digest.

    Raises:
        ReplayDivergenceError: naming the first version whose digest differs.
    """
    return orchestrator.replay(log, initial)


class LearnerStore:
    def __init__(self, directory):
        self.directory = Path(directory)

    @property
    def initial_path(self) -> Path:
        return self.directory / "initial.json"

    @property
    def snapshot_path(self) -> Path:
        return self.directory / "snapshot.json"

    @property
    def events_path(self) -> Path:
        return self.directory / "events.jsonl"

    @property
    def config_path(self) -> Path:
        return self.directory / "config.json"

    @property
    def bank_path(self) -> Path:
        return self.directory / "bank.json"

    @property
    def lock_path(self) -> Path:
        return self.directory / ".lock"

    def exists(self) -> bool:
        return self.snapshot_path.exists() and self.initial_path.exists()

    @classmethod
    def create(
        cls,
        directory,
        state: LearnerState,
        config: TutorConfig,
        bank: Sequence[ProblemItem],
    ) -> "LearnerStore":
        store = cls(directory)
        store.directory.mkdir(parents=True, exist_ok=True)
        if store.exists():
            raise FileExistsError(f"Learner directory {store.directory} already initialised.")
        save_config(config, store.config_path)
        with open(store.bank_path, "w", encoding="utf-8") as f:
            json.dump([item.model_dump(mode="json") for item in bank], f, indent=2)
        write_snapshot(state, store.initial_path)
        write_snapshot(state, store.snapshot_path)
        store.events_path.touch()
        logger.info("Initialised learner %s in %s", state.learner_id, store.directory)
        return store

    def load_config(self) -> TutorConfig:
        return load_config(str(self.config_path))

    def load_bank(self) -> list[ProblemItem]:
        return load_bank(str(self.bank_path))

    def load_initial(self) -> LearnerState:
        return read_snapshot(self.initial_path)

    def load_state(self) -> LearnerState:
        return read_snapshot(self.snapshot_path)

    def events(self, recover: bool = True) -> list[EventRecord]:
        base = self.load_initial().version
        return read_events(self.events_path, recover=recover, base_version=base)

    def orchestrator(self) -> Orchestrator:
        config = self.load_config()
        return Orchestrator(self.load_bank(), config, make_backend(config))

    @contextmanager
    def lock(self):
        """Advisory single-writer lock on the learner directory."""
        try:
            fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLockedError(f"Learner directory {self.directory} is locked by another writer") from None
        try:
            os.write(fd, str(os.getpid()).encode("ascii"))
            os.close(fd)
            yield self
        finally:
            self.lock_path.unlink(missing_ok=True)

    def record(self, state: LearnerState, audits: Sequence[AuditRecord], log: EventLog = None) -> None:
        """Appends the audit records, then moves the snapshot to `state`."""
        log = log or EventLog(self.events_path, base_version=self.load_initial().version)
        for audit in audits:
            log.append(EventRecord.from_audit(audit))
        write_snapshot(state, self.snapshot_path)

    def reconstruct(self) -> LearnerState:
        """
        Replays the whole log from the initial snapshot and checks the latest snapshot.

        The snapshot must hash to the digest recorded at its own version; a
        snapshot older than the log is tolerated with a warning.

        Raises:
            ReplayDivergenceError: if the log or the snapshot disagrees with replay.
        """
        initial = self.load_initial()
        log = self.events()
        state = reconstruct(initial, log, self.orchestrator())
        latest = self.load_state()
        recorded = {record.version: record.state_digest for record in log}
        recorded.setdefault(initial.version, state_digest(initial))
        expected = recorded.get(latest.version)
        actual = state_digest(latest)
        if expected is not None and expected != actual:
            raise ReplayDivergenceError(latest.version, expected, actual)
        if latest.version != state.version:
            logger.warning(
                "Snapshot of %s is at version %d but the log reaches %d",
                state.learner_id,
                latest.version,
                state.version,
            )
        return state
