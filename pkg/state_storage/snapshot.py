import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from errors import SerializationError
from learner_state.models import LearnerState
from state_storage.canonical import canonical_bytes, digest_bytes

logger = logging.getLogger(__name__)

DIGEST_SUFFIX = ".sha256"


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + DIGEST_SUFFIX)


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(data)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def write_snapshot(state: LearnerState, path: Optional[str] = None) -> tuple[bytes, str]:
    """
    Serializes a state canonically; with a path, also writes it and its digest sidecar.

    Returns:
        tuple: (canonical UTF-8 bytes, SHA-256 hex digest).
    """
    data = canonical_bytes(state)
    digest = digest_bytes(data)
    if path is not None:
        path = Path(path)
        _atomic_write(path, data)
        _atomic_write(sidecar_path(path), (digest + "\n").encode("ascii"))
        logger.debug("Wrote snapshot of %s at version %d to %s", state.learner_id, state.version, path)
    return data, digest


def parse_snapshot(data: bytes) -> LearnerState:
    try:
        return LearnerState.model_validate_json(data)
    except ValidationError as e:
        raise SerializationError(f"Invalid snapshot: {e}") from e


def read_snapshot(path) -> LearnerState:
    """
    Loads a snapshot and checks it against its digest sidecar when one exists.

    Raises:
        SerializationError: unreadable snapshot or digest mismatch.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Snapshot {path} not found.")
    data = path.read_bytes()
    sidecar = sidecar_path(path)
    if sidecar.exists():
        recorded = sidecar.read_text(encoding="ascii").strip()
        actual = digest_bytes(data)
        if recorded != actual:
            raise SerializationError(f"Snapshot {path} digest {actual} does not match sidecar {recorded}")
    return parse_snapshot(data)
