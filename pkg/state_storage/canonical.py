"""
Canonical JSON: sorted keys, no insignificant whitespace, floats at 17
significant digits. Digests are SHA-256 over the UTF-8 bytes.
"""

import hashlib
import json
import math
from datetime import date, datetime
from enum import Enum

from pydantic import BaseModel

from errors import SerializationError


def _float(value: float) -> str:
    if not math.isfinite(value):
        raise SerializationError(f"Cannot serialize non-finite number {value!r}")
    if value == 0.0:
        return "0"
    return format(value, ".17g")


def _key(key) -> str:
    if isinstance(key, Enum):
        return str(key.value)
    return str(key)


def _render(value, out: list) -> None:
    if isinstance(value, BaseModel):
        _render(value.model_dump(mode="python"), out)
    elif value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, Enum):
        _render(value.value, out)
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_float(value))
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, datetime):
        out.append(json.dumps(value.isoformat()))
    elif isinstance(value, date):
        out.append(json.dumps(value.isoformat()))
    elif isinstance(value, dict):
        out.append("{")
        for index, key in enumerate(sorted(value, key=_key)):
            if index:
                out.append(",")
            out.append(json.dumps(_key(key), ensure_ascii=False))
            out.append(":")
            _render(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for index, item in enumerate(value):
            if index:
                out.append(",")
            _render(item, out)
        out.append("]")
    else:
        raise SerializationError(f"Cannot serialize value of type {type(value).__name__}")


def canonical_json(value) -> str:
    out = []
    _render(value, out)
    return "".join(out)


def canonical_bytes(value) -> bytes:
    return canonical_json(value).encode("utf-8")


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def state_digest(value) -> str:
    """64 lowercase hex characters identifying the canonical form of value."""
    return digest_bytes(canonical_bytes(value))
