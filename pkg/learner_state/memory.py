"""
Helpers for the learner's long-term memory sections.

Text is scrubbed of personal identifiers before it is proposed for memory, and
misconception rankings are recomputed from evidence. Nothing here edits a state;
the orchestrator merges the results.
"""

import re
from typing import Iterable

from learner_state.models import Misconception

_EMAIL = re.compile(r"[\w.+-]+@[\w-]+(\.[\w-]+)+")
_URL = re.compile(r"https?://\S+")
_PHONE = re.compile(r"\+?\d[\d\s().-]{7,}\d")


def redact_pii(text: str) -> str:
    text = _EMAIL.sub("[email]", text)
    text = _URL.sub("[url]", text)
    return _PHONE.sub("[phone]", text)


def rank_misconceptions(records: Iterable[Misconception]) -> tuple[Misconception, ...]:
    """
    Re-ranks misconceptions: evidence_count desc, then most recent, then tag.

    Returns:
        tuple: New records with unique ranks 1..n in ranked order.
    """
    ordered = sorted(records, key=lambda r: (-r.evidence_count, -r.last_seen.timestamp(), r.tag))
    return tuple(
        Misconception(tag=r.tag, evidence_count=r.evidence_count, last_seen=r.last_seen, rank=rank)
        for rank, r in enumerate(ordered, start=1)
    )


def evict_oldest(entries: tuple, cap: int) -> tuple:
    """Keeps the newest `cap` entries of an append-ordered section."""
    if len(entries) <= cap:
        return entries
    return entries[len(entries) - cap:]
