"""
The closed proposal grammar agents emit, and its validation against a state
snapshot.
"""

import logging
from typing import Annotated, Iterable, Literal, Mapping, Optional, Union

from pydantic import Field

from curriculum.bank import ProblemItem
from learner_state.mastery import MasteryDelta
from learner_state.models import (
    ActionEntry,
    EngagementState,
    FrozenModel,
    LearnerState,
    Misconception,
    ReviewItem,
)

logger = logging.getLogger(__name__)

BOUNDS_TOLERANCE = 1e-12

MemorySection = Literal["trends", "misconceptions", "insights"]


class ReviewUpsert(FrozenModel):
    kind: Literal["review"] = "review"
    review: ReviewItem


class EngagementUpdate(FrozenModel):
    kind: Literal["engagement"] = "engagement"
    engagement: EngagementState


class MemoryAppend(FrozenModel):
    kind: Literal["memory"] = "memory"
    section: MemorySection
    text: Optional[str] = None
    misconception: Optional[Misconception] = None
    # False means the proposer wants the append refused rather than evict when full
    evict_oldest: bool = True


class ActionRecord(FrozenModel):
    kind: Literal["action"] = "action"
    action: ActionEntry


Delta = Annotated[
    Union[MasteryDelta, ReviewUpsert, EngagementUpdate, MemoryAppend, ActionRecord],
    Field(discriminator="kind"),
]


class Proposal(FrozenModel):
    agent_id: str
    deltas: tuple[Delta, ...] = ()
    rationale: str = ""


class Verdict(FrozenModel):
    accepted: bool
    reason: Optional[str] = None
    detail: str = ""


ACCEPTED = Verdict(accepted=True)


def _reject(reason: str, detail: str) -> Verdict:
    return Verdict(accepted=False, reason=reason, detail=detail)


def composed_mastery(current: float, delta: MasteryDelta) -> float:
    """Value a mastery delta produces when applied on top of `current`."""
    if current == delta.before:
        return delta.after
    return current + (delta.after - delta.before)


def in_unit_range(value: float) -> bool:
    return -BOUNDS_TOLERANCE <= value <= 1.0 + BOUNDS_TOLERANCE


def _check_delta(
    delta,
    state: LearnerState,
    mastery: dict[str, float],
    items: Optional[Mapping[str, ProblemItem]],
) -> Optional[Verdict]:
    if isinstance(delta, MasteryDelta):
        if delta.topic not in mastery:
            return _reject("unknown-target", f"unknown topic {delta.topic}")
        if not (in_unit_range(delta.before) and in_unit_range(delta.after)):
            return _reject("bounds", f"mastery delta {delta.before} -> {delta.after} outside [0, 1]")
        value = composed_mastery(mastery[delta.topic], delta)
        if not in_unit_range(value):
            return _reject("bounds", f"topic {delta.topic} would reach {value}")
        mastery[delta.topic] = value
    elif isinstance(delta, ReviewUpsert):
        review = delta.review
        if items is not None and review.item_id not in items:
            return _reject("unknown-target", f"unknown item {review.item_id}")
        unknown = [t for t in review.topics if t not in state.mastery]
        if unknown:
            return _reject("unknown-target", f"review topics {unknown} not in mastery map")
    elif isinstance(delta, EngagementUpdate):
        pass
    elif isinstance(delta, MemoryAppend):
        if delta.section == "misconceptions":
            if delta.misconception is None:
                return _reject("schema", "misconception append without a record")
            known = any(m.tag == delta.misconception.tag for m in state.memory.misconceptions)
            full = len(state.memory.misconceptions) >= state.memory.cap_per_section
            if full and not known and not delta.evict_oldest:
                return _reject("memory-cap", "misconceptions section is full")
        else:
            if delta.text is None:
                return _reject("schema", f"{delta.section} append without text")
            full = len(getattr(state.memory, delta.section)) >= state.memory.cap_per_section
            if full and not delta.evict_oldest:
                return _reject("memory-cap", f"{delta.section} section is full")
    elif isinstance(delta, ActionRecord):
        item_id = delta.action.item_id
        if items is not None and item_id is not None and item_id not in items:
            return _reject("unknown-target", f"unknown item {item_id}")
    else:
        return _reject("schema", f"unsupported delta {type(delta).__name__}")
    return None


def validate(
    proposal: Proposal,
    state: LearnerState,
    pipeline: Optional[Iterable[str]] = None,
    items: Optional[Mapping[str, ProblemItem]] = None,
) -> Verdict:
    """
    Checks a proposal against a state snapshot.

    Mastery deltas inside one proposal compose in order, so the bounds check
    sees the value each delta would actually produce.

    Args:
        proposal (Proposal): Agent output.
        state (LearnerState): Snapshot the agent saw.
        pipeline: Agent ids routed for the trigger; None skips the routing check.
        items: Bank index; None skips item-existence checks.

    Returns:
        Verdict: accepted, or rejected with one of bounds, unknown-target,
            memory-cap, unrouted-agent, schema.
    """
    if not isinstance(proposal, Proposal):
        return _reject("schema", f"expected a Proposal, got {type(proposal).__name__}")
    if pipeline is not None and proposal.agent_id not in tuple(pipeline):
        return _reject("unrouted-agent", f"agent {proposal.agent_id} is not routed for this trigger")

    mastery = {topic: entry.m for topic, entry in state.mastery.items()}
    for delta in proposal.deltas:
        verdict = _check_delta(delta, state, mastery, items)
        if verdict is not None:
            logger.warning("Rejected proposal from %s: %s (%s)", proposal.agent_id, verdict.reason, verdict.detail)
            return verdict
    return ACCEPTED
