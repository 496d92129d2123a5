"""
Pedagogical feedback: five-level graduated hints whose wording follows the
learner's proficiency tier.

Levels: 1 metacognitive, 2 conceptual, 3 strategic, 4 structural, 5 targeted.
"""

import logging
from datetime import datetime

from curriculum.bank import HINT_LEVELS, ProblemItem, shares_solution_span
from errors import HintUnavailableError
from learner_state.models import ActionEntry, ActionKind, FrozenModel, Observation
from orchestrator.proposals import ActionRecord, Proposal

logger = logging.getLogger(__name__)

AGENT_ID = "feedback"
MAX_LEVEL = HINT_LEVELS[-1]
LEVEL_NAMES = {1: "metacognitive", 2: "conceptual", 3: "strategic", 4: "structural", 5: "targeted"}
REFLECTION_PROMPT = "Before the next try, compare what your code returned with what the failing test expected."


class Hint(FrozenModel):
    level: int
    tier: str
    text: str

    @property
    def name(self) -> str:
        return LEVEL_NAMES[self.level]


def tier_for(p_hat: float, low: float = 0.3, high: float = 0.7) -> str:
    if p_hat < low:
        return "beginner"
    if p_hat <= high:
        return "intermediate"
    return "advanced"


def hint_level(hint_history: int) -> int:
    return min(MAX_LEVEL, 1 + max(0, hint_history))


def generate_hint(item: ProblemItem, hint_history: int, p_hat: float) -> Hint:
    """
    Renders the next hint for an item.

    The level escalates with hints already given and caps at 5. A missing or
    disclosing template falls back to the nearest lower level.

    Raises:
        HintUnavailableError: no usable template at or below the level.
    """
    tier = tier_for(p_hat)
    level = hint_level(hint_history)
    for candidate in range(level, 0, -1):
        text = item.template(candidate, tier)
        if not text:
            continue
        if shares_solution_span(text, item.reference_solution):
            logger.warning("Template %d:%s of %s discloses the solution; skipped", candidate, tier, item.id)
            continue
        return Hint(level=candidate, tier=tier, text=text)
    raise HintUnavailableError(f"No hint template at or below level {level} for {item.id} ({tier})")


def hint_proposal(item: ProblemItem, hint_history: int, p_hat: float, issued_at: datetime) -> Proposal:
    hint = generate_hint(item, hint_history, p_hat)
    action = ActionEntry(
        kind=ActionKind.HINT,
        agent_id=AGENT_ID,
        day=issued_at.date(),
        issued_at=issued_at,
        item_id=item.id,
        level=hint.level,
        tier=hint.tier,
        message=hint.text,
    )
    return Proposal(
        agent_id=AGENT_ID,
        deltas=(ActionRecord(action=action),),
        rationale=f"level {hint.level} ({hint.name}) hint, {hint.tier} tier",
    )


def reflection_proposal(obs: Observation, item: ProblemItem) -> Proposal:
    """Short reflection prompt after a failed submission; not counted as a hint."""
    action = ActionEntry(
        kind=ActionKind.FEEDBACK,
        agent_id=AGENT_ID,
        day=obs.timestamp.date(),
        issued_at=obs.timestamp,
        item_id=item.id,
        detail=1,
        message=REFLECTION_PROMPT,
    )
    return Proposal(agent_id=AGENT_ID, deltas=(ActionRecord(action=action),), rationale="reflection after failure")
