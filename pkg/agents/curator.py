from datetime import date, datetime
from typing import Optional, Sequence

from curriculum.bank import ProblemItem
from curriculum.policy import CurriculumConfig, DailySet, select_daily_set
from learner_state.models import ActionEntry, ActionKind, LearnerState
from orchestrator.proposals import ActionRecord, Proposal
from scheduler.review_queue import build_review_queue
from scheduler.sm2 import SchedulerConfig

AGENT_ID = "curator"


def todays_set(state: LearnerState, day: date) -> list[ActionEntry]:
    return state.actions_on(day, ActionKind.RECOMMEND_ITEM)


def curate(
    state: LearnerState,
    bank: Sequence[ProblemItem],
    day: date,
    issued_at: datetime,
    curriculum: CurriculumConfig,
    scheduler: SchedulerConfig,
    seed: int,
) -> Optional[Proposal]:
    """
    Ensures the day has a problem set; proposes nothing when one already exists.
    """
    if todays_set(state, day):
        return None
    due = build_review_queue(state, day, scheduler)
    daily: DailySet = select_daily_set(state, bank, due, day, curriculum, seed)
    actions = [
        ActionRecord(
            action=ActionEntry(
                kind=ActionKind.RECOMMEND_ITEM,
                agent_id=AGENT_ID,
                day=day,
                issued_at=issued_at,
                item_id=entry.item_id,
                slot=entry.slot,
                message=f"{entry.slot} practice on {entry.topic}",
            )
        )
        for entry in daily.slots
    ]
    rationale = ", ".join(f"{slot} {count}" for slot, count in daily.targets.items())
    if daily.shortfall:
        rationale += f"; short by {daily.shortfall}"
    return Proposal(agent_id=AGENT_ID, deltas=tuple(actions), rationale=rationale)
