"""
Convenience flows over the orchestrator for one learner session.
"""

from datetime import date, datetime
from typing import Optional

from learner_state.models import ActionKind, LearnerState, Observation
from orchestrator import triggers
from orchestrator.state_graph import AuditRecord, Orchestrator


def hint_history(state: LearnerState, item_id: str, day: date) -> int:
    """Hints given on an item that day since the learner last solved it."""
    count = 0
    for action in state.actions:
        if action.item_id != item_id or action.day != day:
            continue
        if action.kind is ActionKind.HINT:
            count += 1
        elif action.kind is ActionKind.FEEDBACK and action.verdict == "pass":
            count = 0
    return count


def needs_review(state: LearnerState, item_id: str, day: date) -> bool:
    """True when the item is new to the review queue or due on `day`."""
    review = state.review_for(item_id)
    return review is None or review.due_date <= day


def submit_attempt(
    orchestrator: Orchestrator,
    state: LearnerState,
    observation: Observation,
    review: bool = True,
) -> tuple[LearnerState, list[AuditRecord]]:
    """
    Fires on_submission, then on_review_due when the item is new or due.

    Returns:
        tuple: (state after the last trigger, audit records in order).
    """
    day = observation.timestamp.date()
    due = review and needs_review(state, observation.item_id, day)
    state, audit = orchestrator.process(state, triggers.submission(observation))
    audits = [audit]
    if due:
        state, audit = orchestrator.process(state, triggers.review_due(day, observation))
        audits.append(audit)
    return state, audits


def request_hint(
    orchestrator: Orchestrator,
    state: LearnerState,
    item_id: str,
    timestamp: datetime,
) -> tuple[LearnerState, AuditRecord]:
    trigger = triggers.hint_request(item_id, hint_history(state, item_id, timestamp.date()), timestamp)
    return orchestrator.process(state, trigger)


def session_check(
    orchestrator: Orchestrator, state: LearnerState, day: date, timestamp: Optional[datetime] = None
) -> tuple[LearnerState, AuditRecord]:
    return orchestrator.process(state, triggers.session_check(day, timestamp))


def daily_generation(
    orchestrator: Orchestrator, state: LearnerState, day: date, timestamp: Optional[datetime] = None
) -> tuple[LearnerState, AuditRecord]:
    return orchestrator.process(state, triggers.daily_generation(day, timestamp))


def review_due(
    orchestrator: Orchestrator,
    state: LearnerState,
    day: date,
    observation: Optional[Observation] = None,
    timestamp: Optional[datetime] = None,
) -> tuple[LearnerState, AuditRecord]:
    return orchestrator.process(state, triggers.review_due(day, observation, timestamp))


def latest_hint(state: LearnerState, item_id: str):
    for action in reversed(state.actions):
        if action.kind is ActionKind.HINT and action.item_id == item_id:
            return action
    return None


def daily_set(state: LearnerState, day: date) -> list:
    return state.actions_on(day, ActionKind.RECOMMEND_ITEM)
