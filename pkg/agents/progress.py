"""
Progress synthesizer: enhanced SM-2 review scheduling for a reviewed item.
"""

from datetime import date, timedelta
from typing import Optional

from curriculum.bank import ProblemItem
from learner_state.mastery import MasteryConfig, expected_solve_time
from learner_state.models import (
    DEFAULT_EASE,
    ActionEntry,
    ActionKind,
    LearnerState,
    Observation,
    ReviewItem,
    TopicMastery,
)
from orchestrator.proposals import ActionRecord, Proposal, ReviewUpsert
from scheduler.sm2 import SchedulerConfig, adjust_interval, derive_quality, next_interval, update_ease

AGENT_ID = "progress_synthesizer"
PASSING_QUALITY = 3


def _expected_time(state: LearnerState, item: ProblemItem, mastery: Optional[MasteryConfig]) -> float:
    topic = state.mastery.get(item.primary_topic) or TopicMastery(topic_id=item.primary_topic)
    return expected_solve_time(item, topic, mastery or MasteryConfig())


def synthesize_progress(
    state: LearnerState,
    obs: Observation,
    item: ProblemItem,
    config: SchedulerConfig,
    today: date,
    mastery: Optional[MasteryConfig] = None,
) -> Proposal:
    """
    Schedules the item's next review from a reviewed attempt.

    Quality drives the ease update; a quality below 3 restarts the interval
    sequence. The SM-2 interval is then adjusted for hint use, speed and
    predicted recall, and the item is due `interval` days after today.

    Returns:
        Proposal: one ReviewUpsert, plus an adjust_schedule action when the
            context adjustment moved the interval.
    """
    expected = _expected_time(state, item, mastery)
    previous = state.review_for(item.id)
    ease = previous.ease_factor if previous else DEFAULT_EASE
    n_reviews = previous.n_reviews if previous else 0
    prev_interval = previous.interval_days if previous else 1

    quality = derive_quality(obs, expected, config)
    ease = update_ease(ease, quality)
    if quality < PASSING_QUALITY:
        base = next_interval(0, prev_interval, ease)
        n_reviews = 0
    else:
        base = next_interval(n_reviews, prev_interval, ease)
        n_reviews += 1
    interval = adjust_interval(base, obs, expected, ease, config)

    review = ReviewItem(
        item_id=item.id,
        topics=item.topics,
        due_date=today + timedelta(days=interval),
        interval_days=interval,
        ease_factor=ease,
        n_reviews=n_reviews,
        last_review=today,
    )
    deltas = [ReviewUpsert(review=review)]
    if interval != base:
        deltas.append(
            ActionRecord(
                action=ActionEntry(
                    kind=ActionKind.ADJUST_SCHEDULE,
                    agent_id=AGENT_ID,
                    day=today,
                    issued_at=obs.timestamp,
                    item_id=item.id,
                    message=f"interval {base} -> {interval} days",
                )
            )
        )
    return Proposal(
        agent_id=AGENT_ID,
        deltas=tuple(deltas),
        rationale=f"q={quality}, EF={ease:.2f}, due {review.due_date.isoformat()}",
    )
