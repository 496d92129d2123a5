"""
Learner profiler: mastery deltas, misconception evidence and behavioural trends
from one submission.
"""

import logging
from datetime import date, timedelta
from typing import Optional

import numpy as np
from pydantic import Field

from config import AgentsConfig
from curriculum.bank import ERROR_TAGS, ProblemItem
from learner_state.mastery import MasteryConfig, apply_observation
from learner_state.memory import redact_pii
from learner_state.models import (
    ActivityDay,
    EngagementState,
    FrozenModel,
    LearnerState,
    Misconception,
    Observation,
)
from orchestrator.proposals import EngagementUpdate, MemoryAppend, Proposal

logger = logging.getLogger(__name__)

AGENT_ID = "profiler"
ACTIVITY_WINDOW_DAYS = 30
TREND_DAYS = 7
OTHER_TAG = "other"


class BehavioralTrend(FrozenModel):
    velocity: float = Field(ge=0)
    fatigue_flag: bool = False
    success_trend: float = 0.0


def next_engagement(engagement: EngagementState, obs: Observation) -> EngagementState:
    """Engagement after one more submission on obs.timestamp's day."""
    today = obs.timestamp.date()
    streak = 1
    if engagement.last_seen is not None:
        gap = (today - engagement.last_seen.date()).days
        if gap <= 0:
            streak = max(1, engagement.streak_days)
        elif gap == 1:
            streak = engagement.streak_days + 1

    window = {entry.day: entry for entry in engagement.activity_window}
    current = window.get(today)
    attempts = (current.attempts if current else 0) + 1
    passes = (current.passes if current else 0) + int(obs.passed)
    window[today] = ActivityDay(day=today, attempts=attempts, passes=passes)
    start = today - timedelta(days=ACTIVITY_WINDOW_DAYS - 1)
    activity = tuple(sorted((e for d, e in window.items() if d >= start), key=lambda e: e.day))

    last_seen = obs.timestamp
    if engagement.last_seen is not None and engagement.last_seen > last_seen:
        last_seen = engagement.last_seen
    return EngagementState(
        streak_days=streak,
        last_seen=last_seen,
        failure_streak=0 if obs.passed else engagement.failure_streak + 1,
        activity_window=activity,
        recent_outcomes=(engagement.recent_outcomes + (obs.passed,))[-10:],
    )


def behavioral_trend(engagement: EngagementState, today: date, config: AgentsConfig) -> BehavioralTrend:
    """
    Trailing 7-day velocity, fatigue and success slope.

    Fatigue: today's attempts exceed fatigue_ratio times the mean over earlier
    active days in the window while today's success rate is below
    fatigue_success_max.
    """
    start = today - timedelta(days=TREND_DAYS - 1)
    days = [e for e in engagement.activity_window if start <= e.day <= today]
    velocity = sum(e.attempts for e in days) / TREND_DAYS

    fatigue = False
    today_entry = next((e for e in days if e.day == today), None)
    earlier = [e.attempts for e in days if e.day < today]
    if today_entry is not None and earlier and today_entry.attempts:
        rate = today_entry.passes / today_entry.attempts
        fatigue = today_entry.attempts > config.fatigue_ratio * float(np.mean(earlier)) and rate < config.fatigue_success_max

    slope = 0.0
    active = [e for e in days if e.attempts]
    if len(active) >= 2:
        x = np.array([(e.day - start).days for e in active], dtype=float)
        y = np.array([e.passes / e.attempts for e in active], dtype=float)
        slope = float(np.polyfit(x, y, 1)[0])
    return BehavioralTrend(velocity=velocity, fatigue_flag=fatigue, success_trend=slope)


def misconception_updates(obs: Observation, state: LearnerState) -> tuple[list[MemoryAppend], list[str]]:
    existing = {m.tag: m for m in state.memory.misconceptions}
    counts: dict[str, int] = {}
    unknown = []
    for tag in obs.error_tags:
        if tag not in ERROR_TAGS:
            unknown.append(tag)
            tag = OTHER_TAG
        counts[tag] = counts.get(tag, 0) + 1

    appends = []
    for tag in sorted(counts):
        previous = existing.get(tag)
        evidence = (previous.evidence_count if previous else 0) + counts[tag]
        appends.append(
            MemoryAppend(
                section="misconceptions",
                misconception=Misconception(tag=tag, evidence_count=evidence, last_seen=obs.timestamp),
            )
        )
    return appends, unknown


def _trend_text(day: date, trend: BehavioralTrend) -> str:
    text = f"{day.isoformat()}: {trend.velocity:.2f} attempts/day, success slope {trend.success_trend:+.3f}"
    if trend.fatigue_flag:
        text += ", fatigue suspected"
    return text


def profiler_analyze(
    obs: Observation,
    item: ProblemItem,
    state: LearnerState,
    config: MasteryConfig,
    agents: Optional[AgentsConfig] = None,
) -> Proposal:
    """
    Builds the profiler's proposal for one submission.

    Returns:
        Proposal: mastery deltas, the engagement record after this attempt,
            misconception evidence and, when something changed, trend or insight
            notes.
    """
    agents = agents or AgentsConfig()
    deltas = list(apply_observation(state, obs, item, config))

    engagement = next_engagement(state.engagement, obs)
    deltas.append(EngagementUpdate(engagement=engagement))

    appends, unknown = misconception_updates(obs, state)
    deltas.extend(appends)
    if unknown:
        logger.warning("Unrecognised error tags %s on %s counted as %s", unknown, obs.item_id, OTHER_TAG)
        note = redact_pii(f"Unrecognised error tags {', '.join(sorted(set(unknown)))} counted as {OTHER_TAG}")
        deltas.append(MemoryAppend(section="insights", text=note))

    today = obs.timestamp.date()
    before = behavioral_trend(state.engagement, today, agents)
    after = behavioral_trend(engagement, today, agents)
    first_today = not any(e.day == today for e in state.engagement.activity_window)
    if first_today or (after.fatigue_flag and not before.fatigue_flag):
        deltas.append(MemoryAppend(section="trends", text=_trend_text(today, after)))

    verdict = "pass" if obs.passed else "fail"
    return Proposal(
        agent_id=AGENT_ID,
        deltas=tuple(deltas),
        rationale=f"{verdict} on {item.id}; failure streak {engagement.failure_streak}",
    )
