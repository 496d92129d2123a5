"""
Engagement monitor: supportive prompts after broken streaks, inactivity or
failure runs. Each kind fires at most once per learner per day.
"""

from datetime import date, datetime
from typing import Iterable, Optional, Sequence

from config import AgentsConfig
from curriculum.bank import Difficulty, ProblemItem
from learner_state.models import ActionEntry, ActionKind, FrozenModel, InterventionKind, LearnerState, Timestamp
from orchestrator.proposals import ActionRecord, Proposal

AGENT_ID = "engagement"

MESSAGES = {
    InterventionKind.STREAK_NUDGE: "Your practice streak paused. A short session today picks it back up.",
    InterventionKind.REENGAGEMENT: "Welcome back. Here is a gentle place to restart whenever you are ready.",
    InterventionKind.SIMPLER_VARIANT: "These last problems were tough. Try {item} to rebuild momentum.",
}


class Intervention(FrozenModel):
    kind: InterventionKind
    message: str
    issued_at: Timestamp
    item_id: Optional[str] = None


def simpler_variant(state: LearnerState, bank: Sequence[ProblemItem]) -> Optional[ProblemItem]:
    """First Easy item, by id, in the learner's weakest topic that has one."""
    easy = {}
    for item in sorted(bank, key=lambda i: i.id):
        if item.difficulty is Difficulty.EASY:
            easy.setdefault(item.primary_topic, item)
    ranked = sorted(state.mastery.values(), key=lambda t: (t.m, t.topic_id))
    for topic in ranked:
        if topic.topic_id in easy:
            return easy[topic.topic_id]
    return None


def engagement_check(
    state: LearnerState,
    today: date,
    issued: Iterable[ActionEntry],
    config: Optional[AgentsConfig] = None,
    bank: Sequence[ProblemItem] = (),
    issued_at: Optional[datetime] = None,
) -> list[Intervention]:
    """
    Decides today's interventions.

    streak_nudge: a streak of at least streak_nudge_min days broke (no activity
    yesterday). reengagement: last seen inactivity_days or more ago.
    simpler_variant: failure streak at the threshold, pointing at an Easy item
    in the weakest topic. Kinds already issued today or opted out are dropped.
    """
    config = config or AgentsConfig()
    engagement = state.engagement
    issued_at = issued_at or datetime.combine(today, datetime.min.time())
    already = {a.intervention for a in issued if a.day == today and a.kind is ActionKind.INTERVENE}
    blocked = already | set(state.preferences.opt_outs)

    result = []
    idle_days = None
    if engagement.last_seen is not None:
        idle_days = (today - engagement.last_seen.date()).days

    if idle_days is not None and idle_days >= 2 and engagement.streak_days >= config.streak_nudge_min:
        result.append(InterventionKind.STREAK_NUDGE)
    if idle_days is not None and idle_days >= config.inactivity_days:
        result.append(InterventionKind.REENGAGEMENT)

    variant = None
    if engagement.failure_streak >= config.failure_streak_threshold:
        variant = simpler_variant(state, bank)
        if variant is not None:
            result.append(InterventionKind.SIMPLER_VARIANT)

    interventions = []
    for kind in result:
        if kind in blocked:
            continue
        item_id = variant.id if kind is InterventionKind.SIMPLER_VARIANT else None
        interventions.append(
            Intervention(kind=kind, message=MESSAGES[kind].format(item=item_id), issued_at=issued_at, item_id=item_id)
        )
    return interventions


def engagement_proposal(interventions: Sequence[Intervention], today: date) -> Optional[Proposal]:
    if not interventions:
        return None
    deltas = tuple(
        ActionRecord(
            action=ActionEntry(
                kind=ActionKind.INTERVENE,
                agent_id=AGENT_ID,
                day=today,
                issued_at=i.issued_at,
                intervention=i.kind,
                item_id=i.item_id,
                message=i.message,
            )
        )
        for i in interventions
    )
    return Proposal(agent_id=AGENT_ID, deltas=deltas, rationale=", ".join(i.kind.value for i in interventions))
