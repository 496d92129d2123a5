"""
State-graph orchestrator: the single writer of learner state.

Each trigger runs its routed pipeline over one read-only snapshot, validates the
proposals, and commits the accepted ones as one versioned, audited update.
"""

import logging
import time
from typing import Iterable, Literal, Optional, Protocol, Sequence

from pydantic import Field

from agents.backends import AgentBackend, AgentContext, DeterministicBackend
from config import TutorConfig
from curriculum.bank import ProblemItem, index_bank
from errors import CommitError, LogGapError, ReplayDivergenceError
from learner_state.mastery import MasteryDelta, clamp
from learner_state.memory import evict_oldest, rank_misconceptions
from learner_state.models import FrozenModel, LearnerState, MemorySections, TopicMastery
from orchestrator.proposals import (
    ActionRecord,
    EngagementUpdate,
    MemoryAppend,
    Proposal,
    ReviewUpsert,
    composed_mastery,
    in_unit_range,
    validate,
)
from orchestrator.triggers import Trigger, route_trigger
from seeding import derive_seed
from state_storage.canonical import state_digest

logger = logging.getLogger(__name__)

RECENT_WINDOW = 10


class ProposalOutcome(FrozenModel):
    proposal: Proposal
    accepted: bool
    reason: Optional[str] = None
    detail: str = ""


class AgentFailure(FrozenModel):
    agent_id: str
    error: str


class AuditRecord(FrozenModel):
    learner_id: str
    version_before: int = Field(ge=0)
    version_after: int = Field(ge=1)
    trigger: Trigger
    proposals: tuple[ProposalOutcome, ...] = ()
    agent_failures: tuple[AgentFailure, ...] = ()
    state_digest_after: str
    wall_time_ms: float = 0.0
    status: Literal["committed", "failed"] = "committed"
    error: str = ""

    @property
    def version(self) -> int:
        return self.version_after

    @property
    def state_digest(self) -> str:
        return self.state_digest_after

    def to_trigger(self) -> Trigger:
        return self.trigger


class ReplayableRecord(Protocol):
    version: int
    state_digest: str

    def to_trigger(self) -> Trigger: ...


def _apply_mastery(mastery: dict, delta: MasteryDelta) -> None:
    try:
        topic = mastery[delta.topic]
    except KeyError:
        raise CommitError(f"Mastery delta on unknown topic {delta.topic}") from None
    value = composed_mastery(topic.m, delta)
    if not in_unit_range(value):
        raise CommitError(f"Topic {delta.topic} would reach {value}")
    mastery[delta.topic] = TopicMastery(
        topic_id=topic.topic_id,
        m=clamp(value),
        alpha_count=topic.alpha_count + (1.0 if delta.passed else 0.0),
        beta_count=topic.beta_count + (0.0 if delta.passed else 1.0),
        last_update=max(topic.last_update, delta.observed_at),
        recent_outcomes=(topic.recent_outcomes + (delta.passed,))[-RECENT_WINDOW:],
        recent_solve_times=(topic.recent_solve_times + (delta.solve_time,))[-RECENT_WINDOW:],
    )


def _apply_memory(memory: MemorySections, delta: MemoryAppend) -> MemorySections:
    cap = memory.cap_per_section
    if delta.section == "misconceptions":
        record = delta.misconception
        if record is None:
            raise CommitError("Misconception append without a record")
        others = [m for m in memory.misconceptions if m.tag != record.tag]
        records = others + [record]
        if len(records) > cap:
            if not delta.evict_oldest:
                raise CommitError("Misconceptions section is full")
            records = sorted(records, key=lambda m: (m.last_seen, m.tag))[len(records) - cap:]
        return MemorySections(
            trends=memory.trends,
            misconceptions=rank_misconceptions(records),
            insights=memory.insights,
            cap_per_section=cap,
        )

    entries = getattr(memory, delta.section) + (delta.text,)
    if len(entries) > cap and not delta.evict_oldest:
        raise CommitError(f"{delta.section} section is full")
    sections = {
        "trends": memory.trends,
        "insights": memory.insights,
        delta.section: evict_oldest(entries, cap),
    }
    return MemorySections(
        trends=sections["trends"],
        misconceptions=memory.misconceptions,
        insights=sections["insights"],
        cap_per_section=cap,
    )


class Orchestrator:
    """
    Routes triggers to agents and commits their proposals.

    Args:
        bank: Problem bank the agents draw items from.
        config (TutorConfig): Engine configuration.
        backend (AgentBackend, optional): Agent implementation; deterministic by default.
    """

    def __init__(self, bank: Sequence[ProblemItem], config: TutorConfig, backend: Optional[AgentBackend] = None):
        self.items = index_bank(bank)
        self.config = config
        self.backend = backend or DeterministicBackend()

    def agent_seed(self, state: LearnerState, trigger: Trigger) -> int:
        return derive_seed(self.config.seed, state.learner_id, state.version, trigger.kind.value)

    def process(self, state: LearnerState, trigger: Trigger) -> tuple[LearnerState, AuditRecord]:
        """
        Runs one trigger end to end.

        Agent failures are recorded and skipped; rejected proposals are recorded
        with their reason. The returned state is always exactly one version ahead.
        """
        started = time.perf_counter()
        pipeline = route_trigger(trigger)
        ctx = AgentContext(
            trigger=trigger,
            state=state,
            config=self.config,
            items=self.items,
            seed=self.agent_seed(state, trigger),
        )

        outcomes = []
        failures = []
        for agent_id in pipeline:
            try:
                proposal = self.backend.propose(agent_id, ctx)
            except Exception as e:
                logger.warning("Agent %s failed on %s at version %d: %s", agent_id, trigger.kind.value, state.version, e)
                failures.append(AgentFailure(agent_id=agent_id, error=f"{type(e).__name__}: {e}"))
                continue
            if proposal is None:
                continue
            verdict = validate(proposal, state, pipeline, self.items)
            outcomes.append(
                ProposalOutcome(proposal=proposal, accepted=verdict.accepted, reason=verdict.reason, detail=verdict.detail)
            )

        accepted = [o.proposal for o in outcomes if o.accepted]
        new_state, audit = self.commit(state, trigger, accepted)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        audit = AuditRecord(
            learner_id=audit.learner_id,
            version_before=audit.version_before,
            version_after=audit.version_after,
            trigger=trigger,
            proposals=tuple(outcomes),
            agent_failures=tuple(failures),
            state_digest_after=audit.state_digest_after,
            wall_time_ms=elapsed_ms,
            status=audit.status,
            error=audit.error,
        )
        return new_state, audit

    def commit(
        self,
        state: LearnerState,
        trigger: Trigger,
        accepted: Iterable[Proposal],
    ) -> tuple[LearnerState, AuditRecord]:
        """
        Applies accepted proposals in pipeline order as one update.

        The version always advances by one. If any delta fails to apply, none of
        them are applied and the audit record is marked failed.
        """
        accepted = list(accepted)
        version = state.version + 1
        updated_at = max(state.updated_at, trigger.timestamp)
        status = "committed"
        error = ""
        try:
            new_state = self._apply(state, trigger, accepted, version, updated_at)
        except Exception as e:
            logger.warning("Commit of %s at version %d rolled back: %s", trigger.kind.value, version, e)
            status = "failed"
            error = f"{type(e).__name__}: {e}"
            new_state = state.model_copy(update={"version": version, "updated_at": updated_at})

        digest = state_digest(new_state)
        logger.debug(
            "Committed version %d for %s (%s, %d proposals, %s)",
            version,
            state.learner_id,
            trigger.kind.value,
            len(accepted),
            status,
        )
        audit = AuditRecord(
            learner_id=state.learner_id,
            version_before=state.version,
            version_after=version,
            trigger=trigger,
            proposals=tuple(ProposalOutcome(proposal=p, accepted=True) for p in accepted),
            state_digest_after=digest,
            status=status,
            error=error,
        )
        return new_state, audit

    def _apply(self, state, trigger, proposals, version, updated_at) -> LearnerState:
        mastery = dict(state.mastery)
        reviews = {review.item_id: review for review in state.reviews}
        engagement = state.engagement
        memory = state.memory
        actions = list(state.actions)

        for proposal in proposals:
            for delta in proposal.deltas:
                if isinstance(delta, MasteryDelta):
                    _apply_mastery(mastery, delta)
                elif isinstance(delta, ReviewUpsert):
                    reviews[delta.review.item_id] = delta.review
                elif isinstance(delta, EngagementUpdate):
                    engagement = delta.engagement
                elif isinstance(delta, MemoryAppend):
                    memory = _apply_memory(memory, delta)
                elif isinstance(delta, ActionRecord):
                    actions.append(delta.action)
                else:
                    raise CommitError(f"Unsupported delta {type(delta).__name__}")

        keep_days = self.config.agents.action_log_days
        today = trigger.day
        actions = [a for a in actions if (today - a.day).days < keep_days]
        return LearnerState(
            learner_id=state.learner_id,
            mastery=mastery,
            reviews=tuple(sorted(reviews.values(), key=lambda r: r.item_id)),
            engagement=engagement,
            preferences=state.preferences,
            memory=memory,
            actions=tuple(actions),
            version=version,
            updated_at=updated_at,
        )

    def replay(self, records: Iterable[ReplayableRecord], initial: LearnerState) -> LearnerState:
        """
        Re-executes recorded triggers from `initial`, checking every digest.

        Raises:
            LogGapError: a record's version does not follow the previous one.
            ReplayDivergenceError: the first version whose digest differs.
        """
        state = initial
        for record in records:
            if record.version != state.version + 1:
                raise LogGapError(state.version + 1, record.version)
            state, audit = self.process(state, record.to_trigger())
            if audit.state_digest_after != record.state_digest:
                logger.error("Replay of %s diverged at version %d", state.learner_id, record.version)
                raise ReplayDivergenceError(record.version, record.state_digest, audit.state_digest_after)
        return state
