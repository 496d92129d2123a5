"""
Agent backends.

An agent receives the trigger, a read-only state snapshot, the configuration and
a seed, and returns a Proposal or None. `deterministic` runs the reference
policies; `replay` serves proposals recorded in a fixture file.
"""

import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, Optional

from pydantic import ValidationError

from agents.assessment import assessment_proposal
from agents.curator import curate
from agents.engagement import engagement_check, engagement_proposal
from agents.feedback import hint_proposal, reflection_proposal
from agents.profiler import profiler_analyze
from agents.progress import synthesize_progress
from config import TutorConfig
from curriculum.bank import ProblemItem
from errors import AgentError, ConfigError, RejectedInputError
from learner_state.models import ActionKind, FrozenModel, LearnerState
from learner_state.proficiency import current_proficiency
from orchestrator.proposals import Proposal
from orchestrator.triggers import (
    HintRequestPayload,
    ReviewDuePayload,
    SubmissionPayload,
    Trigger,
)

logger = logging.getLogger(__name__)


class AgentContext(FrozenModel):
    trigger: Trigger
    state: LearnerState
    config: TutorConfig
    items: dict[str, ProblemItem]
    seed: int

    @property
    def bank(self) -> list[ProblemItem]:
        return sorted(self.items.values(), key=lambda item: item.id)

    def item(self, item_id: str) -> ProblemItem:
        try:
            return self.items[item_id]
        except KeyError:
            raise RejectedInputError(f"Unknown item {item_id}") from None


def _proficiency(ctx: AgentContext) -> float:
    return current_proficiency(ctx.state, ctx.config.proficiency, ctx.trigger.day)


def run_skill_assessment(ctx: AgentContext) -> Optional[Proposal]:
    payload = ctx.trigger.payload
    if not isinstance(payload, SubmissionPayload):
        return None
    obs = payload.observation
    return assessment_proposal(obs, ctx.item(obs.item_id), _proficiency(ctx))


def run_profiler(ctx: AgentContext) -> Optional[Proposal]:
    payload = ctx.trigger.payload
    if not isinstance(payload, SubmissionPayload):
        return None
    obs = payload.observation
    return profiler_analyze(obs, ctx.item(obs.item_id), ctx.state, ctx.config.mastery, ctx.config.agents)


def run_feedback(ctx: AgentContext) -> Optional[Proposal]:
    payload = ctx.trigger.payload
    if isinstance(payload, HintRequestPayload):
        item = ctx.item(payload.item_id)
        return hint_proposal(item, payload.hint_history, _proficiency(ctx), ctx.trigger.timestamp)
    if isinstance(payload, SubmissionPayload) and not payload.observation.passed:
        obs = payload.observation
        return reflection_proposal(obs, ctx.item(obs.item_id))
    return None


def run_curator(ctx: AgentContext) -> Optional[Proposal]:
    return curate(
        ctx.state,
        ctx.bank,
        ctx.trigger.day,
        ctx.trigger.timestamp,
        ctx.config.curriculum,
        ctx.config.scheduler,
        ctx.seed,
    )


def run_engagement(ctx: AgentContext) -> Optional[Proposal]:
    day = ctx.trigger.day
    issued = ctx.state.actions_on(day, ActionKind.INTERVENE)
    interventions = engagement_check(ctx.state, day, issued, ctx.config.agents, ctx.bank, ctx.trigger.timestamp)
    return engagement_proposal(interventions, day)


def run_progress_synthesizer(ctx: AgentContext) -> Optional[Proposal]:
    payload = ctx.trigger.payload
    if not isinstance(payload, ReviewDuePayload) or payload.observation is None:
        return None
    obs = payload.observation
    return synthesize_progress(
        ctx.state, obs, ctx.item(obs.item_id), ctx.config.scheduler, payload.day, ctx.config.mastery
    )


POLICIES: dict[str, Callable[[AgentContext], Optional[Proposal]]] = {
    "skill_assessment": run_skill_assessment,
    "profiler": run_profiler,
    "feedback": run_feedback,
    "curator": run_curator,
    "engagement": run_engagement,
    "progress_synthesizer": run_progress_synthesizer,
}


class AgentBackend(ABC):
    name = "abstract"

    @abstractmethod
    def propose(self, agent_id: str, ctx: AgentContext) -> Optional[Proposal]:
        """Returns the agent's proposal for this context, or None."""


class DeterministicBackend(AgentBackend):
    name = "deterministic"

    def propose(self, agent_id: str, ctx: AgentContext) -> Optional[Proposal]:
        policy = POLICIES.get(agent_id)
        if policy is None:
            raise AgentError(f"No policy for agent {agent_id}")
        return policy(ctx)


class ReplayBackend(AgentBackend):
    """Serves proposals recorded as {version_before, agent_id, proposal} entries."""

    name = "replay"

    def __init__(self, entries: list[dict]):
        self.recorded: dict[tuple[int, str], Optional[Proposal]] = {}
        for entry in entries:
            try:
                key = (int(entry["version_before"]), str(entry["agent_id"]))
                raw = entry.get("proposal")
                self.recorded[key] = None if raw is None else Proposal.model_validate(raw)
            except (KeyError, TypeError, ValueError, ValidationError) as e:
                raise ConfigError(f"Invalid replay fixture entry {entry!r}: {e}") from e

    @classmethod
    def from_file(cls, file_path) -> "ReplayBackend":
        path = Path(file_path)
        if not path.exists():
            raise ConfigError(f"Replay fixture {path} not found.")
        with open(path, "r", encoding="utf-8") as f:
            return cls(json.load(f))

    def propose(self, agent_id: str, ctx: AgentContext) -> Optional[Proposal]:
        key = (ctx.state.version, agent_id)
        if key not in self.recorded:
            raise AgentError(f"No recorded proposal for {agent_id} at version {ctx.state.version}")
        return self.recorded[key]


def make_backend(config: TutorConfig) -> AgentBackend:
    if config.agents.backend == "replay":
        if not config.agents.replay_fixture:
            raise ConfigError("agents.replay_fixture is required for the replay backend")
        return ReplayBackend.from_file(config.agents.replay_fixture)
    return DeterministicBackend()
