"""
Seeded simulation of persona trajectories through the orchestrator.

Each simulated day fires on_session_check at midnight and on_daily_generation at
08:00, then works through the daily set from 09:00: the persona attempts an item,
may ask for hints after failures, and the item's review is scheduled from the
episode's final observation. Every trigger goes through `Orchestrator.process`.
"""

import logging
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone
from typing import Optional, Sequence

import numpy as np

from agents.backends import make_backend
from config import TutorConfig
from curriculum.bank import ProblemItem, bank_topics, index_bank
from learner_state.mastery import mean_mastery, new_learner_state
from learner_state.models import EPOCH, LearnerState
from orchestrator import session
from orchestrator.state_graph import AuditRecord, Orchestrator
from scheduler.review_queue import recall_on
from seeding import derive_seed, rng_for
from simulation.metrics import AttemptRecord, RecallSample, TrajectoryMetrics, compute_metrics
from simulation.personas import Persona, SimulatedLearner, persona_attempt, prior_history
from simulation.reward import reward

logger = logging.getLogger(__name__)

DAILY_GENERATION_AT = time(8, 0)
SESSION_START_AT = time(9, 0)
SLOT_MINUTES = 30
HINT_READ_SECONDS = 30


@dataclass
class TrajectoryResult:
    persona: Persona
    initial_state: LearnerState
    final_state: LearnerState
    audits: list[AuditRecord] = field(default_factory=list)
    attempts: list[AttemptRecord] = field(default_factory=list)
    recall: list[RecallSample] = field(default_factory=list)
    selection_log: list[tuple[date, str, tuple[str, ...]]] = field(default_factory=list)

    @property
    def gain(self) -> float:
        return mean_mastery(self.final_state) - mean_mastery(self.initial_state)

    @property
    def latencies_ms(self) -> list[float]:
        return [audit.wall_time_ms for audit in self.audits]


@dataclass
class SimulationResult:
    trajectories: list[TrajectoryResult]
    metrics: list[TrajectoryMetrics]
    days: int

    @property
    def overall(self) -> TrajectoryMetrics:
        return self.metrics[-1]


def _at(day: date, at: time) -> datetime:
    return datetime.combine(day, at, tzinfo=timezone.utc)


def _topic_mean(state: LearnerState, topics: Sequence[str]) -> float:
    values = [state.mastery[t].m for t in topics if t in state.mastery]
    return float(np.mean(values)) if values else 0.0


def initial_state(persona: Persona, bank: Sequence[ProblemItem], config: TutorConfig, seed: int) -> LearnerState:
    start = _at(config.simulation.start_date, time(0, 0))
    history = prior_history(persona, bank, start, config.simulation)
    return new_learner_state(
        persona.persona_id,
        persona.preferences(),
        history,
        bank_topics(bank),
        config.mastery,
        derive_seed(seed, persona.persona_id, "init"),
        memory_cap=config.agents.memory_cap,
    )


class _Trajectory:
    """Mutable bookkeeping for one persona's run."""

    def __init__(self, persona: Persona, bank: Sequence[ProblemItem], config: TutorConfig, seed: int):
        self.persona = persona
        self.config = config
        self.seed = seed
        self.items = index_bank(bank)
        self.orchestrator = Orchestrator(bank, config, make_backend(config))
        self.state = initial_state(persona, bank, config, seed)
        self.learner = SimulatedLearner(persona, sorted(bank_topics(bank)))
        self.result = TrajectoryResult(persona=persona, initial_state=self.state, final_state=self.state)
        self.clock = self.state.updated_at
        # prior attempts count as practice the day before the run starts
        for topic, mastery in self.state.mastery.items():
            if mastery.last_update > EPOCH:
                self.learner.last_practice[topic] = -1

    def fire(self, state_and_audits) -> None:
        state, audits = state_and_audits
        if isinstance(audits, AuditRecord):
            audits = [audits]
        self.state = state
        self.result.audits.extend(audits)

    def run_day(self, index: int, day: date) -> None:
        self.fire(session.session_check(self.orchestrator, self.state, day))
        self.fire(session.daily_generation(self.orchestrator, self.state, day, _at(day, DAILY_GENERATION_AT)))
        for slot_index, action in enumerate(session.daily_set(self.state, day)):
            item = self.items.get(action.item_id)
            if item is None:
                continue
            self.result.selection_log.append((day, item.id, item.topics))
            started = _at(day, SESSION_START_AT) + timedelta(minutes=SLOT_MINUTES * slot_index)
            self.episode(index, day, item, started)

    def episode(self, index: int, day: date, item: ProblemItem, started: datetime) -> None:
        rng = rng_for(self.persona.seed, self.seed, day.isoformat(), item.id)
        sim = self.config.simulation
        review = self.state.review_for(item.id)
        due = review is None or review.due_date <= day
        recall_score = None
        if review is not None and review.due_date <= day:
            recall_score = recall_on(review, day, self.config.scheduler)

        timestamp = max(started, self.clock)
        hints = 0
        level = 0
        submitted = []
        while True:
            predicted = self.state.mastery[item.primary_topic].m if item.primary_topic in self.state.mastery else 0.0
            before = _topic_mean(self.state, item.topics)
            observation = persona_attempt(self.learner, item, level, index, rng, timestamp, hints, sim)
            self.fire(session.submit_attempt(self.orchestrator, self.state, observation, review=False))
            delta_m = _topic_mean(self.state, item.topics) - before
            submitted.append((observation, predicted, delta_m))
            timestamp = observation.timestamp
            if observation.passed or hints >= sim.max_hint_requests:
                break
            if rng.random() >= self.persona.hint_responsiveness:
                break
            timestamp += timedelta(seconds=HINT_READ_SECONDS)
            self.fire(session.request_hint(self.orchestrator, self.state, item.id, timestamp))
            hint = session.latest_hint(self.state, item.id)
            hints += 1
            if hint is not None and hint.issued_at == timestamp:
                level = hint.level

        for k, (observation, predicted, delta_m) in enumerate(submitted):
            self.result.attempts.append(
                AttemptRecord(
                    persona_id=self.persona.persona_id,
                    day=day,
                    item_id=item.id,
                    topic=item.primary_topic,
                    passed=observation.passed,
                    hint_count=observation.hint_count,
                    predicted_mastery=predicted,
                    first_attempt=k == 0,
                    final_attempt=k == len(submitted) - 1,
                    reward=reward(
                        delta_m,
                        recall_score is not None and observation.passed,
                        observation.hint_count,
                        observation.solve_time,
                        self.config.reward,
                    ),
                )
            )
        if recall_score is not None:
            self.result.recall.append(
                RecallSample(
                    persona_id=self.persona.persona_id,
                    item_id=item.id,
                    score=recall_score,
                    recalled=submitted[0][0].passed,
                )
            )

        final = submitted[-1][0]
        self.clock = final.timestamp
        if due:
            self.fire(session.review_due(self.orchestrator, self.state, day, final, final.timestamp))


def run_trajectory(
    persona: Persona,
    days: int,
    bank: Sequence[ProblemItem],
    config: Optional[TutorConfig] = None,
    seed: Optional[int] = None,
) -> TrajectoryResult:
    """
    Simulates one persona for `days` days.

    Args:
        persona (Persona): Simulated learner.
        days (int): Number of simulated days, at least 1.
        bank (list[ProblemItem]): Problem bank.
        config (TutorConfig, optional): Engine configuration; defaults when omitted.
        seed (int, optional): Run seed; the config seed when omitted.

    Returns:
        TrajectoryResult: States, audit records and the metric inputs.
    """
    if days < 1:
        raise ValueError("days must be at least 1")
    config = config or TutorConfig()
    seed = config.seed if seed is None else seed
    run = _Trajectory(persona, bank, config, seed)
    start = config.simulation.start_date
    for index in range(days):
        run.run_day(index, start + timedelta(days=index))
    run.result.final_state = run.state
    logger.info(
        "Persona %s: %d triggers, %d attempts, gain %.4f",
        persona.persona_id,
        len(run.result.audits),
        len(run.result.attempts),
        run.result.gain,
    )
    return run.result


def trajectory_metrics(
    trajectories: Sequence[TrajectoryResult],
    bank: Sequence[ProblemItem],
    days: int,
    persona_id: str = "all",
) -> TrajectoryMetrics:
    """Pools the records of several trajectories into one metrics row."""
    return compute_metrics(
        attempts=[a for t in trajectories for a in t.attempts],
        recall=[r for t in trajectories for r in t.recall],
        gains=[t.gain for t in trajectories],
        selection_log=[entry for t in trajectories for entry in t.selection_log],
        bank_topics=bank_topics(bank),
        latencies_ms=[ms for t in trajectories for ms in t.latencies_ms],
        horizon=days,
        persona_id=persona_id,
    )


def run_simulation(
    personas: Sequence[Persona],
    bank: Sequence[ProblemItem],
    config: Optional[TutorConfig] = None,
    days: Optional[int] = None,
    seed: Optional[int] = None,
) -> SimulationResult:
    """
    Runs every persona independently and reports per-persona plus pooled metrics.

    Returns:
        SimulationResult: Trajectories and one metrics row per persona, then the `all` row.
    """
    config = config or TutorConfig()
    days = days or config.simulation.days
    trajectories = [run_trajectory(persona, days, bank, config, seed) for persona in personas]
    metrics = [trajectory_metrics([t], bank, days, t.persona.persona_id) for t in trajectories]
    metrics.append(trajectory_metrics(trajectories, bank, days))
    return SimulationResult(trajectories=trajectories, metrics=metrics, days=days)
