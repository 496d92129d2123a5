"""
BKT-inspired mastery estimation: cold-start initialization, per-observation
updates and Beta uncertainty.

All functions are pure. apply_observation returns deltas; the orchestrator
decides whether and how they are committed.
"""

import logging
import math
from collections import defaultdict
from datetime import datetime
from typing import Iterable, Literal, Optional

import numpy as np
from pydantic import Field, field_validator

from curriculum.bank import Difficulty, ProblemItem
from errors import RejectedInputError, UnknownTopicError
from learner_state.models import (
    EPOCH,
    FrozenModel,
    HistoricalAttempt,
    LearnerState,
    MemorySections,
    Observation,
    Preferences,
    Timestamp,
    TopicMastery,
    Unit,
)
from seeding import rng_for

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400.0


class MasteryConfig(FrozenModel):
    learn_rate_alpha: float = Field(default=0.2, gt=0)
    forget_rate_beta: float = Field(default=0.2, gt=0)
    difficulty_weights: dict[Difficulty, float] = Field(
        default_factory=lambda: {Difficulty.EASY: 0.8, Difficulty.MEDIUM: 1.0, Difficulty.HARD: 1.2}
    )
    recency_tau: float = Field(default=14.0, gt=0)
    hint_penalty_eta_h: float = Field(default=0.02, ge=0)
    time_penalty_eta_t: float = Field(default=0.0001, ge=0)
    momentum_lambda: float = Field(default=0.7, gt=0, le=1)
    init_noise_sigma0: float = Field(default=0.05, ge=0)
    recent_window: int = Field(default=10, ge=1)
    default_solve_time: float = Field(default=300.0, gt=0)

    @field_validator("difficulty_weights")
    @classmethod
    def _three_difficulties(cls, value):
        if set(value) != set(Difficulty):
            raise ValueError("difficulty_weights needs exactly Easy, Medium and Hard")
        if any(weight <= 0 for weight in value.values()):
            raise ValueError("difficulty weights must be positive")
        return value


class MasteryDelta(FrozenModel):
    kind: Literal["mastery"] = "mastery"
    topic: str
    before: Unit
    after: Unit
    passed: bool
    solve_time: float = 0.0
    observed_at: Timestamp = EPOCH
    rationale: tuple[str, ...] = ()

    @property
    def change(self) -> float:
        return self.after - self.before


def clamp(value: float, low: float = 0.0, high: float = 1.0) -> float:
    return min(high, max(low, value))


def init_mastery(
    history: Iterable[HistoricalAttempt],
    config: MasteryConfig,
    seed: int,
    topics: Iterable[str] = (),
) -> dict[str, TopicMastery]:
    """
    Computes the cold-start mastery map from historical attempts.

    m0 = clamp(0.6 * success_rate + 0.4 * recent_success_rate + N(0, sigma0^2), 0, 1),
    where the recent window is the topic's last `recent_window` attempts. Topics
    without history start at 0 with Beta(1, 1).

    Args:
        history: Historical attempts, each tagged with at least one topic.
        config (MasteryConfig): Supplies sigma0 and the recent window.
        seed (int): Seed for the initialization noise.
        topics: Extra topics (usually the bank's) that start cold if absent from history.

    Returns:
        dict: topic_id -> TopicMastery.
    """
    per_topic = defaultdict(list)
    for attempt in history:
        if not attempt.topics:
            raise RejectedInputError(f"Historical attempt on {attempt.item_id} has no topic tags")
        for topic in attempt.topics:
            per_topic[topic].append(attempt)

    result = {}
    for topic in sorted(set(topics) | set(per_topic)):
        attempts = sorted(per_topic.get(topic, []), key=lambda a: a.timestamp)
        if not attempts:
            result[topic] = TopicMastery(topic_id=topic)
            continue

        outcomes = [a.passed for a in attempts]
        recent = outcomes[-config.recent_window:]
        m0 = 0.6 * float(np.mean(outcomes)) + 0.4 * float(np.mean(recent))
        if config.init_noise_sigma0 > 0:
            m0 += float(rng_for(seed, "init-mastery", topic).normal(0.0, config.init_noise_sigma0))
        result[topic] = TopicMastery(
            topic_id=topic,
            m=clamp(m0),
            last_update=attempts[-1].timestamp,
            recent_outcomes=tuple(recent),
        )
    return result


def expected_solve_time(item: ProblemItem, topic: TopicMastery, config: MasteryConfig) -> float:
    """mu_i: the item's expectation, else the median of recent solve times, else the default."""
    if item.expected_solve_time:
        return float(item.expected_solve_time)
    if topic.recent_solve_times:
        return float(np.median(topic.recent_solve_times))
    return config.default_solve_time


def recency_weight(last_update: datetime, now: datetime, tau_days: float) -> float:
    """exp(-days / tau); a topic with no evidence yet (last_update at EPOCH) weighs 1."""
    if last_update <= EPOCH:
        return 1.0
    delta_days = max(0.0, (now - last_update).total_seconds() / SECONDS_PER_DAY)
    return math.exp(-delta_days / tau_days)


def update_mastery_value(
    m: float,
    passed: bool,
    w_d: float,
    w_r: float,
    hints: int,
    solve_time: float,
    mu: float,
    config: MasteryConfig,
) -> tuple[float, tuple[str, ...]]:
    """
    One topic's update: raw case split, pass-only penalties, then momentum.

    Returns:
        tuple: (final mastery, rationale tags).
    """
    tags = [f"recency={w_r:.3f}", f"difficulty={w_d:.2f}"]
    if passed:
        raw = min(1.0, m + config.learn_rate_alpha * w_d * w_r * (1.0 - m))
        penalty = config.hint_penalty_eta_h * hints + config.time_penalty_eta_t * max(0.0, solve_time - mu)
        if hints:
            tags.append("hint-penalty")
        if solve_time > mu:
            tags.append("time-penalty")
        raw = clamp(raw - penalty)
        tags.insert(0, "pass")
    else:
        raw = max(0.0, m - config.forget_rate_beta * (1.0 / w_d) * w_r * m)
        tags.insert(0, "fail")

    lam = config.momentum_lambda
    final = clamp((1.0 - lam) * m + lam * raw)
    if lam < 1.0:
        tags.append("momentum")
    return final, tuple(tags)


def apply_observation(
    state: LearnerState,
    obs: Observation,
    item: ProblemItem,
    config: MasteryConfig,
) -> list[MasteryDelta]:
    """
    Computes per-topic mastery deltas for one observation without touching state.

    Raises:
        RejectedInputError: item mismatch, negative solve time, or an observation
            older than the state's last update.
        UnknownTopicError: the item is tagged with a topic the learner has no entry for.
    """
    if obs.item_id != item.id:
        raise RejectedInputError(f"Observation for {obs.item_id} applied to item {item.id}")
    if obs.solve_time < 0:
        raise RejectedInputError(f"Negative solve time {obs.solve_time} on {obs.item_id}")
    if obs.timestamp < state.updated_at:
        raise RejectedInputError(
            f"Observation at {obs.timestamp.isoformat()} predates state update {state.updated_at.isoformat()}"
        )

    w_d = config.difficulty_weights[item.difficulty]
    deltas = []
    for topic_id in item.topics:
        topic = state.mastery.get(topic_id)
        if topic is None:
            raise UnknownTopicError(f"Item {item.id} is tagged with unknown topic {topic_id}")
        w_r = recency_weight(topic.last_update, obs.timestamp, config.recency_tau)
        mu = expected_solve_time(item, topic, config)
        after, tags = update_mastery_value(
            topic.m, obs.passed, w_d, w_r, obs.hint_count, obs.solve_time, mu, config
        )
        deltas.append(
            MasteryDelta(
                topic=topic_id,
                before=topic.m,
                after=after,
                passed=obs.passed,
                solve_time=obs.solve_time,
                observed_at=obs.timestamp,
                rationale=tags,
            )
        )
    logger.debug("Observation on %s produced %d mastery deltas", item.id, len(deltas))
    return deltas


def uncertainty(topic: TopicMastery) -> tuple[float, float]:
    """Mean and variance of Beta(alpha_count, beta_count)."""
    a, b = topic.alpha_count, topic.beta_count
    total = a + b
    return a / total, (a * b) / (total * total * (total + 1.0))


def mean_mastery(state: LearnerState) -> float:
    if not state.mastery:
        return 0.0
    return float(np.mean([topic.m for topic in state.mastery.values()]))


def topic_mastery(state: LearnerState, topic_id: str) -> Optional[float]:
    topic = state.mastery.get(topic_id)
    return None if topic is None else topic.m


def new_learner_state(
    learner_id: str,
    preferences: Preferences,
    history: Iterable[HistoricalAttempt],
    topics: Iterable[str],
    config: MasteryConfig,
    seed: int,
    memory_cap: int = 20,
) -> LearnerState:
    """Builds version 0 of a learner: initialized mastery, empty queue and logs."""
    history = list(history)
    mastery = init_mastery(history, config, seed, topics)
    updated_at = max((a.timestamp for a in history), default=EPOCH)
    return LearnerState(
        learner_id=learner_id,
        mastery=mastery,
        preferences=preferences,
        memory=MemorySections(cap_per_section=memory_cap),
        version=0,
        updated_at=updated_at,
    )
