"""
Parametric simulated learners.

P(pass) = logistic(slope * (effective_skill - difficulty) + level / 5 * hint_gain * responsiveness),
where effective skill decays toward half the true skill as a topic goes
unpractised: skill * (0.5 + 0.5 * exp(-days_since_practice / forgetting_tau)).
"""

import json
import math
from datetime import datetime, timedelta
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import Field, ValidationError

from config import SimulationConfig
from curriculum.bank import ERROR_TAGS, ProblemItem
from errors import ConfigError
from learner_state.models import FrozenModel, HistoricalAttempt, Observation, Preferences, Unit
from seeding import rng_for

DEFAULT_PERSONAS = Path(__file__).with_name("default_personas.json")


class Persona(FrozenModel):
    persona_id: str
    skill: dict[str, Unit] = Field(default_factory=dict)
    default_skill: Unit = 0.5
    learning_rate: float = Field(default=0.1, ge=0, le=0.2)
    hint_responsiveness: Unit = 0.5
    forgetting_tau: float = Field(default=5.0, gt=0)
    seed: int = 0
    self_reported_skill: Unit = 0.5
    expertise_rank: Unit = 0.5
    prior_attempts: int = Field(default=0, ge=0)

    def skill_for(self, topic: str) -> float:
        return self.skill.get(topic, self.default_skill)

    def preferences(self) -> Preferences:
        return Preferences(self_reported_skill=self.self_reported_skill, expertise_rank=self.expertise_rank)


def logistic(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def effective_skill(skill: float, days_since_practice: Optional[float], forgetting_tau: float) -> float:
    """Never-practised topics sit at half the true skill."""
    if days_since_practice is None:
        return 0.5 * skill
    return skill * (0.5 + 0.5 * math.exp(-max(0.0, days_since_practice) / forgetting_tau))


def pass_probability(
    skill: float,
    difficulty_value: float,
    hint_level: int,
    hint_responsiveness: float,
    config: Optional[SimulationConfig] = None,
) -> float:
    config = config or SimulationConfig()
    boost = hint_level / 5.0 * config.hint_gain * hint_responsiveness
    return logistic(config.logistic_slope * (skill - difficulty_value) + boost)


class SimulatedLearner:
    """A persona plus its evolving skills and last practice day per topic."""

    def __init__(self, persona: Persona, topics: Sequence[str] = ()):
        self.persona = persona
        self.skill = {topic: persona.skill_for(topic) for topic in topics}
        self.skill.update(persona.skill)
        self.last_practice: dict[str, int] = {}

    def skill_for(self, topic: str) -> float:
        return self.skill.get(topic, self.persona.default_skill)

    def effective_skill(self, topic: str, day: int) -> float:
        last = self.last_practice.get(topic)
        days = None if last is None else day - last
        return effective_skill(self.skill_for(topic), days, self.persona.forgetting_tau)

    def practise(self, item: ProblemItem, day: int, passed: bool) -> None:
        for topic in item.topics:
            self.last_practice[topic] = day
            if passed:
                current = self.skill_for(topic)
                self.skill[topic] = current + self.persona.learning_rate * (1.0 - current)


def persona_attempt(
    learner: SimulatedLearner,
    item: ProblemItem,
    hint_level: int,
    day: int,
    rng: np.random.Generator,
    timestamp: datetime,
    hint_count: int = 0,
    config: Optional[SimulationConfig] = None,
) -> Observation:
    """
    Simulates one attempt and updates the learner's skills.

    Draw order is fixed (pass, solve time, partial tests, error tag) so a seeded
    generator reproduces the same observation.
    """
    config = config or SimulationConfig()
    skill = learner.effective_skill(item.primary_topic, day)
    difficulty = config.difficulty_values[item.difficulty]
    p = pass_probability(skill, difficulty, hint_level, learner.persona.hint_responsiveness, config)

    passed = bool(rng.random() < p)
    expected = item.expected_solve_time or 300.0
    solve_time = float(expected * (0.6 + 0.8 * rng.random()))
    total = max(1, len(item.tests))
    tests_passed = total if passed else int(rng.integers(0, total))
    tags = item.error_tags or ERROR_TAGS
    error_tags = () if passed else (tags[int(rng.integers(0, len(tags)))],)

    learner.practise(item, day, passed)
    return Observation(
        item_id=item.id,
        passed=passed,
        timestamp=timestamp + timedelta(seconds=round(solve_time)),
        hint_count=hint_count,
        error_tags=error_tags,
        solve_time=solve_time,
        tests_passed=tests_passed,
        tests_total=total,
    )


def prior_history(
    persona: Persona,
    bank: Sequence[ProblemItem],
    start: datetime,
    config: Optional[SimulationConfig] = None,
) -> list[HistoricalAttempt]:
    """Attempts before the simulation starts, one hour apart, at the persona's true skill."""
    config = config or SimulationConfig()
    if not persona.prior_attempts or not bank:
        return []
    rng = rng_for(persona.seed, "prior-history")
    items = sorted(bank, key=lambda i: i.id)
    history = []
    for k in range(persona.prior_attempts):
        item = items[int(rng.integers(0, len(items)))]
        difficulty = config.difficulty_values[item.difficulty]
        p = pass_probability(persona.skill_for(item.primary_topic), difficulty, 0, 0.0, config)
        history.append(
            HistoricalAttempt(
                item_id=item.id,
                topics=item.topics,
                passed=bool(rng.random() < p),
                timestamp=start - timedelta(hours=persona.prior_attempts - k),
            )
        )
    return history


def load_personas(file_path: Optional[str] = None) -> list[Persona]:
    """
    Loads personas from a JSON array, or the shipped defaults.

    Raises:
        ConfigError: unreadable file or invalid persona record.
    """
    path = Path(file_path) if file_path else DEFAULT_PERSONAS
    if not path.exists():
        raise ConfigError(f"Personas file {path} not found.")
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    try:
        return [Persona.model_validate(record) for record in data]
    except ValidationError as e:
        raise ConfigError(f"Invalid personas file {path}: {e}") from e
