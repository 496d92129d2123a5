"""
Engine configuration.

One JSON file with a section per concern. Missing keys keep their defaults,
unknown keys are refused.
"""

import json
import logging
from datetime import date
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, ValidationError

from curriculum.bank import Difficulty
from curriculum.policy import CurriculumConfig
from errors import ConfigError
from learner_state.mastery import MasteryConfig
from learner_state.models import FrozenModel
from learner_state.proficiency import ProficiencyWeights
from scheduler.sm2 import SchedulerConfig
from simulation.reward import RewardConfig

logger = logging.getLogger(__name__)


class AgentsConfig(FrozenModel):
    backend: Literal["deterministic", "replay"] = "deterministic"
    replay_fixture: Optional[str] = None
    inactivity_days: int = Field(default=3, ge=1)
    failure_streak_threshold: int = Field(default=3, ge=1)
    streak_nudge_min: int = Field(default=3, ge=1)
    fatigue_ratio: float = Field(default=2.0, gt=0)
    fatigue_success_max: float = Field(default=0.4, ge=0, le=1)
    memory_cap: int = Field(default=20, ge=1)
    action_log_days: int = Field(default=8, ge=1)


class SimulationConfig(FrozenModel):
    days: int = Field(default=30, ge=1)
    logistic_slope: float = Field(default=3.0, gt=0)
    hint_gain: float = Field(default=0.8, ge=0)
    difficulty_values: dict[Difficulty, float] = Field(
        default_factory=lambda: {Difficulty.EASY: 0.3, Difficulty.MEDIUM: 0.5, Difficulty.HARD: 0.7}
    )
    max_hint_requests: int = Field(default=4, ge=0)
    start_date: date = date(2025, 1, 6)
    skill_bands: tuple[float, float] = (0.4, 0.6)


class TutorConfig(FrozenModel):
    mastery: MasteryConfig = Field(default_factory=MasteryConfig)
    proficiency: ProficiencyWeights = Field(default_factory=ProficiencyWeights)
    scheduler: SchedulerConfig = Field(default_factory=SchedulerConfig)
    curriculum: CurriculumConfig = Field(default_factory=CurriculumConfig)
    reward: RewardConfig = Field(default_factory=RewardConfig)
    agents: AgentsConfig = Field(default_factory=AgentsConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    seed: int = 42


def parse_config(data: dict) -> TutorConfig:
    try:
        return TutorConfig.model_validate(data)
    except ValidationError as e:
        keys = ", ".join(".".join(str(part) for part in err["loc"]) for err in e.errors())
        raise ConfigError(f"Invalid configuration ({keys}): {e}") from e


def load_config(file_path: Optional[str] = None) -> TutorConfig:
    """
    Loads a configuration file, or the defaults when no path is given.

    Args:
        file_path (str, optional): Path to a JSON configuration file.

    Returns:
        TutorConfig: Validated configuration.
    """
    if file_path is None:
        return TutorConfig()
    path = Path(file_path)
    if not path.exists():
        raise ConfigError(f"Config file {path} not found.")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    logger.info("Loaded configuration from %s", path)
    return parse_config(data)


def save_config(config: TutorConfig, file_path) -> None:
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(config.model_dump_json(indent=2))
