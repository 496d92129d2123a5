"""
Enhanced SM-2: quality grading, ease updates, interval sequencing, recall
prediction and context-aware interval adjustment.
"""

import math
from typing import Optional

from pydantic import Field, model_validator

from learner_state.models import FrozenModel, Observation

MIN_EASE = 1.3
FIRST_INTERVAL = 1
SECOND_INTERVAL = 6


class SchedulerConfig(FrozenModel):
    hint_threshold: int = Field(default=2, ge=0)
    shorten_factor: float = Field(default=0.7, gt=0, lt=1)
    lengthen_factor: float = Field(default=1.2, gt=1)
    fast_fraction: float = Field(default=0.5, gt=0, lt=1)
    quality_fast_fraction: float = Field(default=0.75, gt=0)
    recall_min: float = Field(default=0.6, gt=0, lt=1)
    tau_scale_c: float = Field(default=1.0, gt=0)
    daily_cap: int = Field(default=20, ge=1)

    @model_validator(mode="after")
    def _factors_straddle_one(self):
        if not self.shorten_factor < 1.0 < self.lengthen_factor:
            raise ValueError("need shorten_factor < 1 < lengthen_factor")
        return self


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def derive_quality(obs: Observation, expected_time: float, config: Optional[SchedulerConfig] = None) -> int:
    """
    Grades an attempt on the 0-5 SM-2 scale.

    5 fast and unaided, 4 unaided, 3 solved with hints, 2 failed with some tests
    passing, 1 failed every test, 0 abandoned.
    """
    if expected_time <= 0:
        raise ValueError("expected_time must be positive")
    fast_fraction = (config or SchedulerConfig()).quality_fast_fraction
    if obs.abandoned:
        return 0
    if obs.passed:
        if obs.hint_count > 0:
            return 3
        return 5 if obs.solve_time <= fast_fraction * expected_time else 4
    return 2 if obs.tests_passed >= 1 else 1


def update_ease(ef: float, q: int) -> float:
    if not 0 <= q <= 5:
        raise ValueError(f"quality {q} outside 0..5")
    return max(MIN_EASE, ef - 0.8 + 0.28 * q - 0.02 * q * q)


def next_interval(n_reviews: int, prev_interval: int, ef_new: float) -> int:
    """I1 = 1, I2 = 6, In = round(I(n-1) * EF') for completed-review count n_reviews."""
    if n_reviews <= 0:
        return FIRST_INTERVAL
    if n_reviews == 1:
        return SECOND_INTERVAL
    return max(1, round_half_up(prev_interval * ef_new))


def recall_tau(ef: float, interval: float, config: SchedulerConfig) -> float:
    return config.tau_scale_c * ef * interval


def predict_recall(delta_t: float, ef: float, interval: float, config: SchedulerConfig) -> float:
    """R(dt) = exp(-dt / tau) with tau = c * EF * interval."""
    if delta_t < 0:
        raise ValueError("delta_t must be non-negative")
    return math.exp(-delta_t / recall_tau(ef, interval, config))


def adjust_interval(
    base: int,
    obs: Observation,
    expected_time: float,
    ef: float,
    config: SchedulerConfig,
) -> int:
    """
    Applies context adjustments to an SM-2 interval.

    Heavy hint use shortens it, a fast unaided pass lengthens it, and if the
    predicted recall at the resulting due date falls below recall_min the review
    is pulled forward to the day recall crosses that threshold.

    Returns:
        int: Adjusted interval in days, never below 1.
    """
    interval = max(1, int(base))
    if obs.hint_count > config.hint_threshold:
        # strictly shorter whenever there is a day to give up
        interval = min(math.ceil(interval * config.shorten_factor), max(1, interval - 1))
    elif obs.passed and obs.hint_count == 0 and obs.solve_time < config.fast_fraction * expected_time:
        interval = round_half_up(interval * config.lengthen_factor)
    interval = max(1, interval)

    if predict_recall(interval, ef, interval, config) < config.recall_min:
        tau = recall_tau(ef, interval, config)
        interval = math.floor(-tau * math.log(config.recall_min))
    return max(1, interval)
