import math
from datetime import date

import numpy as np
from pydantic import model_validator

from learner_state.mastery import clamp, mean_mastery
from learner_state.models import FrozenModel, LearnerState, Unit

STREAK_HORIZON_DAYS = 30


class ProficiencyWeights(FrozenModel):
    w_mastery_avg: Unit = 0.40
    w_expertise_rank: Unit = 0.25
    w_self_reported: Unit = 0.20
    w_recent_success: Unit = 0.10
    w_streak_norm: Unit = 0.05

    @model_validator(mode="after")
    def _sum_to_one(self):
        if not math.isclose(math.fsum(self.as_tuple()), 1.0, abs_tol=1e-12):
            raise ValueError("proficiency weights must sum to 1.0")
        return self

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.w_mastery_avg,
            self.w_expertise_rank,
            self.w_self_reported,
            self.w_recent_success,
            self.w_streak_norm,
        )


def streak_norm(streak_days: int) -> float:
    return min(streak_days / STREAK_HORIZON_DAYS, 1.0)


def proficiency_signals(state: LearnerState, today: date) -> tuple[float, float]:
    """
    Derives (recent_success, streak_norm) from engagement.

    A streak whose last activity is older than yesterday has lapsed and counts as 0.
    """
    engagement = state.engagement
    recent = float(np.mean(engagement.recent_outcomes)) if engagement.recent_outcomes else 0.0
    streak = 0
    if engagement.last_seen is not None and (today - engagement.last_seen.date()).days <= 1:
        streak = engagement.streak_days
    return recent, streak_norm(streak)


def compute_proficiency(
    state: LearnerState,
    weights: ProficiencyWeights,
    recent_success: float,
    streak_norm: float,
) -> float:
    """
    p_hat = sum_k w_k s_k over mastery average, expertise rank, self-report,
    recent success and streak. An empty mastery map averages to 0.
    """
    signals = (
        mean_mastery(state),
        state.preferences.expertise_rank,
        state.preferences.self_reported_skill,
        recent_success,
        streak_norm,
    )
    for value in signals:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"proficiency component {value} outside [0, 1]")
    return clamp(math.fsum(w * s for w, s in zip(weights.as_tuple(), signals)))


def current_proficiency(state: LearnerState, weights: ProficiencyWeights, today: date) -> float:
    recent, streak = proficiency_signals(state, today)
    return compute_proficiency(state, weights, recent, streak)
