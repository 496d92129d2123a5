import math

import pytest
from pydantic import ValidationError

from learner_state.models import EngagementState, LearnerState, Preferences, TopicMastery
from learner_state.proficiency import (
    ProficiencyWeights,
    compute_proficiency,
    current_proficiency,
    proficiency_signals,
    streak_norm,
)
from tests.conftest import T0, at


def learner(m=0.5, expertise=0.4, skill=0.5, engagement=None):
    return LearnerState(
        learner_id="p",
        mastery={t: TopicMastery(topic_id=t, m=m) for t in ("arrays", "strings")},
        preferences=Preferences(self_reported_skill=skill, expertise_rank=expertise),
        engagement=engagement or EngagementState(),
    )


def test_default_weights_sum_to_one():
    assert math.fsum(ProficiencyWeights().as_tuple()) == pytest.approx(1.0)


def test_weights_that_do_not_sum_to_one_are_refused():
    with pytest.raises(ValidationError):
        ProficiencyWeights(w_mastery_avg=0.5)


@pytest.mark.parametrize(
    "state, recent, streak, expected",
    [
        (learner(), 0.8, 0.5, 0.4 * 0.5 + 0.25 * 0.4 + 0.2 * 0.5 + 0.1 * 0.8 + 0.05 * 0.5),
        (LearnerState(learner_id="empty"), 0.0, 0.0, 0.0),
        (learner(m=1.0, expertise=1.0, skill=1.0), 1.0, 1.0, 1.0),
    ],
)
def test_compute_proficiency(state, recent, streak, expected):
    assert compute_proficiency(state, ProficiencyWeights(), recent, streak) == pytest.approx(expected)


def test_component_outside_unit_interval_is_an_error():
    with pytest.raises(ValueError):
        compute_proficiency(learner(), ProficiencyWeights(), 1.5, 0.0)


def test_streak_norm_saturates():
    assert streak_norm(15) == 0.5
    assert streak_norm(90) == 1.0


def test_signals_from_engagement():
    engagement = EngagementState(
        streak_days=6,
        last_seen=at(days=-1),
        recent_outcomes=(True, True, False, True),
    )
    recent, streak = proficiency_signals(learner(engagement=engagement), T0.date())
    assert recent == pytest.approx(0.75)
    assert streak == pytest.approx(0.2)


def test_lapsed_streak_counts_as_zero():
    engagement = EngagementState(streak_days=6, last_seen=at(days=-3), recent_outcomes=(True,))
    state = learner(engagement=engagement)
    _, streak = proficiency_signals(state, T0.date())
    assert streak == 0.0
    assert current_proficiency(state, ProficiencyWeights(), T0.date()) == pytest.approx(
        0.4 * 0.5 + 0.25 * 0.4 + 0.2 * 0.5 + 0.1 * 1.0
    )
