import math
from datetime import timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curriculum.bank import Difficulty, load_bank
from errors import RejectedInputError, UnknownTopicError
from learner_state.mastery import (
    MasteryConfig,
    apply_observation,
    init_mastery,
    recency_weight,
    uncertainty,
    update_mastery_value,
)
from learner_state.models import EPOCH, HistoricalAttempt, LearnerState, TopicMastery
from tests.conftest import T0, at, observation

NO_MOMENTUM = MasteryConfig(momentum_lambda=1.0)


def single_topic_state(m=0.5, last_update=T0, topic="arrays"):
    return LearnerState(
        learner_id="m",
        mastery={topic: TopicMastery(topic_id=topic, m=m, last_update=last_update)},
        updated_at=last_update,
    )


def test_pass_on_medium_item_moves_toward_one(items):
    item = items["arrays-02-prefix_sums"]
    deltas = apply_observation(single_topic_state(), observation(item, solve_time=100.0), item, NO_MOMENTUM)
    assert len(deltas) == 1
    assert deltas[0].before == 0.5
    assert deltas[0].after == pytest.approx(0.6)


def test_fail_on_hard_item_moves_toward_zero():
    after, tags = update_mastery_value(0.5, False, 1.2, 1.0, 0, 0.0, 900.0, NO_MOMENTUM)
    assert after == pytest.approx(0.5 - 0.2 * (1 / 1.2) * 0.5)
    assert after == pytest.approx(0.41667, abs=1e-5)
    assert tags[0] == "fail"


def test_momentum_blends_with_previous_value():
    after, tags = update_mastery_value(0.5, True, 1.0, 1.0, 0, 100.0, 600.0, MasteryConfig())
    assert after == pytest.approx(0.3 * 0.5 + 0.7 * 0.6)
    assert "momentum" in tags


def test_hint_and_time_penalties_apply_only_to_passes():
    with_hints, tags = update_mastery_value(0.5, True, 1.0, 1.0, 2, 100.0, 600.0, NO_MOMENTUM)
    assert with_hints == pytest.approx(0.56)
    assert "hint-penalty" in tags

    slow, tags = update_mastery_value(0.5, True, 1.0, 1.0, 0, 700.0, 600.0, NO_MOMENTUM)
    assert slow == pytest.approx(0.59)
    assert "time-penalty" in tags

    failed, _ = update_mastery_value(0.5, False, 1.0, 1.0, 5, 5000.0, 600.0, NO_MOMENTUM)
    assert failed == pytest.approx(0.4)


WEIGHTS = {Difficulty.EASY: 0.8, Difficulty.MEDIUM: 1.0, Difficulty.HARD: 1.2}
BANK = load_bank()


def reference_update(m, passed, w_d, w_r, hints, solve_time, mu, lam):
    if passed:
        raw = min(1.0, m + 0.2 * w_d * w_r * (1 - m))
        raw -= 0.02 * hints + 0.0001 * max(0.0, solve_time - mu)
        raw = min(1.0, max(0.0, raw))
    else:
        raw = max(0.0, m - 0.2 * (1 / w_d) * w_r * m)
    return min(1.0, max(0.0, (1 - lam) * m + lam * raw))


def reference_deltas(state, obs, item, lam):
    result = []
    for topic in item.topics:
        entry = state.mastery[topic]
        if entry.last_update <= EPOCH:
            w_r = 1.0
        else:
            w_r = math.exp(-max(0.0, (obs.timestamp - entry.last_update).total_seconds() / 86400.0) / 14.0)
        mu = item.expected_solve_time or 300.0
        result.append((topic, reference_update(entry.m, obs.passed, WEIGHTS[item.difficulty], w_r,
                                               obs.hint_count, obs.solve_time, mu, lam)))
    return result


unit = st.floats(min_value=0.0, max_value=1.0)
ages = st.one_of(st.none(), st.floats(min_value=0.0, max_value=120.0))


@st.composite
def learner_on_item(draw):
    item = draw(st.sampled_from(BANK))
    mastery = {}
    for topic in item.topics:
        age = draw(ages)
        last = EPOCH if age is None else T0 - timedelta(days=age)
        mastery[topic] = TopicMastery(topic_id=topic, m=draw(unit), last_update=last)
    return LearnerState(learner_id="h", mastery=mastery), item


@settings(max_examples=1000, deadline=None)
@given(
    drawn=learner_on_item(),
    passed=st.booleans(),
    hints=st.integers(min_value=0, max_value=5),
    solve_time=st.floats(min_value=0.0, max_value=3000.0),
    lam=st.floats(min_value=0.05, max_value=1.0),
)
def test_apply_observation_matches_reference_formula(drawn, passed, hints, solve_time, lam):
    state, item = drawn
    config = MasteryConfig(momentum_lambda=lam)
    obs = observation(item, passed=passed, hints=hints, solve_time=solve_time)
    deltas = apply_observation(state, obs, item, config)
    expected = reference_deltas(state, obs, item, lam)
    assert [d.topic for d in deltas] == [topic for topic, _ in expected]
    for delta, (topic, after) in zip(deltas, expected):
        assert delta.before == state.mastery[topic].m
        assert delta.after == pytest.approx(after, abs=1e-12), f"Mismatch for {topic}"


@pytest.mark.slow
def test_random_observations_keep_mastery_in_bounds():
    rng = np.random.default_rng(11)
    config = MasteryConfig()
    state = LearnerState(
        learner_id="b",
        mastery={t: TopicMastery(topic_id=t, m=float(rng.random())) for t in {t for i in BANK for t in i.topics}},
    )
    clock = T0
    for _ in range(100_000):
        item = BANK[int(rng.integers(len(BANK)))]
        clock += timedelta(hours=float(rng.exponential(12.0)))
        passed = bool(rng.random() < 0.5)
        obs = observation(item, passed=passed, when=clock, hints=int(rng.integers(0, 6)),
                          solve_time=float(rng.uniform(0, 4000)))
        mastery = dict(state.mastery)
        for delta in apply_observation(state, obs, item, config):
            assert 0.0 <= delta.after <= 1.0
            mastery[delta.topic] = TopicMastery(topic_id=delta.topic, m=delta.after, last_update=clock)
        state = LearnerState(learner_id="b", mastery=mastery, updated_at=clock)


@given(drawn=learner_on_item(), passed=st.booleans(), lam=st.floats(min_value=0.05, max_value=1.0))
def test_unpenalized_update_moves_with_the_outcome(drawn, passed, lam):
    state, item = drawn
    obs = observation(item, passed=passed, solve_time=item.expected_solve_time)
    for delta in apply_observation(state, obs, item, MasteryConfig(momentum_lambda=lam)):
        if passed:
            assert delta.after >= delta.before
        else:
            assert delta.after <= delta.before


@given(
    m=st.floats(min_value=0.01, max_value=0.99),
    age=st.floats(min_value=0.0, max_value=120.0),
    lam=st.floats(min_value=0.05, max_value=1.0),
)
def test_hard_items_gain_more_and_lose_less(items, m, age, lam):
    easy, hard = items["arrays-01-max_element"], items["arrays-03-rotate_right"]
    state = single_topic_state(m=m, last_update=T0 - timedelta(days=age))
    config = MasteryConfig(momentum_lambda=lam)

    def moved(item, passed):
        obs = observation(item, passed=passed, solve_time=100.0)
        return apply_observation(state, obs, item, config)[0].change

    assert moved(hard, True) > moved(easy, True) > 0
    assert moved(easy, False) < moved(hard, False) < 0


@given(
    m=unit,
    passed=st.booleans(),
    near=st.floats(min_value=0.0, max_value=120.0),
    far=st.floats(min_value=0.0, max_value=120.0),
    lam=st.floats(min_value=0.05, max_value=1.0),
)
def test_older_evidence_moves_mastery_less(items, m, passed, near, far, lam):
    near, far = sorted((near, far))
    item = items["arrays-02-prefix_sums"]
    config = MasteryConfig(momentum_lambda=lam)
    obs = observation(item, passed=passed, solve_time=300.0)

    def magnitude(age):
        state = LearnerState(
            learner_id="r",
            mastery={"arrays": TopicMastery(topic_id="arrays", m=m, last_update=T0 - timedelta(days=age))},
        )
        return abs(apply_observation(state, obs, item, config)[0].change)

    assert magnitude(far) <= magnitude(near) + 1e-12


def test_item_tagged_with_two_topics_updates_both(items):
    item = items["two_pointers-03-container_most_water"]
    assert item.topics == ("two_pointers", "arrays")
    state = LearnerState(
        learner_id="m",
        mastery={t: TopicMastery(topic_id=t, m=0.4, last_update=T0) for t in item.topics},
        updated_at=T0,
    )
    deltas = apply_observation(state, observation(item, passed=False), item, MasteryConfig())
    assert [d.topic for d in deltas] == ["two_pointers", "arrays"]
    assert all(d.after < d.before for d in deltas)


def test_observation_older_than_state_is_rejected(items):
    item = items["arrays-01-max_element"]
    with pytest.raises(RejectedInputError):
        apply_observation(single_topic_state(), observation(item, when=at(minutes=-1)), item, MasteryConfig())


def test_observation_for_another_item_is_rejected(items):
    with pytest.raises(RejectedInputError):
        apply_observation(
            single_topic_state(),
            observation(items["arrays-01-max_element"]),
            items["arrays-02-prefix_sums"],
            MasteryConfig(),
        )


def test_unknown_topic_is_reported(items):
    item = items["strings-01-is_palindrome"]
    with pytest.raises(UnknownTopicError):
        apply_observation(single_topic_state(), observation(item), item, MasteryConfig())


def history(topic, outcomes):
    return [
        HistoricalAttempt(item_id=f"{topic}-{k}", topics=(topic,), passed=p, timestamp=T0 + timedelta(minutes=k))
        for k, p in enumerate(outcomes)
    ]


def test_init_mastery_blends_overall_and_recent_success():
    config = MasteryConfig(init_noise_sigma0=0.0, recent_window=2)
    result = init_mastery(history("arrays", [False, True, True, True]), config, seed=1, topics=["strings"])
    assert result["arrays"].m == pytest.approx(0.6 * 0.75 + 0.4 * 1.0)
    assert result["arrays"].last_update == T0 + timedelta(minutes=3)
    assert result["strings"].m == 0.0
    assert (result["strings"].alpha_count, result["strings"].beta_count) == (1.0, 1.0)


def test_init_mastery_noise_is_seeded():
    config = MasteryConfig()
    attempts = history("arrays", [True, False, True])
    first = init_mastery(attempts, config, seed=3)
    assert first == init_mastery(attempts, config, seed=3)
    assert 0.0 <= first["arrays"].m <= 1.0


def test_init_mastery_requires_topic_tags():
    untagged = HistoricalAttempt(item_id="x", topics=(), passed=True, timestamp=T0)
    with pytest.raises(RejectedInputError):
        init_mastery([untagged], MasteryConfig(), seed=1)


def test_uncertainty_is_beta_mean_and_variance():
    mean, variance = uncertainty(TopicMastery(topic_id="arrays", alpha_count=3.0, beta_count=1.0))
    assert mean == pytest.approx(0.75)
    assert variance == pytest.approx(3.0 / (16.0 * 5.0))


def test_recency_weight_for_untouched_topic_is_one():
    assert recency_weight(EPOCH, T0, 14.0) == 1.0


@given(st.floats(min_value=0.0, max_value=365.0), st.floats(min_value=0.0, max_value=365.0))
def test_recency_weight_shrinks_with_age(a, b):
    near, far = sorted((a, b))
    last = T0 - timedelta(days=365)
    w_near = recency_weight(last, last + timedelta(days=near), 14.0)
    w_far = recency_weight(last, last + timedelta(days=far), 14.0)
    assert 0.0 < w_far <= w_near <= 1.0
