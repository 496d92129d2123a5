import json

import numpy as np
import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st

from config import TutorConfig
from orchestrator.state_graph import Orchestrator
from simulation.metrics import (
    AttemptRecord,
    RecallSample,
    auroc,
    brier,
    compute_metrics,
    expected_calibration_error,
    final_attempts,
    hinted_tasks,
    success_rate,
)
from simulation.personas import (
    Persona,
    SimulatedLearner,
    effective_skill,
    load_personas,
    pass_probability,
    persona_attempt,
    prior_history,
)
from simulation.report import skill_band, write_report
from simulation.reward import RewardConfig, reward
from simulation.runner import run_simulation, run_trajectory
from state_storage.canonical import state_digest
from state_storage.store import LearnerStore
from tests.conftest import T0


def test_pass_probability_examples():
    assert pass_probability(0.5, 0.5, 0, 0.7) == pytest.approx(0.5)
    assert pass_probability(0.5, 0.5, 5, 1.0) == pytest.approx(0.6900, abs=1e-4)
    assert pass_probability(0.9, 0.3, 0, 1.0) == pytest.approx(0.8581, abs=1e-4)


@given(
    skill=st.floats(min_value=0.0, max_value=1.0),
    difficulty=st.sampled_from([0.3, 0.5, 0.7]),
    responsiveness=st.floats(min_value=0.0, max_value=1.0),
)
def test_pass_probability_never_drops_with_hint_level(skill, difficulty, responsiveness):
    by_level = [pass_probability(skill, difficulty, level, responsiveness) for level in range(6)]
    assert all(0.0 < p < 1.0 for p in by_level)
    assert by_level == sorted(by_level)


def test_effective_skill_decays_toward_half():
    assert effective_skill(0.8, None, 5.0) == pytest.approx(0.4)
    assert effective_skill(0.8, 0, 5.0) == pytest.approx(0.8)
    assert 0.4 < effective_skill(0.8, 10, 5.0) < effective_skill(0.8, 2, 5.0) < 0.8


def test_reward_examples():
    config = RewardConfig()
    assert reward(0.0, False, 0, 0.0, config) == 0.0
    assert reward(0.1, False, 2, 100.0, config) == pytest.approx(0.08)
    assert reward(0.0, True, 0, 0.0, config) == pytest.approx(0.5)
    assert reward(0.0, False, 0, 400.0, config) == pytest.approx(-0.01)


def test_persona_attempt_is_seeded(items):
    item = items["arrays-02-prefix_sums"]
    persona = Persona(persona_id="p", default_skill=0.6, seed=3)
    first = persona_attempt(SimulatedLearner(persona), item, 0, 0, np.random.default_rng(5), T0)
    second = persona_attempt(SimulatedLearner(persona), item, 0, 0, np.random.default_rng(5), T0)
    assert first == second
    assert 0.6 * 600 <= first.solve_time <= 1.4 * 600
    assert first.timestamp > T0
    assert bool(first.error_tags) is not first.passed


def test_learning_only_on_pass(items):
    item = items["arrays-01-max_element"]
    learner = SimulatedLearner(Persona(persona_id="p", default_skill=0.5, learning_rate=0.1), ["arrays"])
    learner.practise(item, 0, passed=False)
    assert learner.skill_for("arrays") == 0.5
    learner.practise(item, 1, passed=True)
    assert learner.skill_for("arrays") == pytest.approx(0.55)
    assert learner.last_practice["arrays"] == 1


def test_prior_history(bank):
    persona = Persona(persona_id="p", prior_attempts=12, seed=4)
    history = prior_history(persona, bank, T0)
    assert len(history) == 12
    assert all(h.timestamp < T0 for h in history)
    assert history == prior_history(persona, bank, T0)
    assert prior_history(Persona(persona_id="q"), bank, T0) == []


def test_default_personas():
    personas = load_personas()
    assert len(personas) == 10
    assert len({p.persona_id for p in personas}) == 10


def test_calibration_sanity_cases():
    outcomes = [True, False, True, False]
    assert brier([1.0, 0.0, 1.0, 0.0], outcomes) == 0.0
    assert expected_calibration_error([1.0, 0.0, 1.0, 0.0], outcomes) == 0.0
    assert brier([0.5] * 4, outcomes) == pytest.approx(0.25)
    assert auroc([0.3] * 4, outcomes) == pytest.approx(0.5)
    assert auroc([0.9, 0.1, 0.8, 0.2], outcomes) == pytest.approx(1.0)
    assert auroc([0.9, 0.8], [True, True]) is None
    assert brier([], []) is None and expected_calibration_error([], []) is None


def test_expected_calibration_error_bins():
    # bin [0.2, 0.3): confidence 0.2, accuracy 0.5; bin [0.8, 0.9): confidence 0.8, accuracy 1.0
    ece = expected_calibration_error([0.2, 0.2, 0.8, 0.8], [True, False, True, True])
    assert ece == pytest.approx(0.5 * 0.3 + 0.5 * 0.2)


def attempt(passed, hints=0, final=True):
    return AttemptRecord(
        persona_id="p", day=T0.date(), item_id="x", topic="arrays", passed=passed,
        hint_count=hints, predicted_mastery=0.5, final_attempt=final,
    )


def test_hint_effectiveness_counts_final_hinted_attempts():
    attempts = [attempt(False, 0, final=False), attempt(True, 1), attempt(False), attempt(True)]
    assert success_rate(attempts) == pytest.approx(0.5)
    assert success_rate(final_attempts(attempts)) == pytest.approx(2 / 3)
    assert hinted_tasks(attempts) == [attempts[1]]
    assert success_rate([]) is None


def test_skill_band():
    assert [skill_band(s, (0.4, 0.6)) for s in (0.2, 0.5, 0.9)] == ["low", "medium", "high"]


def test_run_trajectory_guards(bank, config):
    persona = Persona(persona_id="p")
    with pytest.raises(ValueError):
        run_trajectory(persona, 0, bank, config)

    empty = run_simulation([persona], [], config, days=1)
    assert empty.overall.attempts == 0
    assert empty.overall.success_rate_overall is None
    assert empty.overall.success_rate_tasks is None
    assert empty.trajectories[0].final_state.version > 0


def test_trajectory_is_deterministic(bank, config):
    persona = load_personas()[3]
    first = run_trajectory(persona, 4, bank, config)
    second = run_trajectory(persona, 4, bank, config)
    assert [a.state_digest_after for a in first.audits] == [a.state_digest_after for a in second.audits]
    other = run_trajectory(persona, 4, bank, config, seed=7)
    assert state_digest(other.final_state) != state_digest(first.final_state)


def test_simulation_report_files(tmp_path, bank, config):
    personas = load_personas()[:2]
    result = run_simulation(personas, bank, config, days=3)
    out = write_report(result, tmp_path / "out", config, bank)
    metrics = json.loads((out / "metrics.json").read_text())
    assert [m["persona_id"] for m in metrics] == [p.persona_id for p in personas] + ["all"]
    frame = pd.read_csv(out / "metrics.csv")
    assert {"mean_mastery_gain", "coverage", "brier", "recall_auroc"} <= set(frame.columns)
    hints = pd.read_csv(out / "hint_effectiveness.csv")
    assert list(hints["bucket"]) == ["overall", "first_attempt", "tasks", "tasks_without_hints", "tasks_with_hints"]
    assert list(hints["unit"]) == ["submission", "submission", "task", "task", "task"]
    assert hints["count"].iloc[2] == hints["count"].iloc[3] + hints["count"].iloc[4]
    assert len(pd.read_csv(out / "learning_gains.csv")) == 2
    store = LearnerStore(out / "learners" / personas[0].persona_id)
    assert state_digest(store.reconstruct()) == state_digest(result.trajectories[0].final_state)


@pytest.fixture(scope="module")
def full_run(bank):
    config = TutorConfig()
    return config, run_simulation(load_personas(), bank, config, days=30)


@pytest.mark.slow
def test_full_simulation_replays_from_audits(full_run, bank):
    config, result = full_run
    for trajectory in result.trajectories:
        replayed = Orchestrator(bank, config).replay(trajectory.audits, trajectory.initial_state)
        assert state_digest(replayed) == state_digest(trajectory.final_state), f"Mismatch for {trajectory.persona.persona_id}"


@pytest.mark.slow
def test_hints_lift_success(full_run):
    _, result = full_run
    overall = result.overall
    assert overall.hinted_tasks > 0
    assert overall.success_rate_with_hints - overall.success_rate_overall >= 0.10


@pytest.mark.slow
def test_mastery_grows(full_run):
    _, result = full_run
    assert result.overall.mean_mastery_gain > 0
    assert len(result.metrics) == 11


@pytest.mark.slow
def test_recall_and_calibration(full_run):
    _, result = full_run
    overall = result.overall
    assert overall.recall_samples > 0
    assert overall.recall_auroc >= 0.75
    assert 0.0 <= overall.brier <= 1.0
    assert 0.0 <= overall.ece <= 1.0


@pytest.mark.slow
def test_coverage_and_latency(full_run):
    _, result = full_run
    overall = result.overall
    assert overall.coverage_report.coverage >= 0.9
    assert overall.median_trigger_latency_ms < 500
    assert overall.cumulative_reward == pytest.approx(sum(m.cumulative_reward for m in result.metrics[:-1]))


def test_compute_metrics_pools_records():
    attempts = [attempt(False, 0, final=False), attempt(True, 1), attempt(True)]
    recall = [
        RecallSample(persona_id="p", item_id="a", score=0.9, recalled=True),
        RecallSample(persona_id="p", item_id="b", score=0.2, recalled=False),
    ]
    log = [(T0.date(), "arrays-01", ("arrays",)), (T0.date(), "strings-01", ("strings",))]
    metrics = compute_metrics(attempts, recall, [0.1, 0.3], log, ["arrays", "strings"], [4.0, 8.0, 6.0], horizon=1)
    assert metrics.mean_mastery_gain == pytest.approx(0.2)
    assert metrics.success_rate_overall == pytest.approx(2 / 3)
    assert metrics.success_rate_tasks == 1.0
    assert metrics.success_rate_with_hints == 1.0
    assert (metrics.attempts, metrics.tasks, metrics.hinted_tasks) == (3, 2, 1)
    assert metrics.recall_auroc == 1.0
    assert metrics.brier == pytest.approx((0.25 + 0.25 + 0.25) / 3)
    assert metrics.coverage_report.coverage == 1.0
    assert metrics.median_trigger_latency_ms == 6.0
