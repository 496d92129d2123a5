import json
from datetime import date, timedelta
from pathlib import Path

import networkx as nx
import pytest

from curriculum.bank import (
    Difficulty,
    ProblemItem,
    bank_topics,
    load_bank,
    prerequisite_graph,
    shares_solution_span,
    validate_bank,
)
from curriculum.coverage import coverage_report
from curriculum.policy import (
    CurriculumConfig,
    Zone,
    apportion,
    classify_zone,
    eligible_items,
    select_daily_set,
)
from errors import BankError
from learner_state.models import LearnerState, ReviewItem, TopicMastery

TODAY = date(2025, 1, 6)
SAMPLE_BANK = Path(__file__).resolve().parent.parent / "curriculum" / "sample_bank.json"


def item(item_id, topics=("x",), prerequisites=(), **extra):
    return ProblemItem(
        id=item_id,
        topics=topics,
        difficulty=Difficulty.EASY,
        prerequisites=prerequisites,
        **extra,
    )


def state_with(bank, mastery_for):
    topics = sorted(bank_topics(bank))
    return LearnerState(
        learner_id="c",
        mastery={t: TopicMastery(topic_id=t, m=mastery_for(t)) for t in topics},
    )


def due(item_id, topic):
    return ReviewItem(item_id=item_id, topics=(topic,), due_date=TODAY)


def test_default_bank_shape(bank):
    assert len(bank) == 60
    assert len(bank_topics(bank)) == 20
    assert nx.is_directed_acyclic_graph(prerequisite_graph(bank))
    assert [i.id for i in bank] == sorted(i.id for i in bank)


def test_default_bank_never_discloses_solutions(bank):
    for entry in bank:
        for key, text in entry.hint_templates.items():
            assert not shares_solution_span(text, entry.reference_solution), f"Disclosure in {entry.id} {key}"
        for category, lines in entry.suggestions.items():
            for line in lines:
                assert not shares_solution_span(line, entry.reference_solution), f"Disclosure in {entry.id} {category}"


def test_disclosure_detection():
    solution = "def smallest(xs):\n    return sorted(xs)[0]"
    assert shares_solution_span("you could return sorted(xs)[0] directly", solution)
    assert not shares_solution_span("sorting first helps", solution)
    assert not shares_solution_span("short", solution)


@pytest.mark.parametrize(
    "bank",
    [
        [item("a"), item("a")],
        [item("a", prerequisites=("missing",))],
        [item("a", topics=("x",), prerequisites=("y",)), item("b", topics=("y",), prerequisites=("x",))],
        [
            item(
                "a",
                reference_solution="def smallest(xs):\n    return sorted(xs)[0]",
                hint_templates={"1:beginner": "write return sorted(xs)[0] and you are done"},
            )
        ],
    ],
    ids=["duplicate-id", "unknown-prerequisite", "cycle", "disclosing-hint"],
)
def test_invalid_banks_are_refused(bank):
    with pytest.raises(BankError):
        validate_bank(bank)


def test_load_bank_from_file(tmp_path):
    assert len(load_bank(str(SAMPLE_BANK))) == 4

    path = tmp_path / "bank.json"
    path.write_text(json.dumps([item("b").model_dump(mode="json"), item("a").model_dump(mode="json")]))
    assert [i.id for i in load_bank(str(path))] == ["a", "b"]

    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps([{"id": "x"}]))
    with pytest.raises(BankError):
        load_bank(str(broken))
    with pytest.raises(FileNotFoundError):
        load_bank(str(tmp_path / "absent.json"))


def test_apportion():
    assert apportion(10, (0.4, 0.5, 0.1)) == (4, 5, 1)
    assert apportion(1, (0.4, 0.5, 0.1)) == (0, 1, 0)
    assert apportion(3, (0.4, 0.5, 0.1)) == (1, 2, 0)
    assert sum(apportion(7, (0.4, 0.5, 0.1))) == 7


@pytest.mark.parametrize(
    "m, zone",
    [(0.0, Zone.CHALLENGE), (0.29, Zone.CHALLENGE), (0.3, Zone.GROWTH), (0.7, Zone.GROWTH), (0.71, Zone.MASTERED)],
)
def test_classify_zone(m, zone):
    assert classify_zone(m) is zone


def test_daily_set_composition(bank):
    state = state_with(bank, lambda t: 0.1 if t in ("greedy", "heaps") else 0.5)
    reviews = [
        due("arrays-01-max_element", "arrays"),
        due("strings-01-is_palindrome", "strings"),
        due("math-01-is_even_sum", "math"),
        due("stacks-01-reverse_with_stack", "stacks"),
    ]
    daily = select_daily_set(state, bank, reviews, TODAY, CurriculumConfig(), seed=11)
    assert (daily.count("review"), daily.count("growth"), daily.count("challenge")) == (4, 5, 1)
    assert daily.shortfall == 0
    assert daily.targets == {"review": 4, "growth": 5, "challenge": 1}
    assert set(daily.item_ids[:4]) == {r.item_id for r in reviews}
    challenge = [s for s in daily.slots if s.slot == "challenge"]
    assert challenge[0].topic in ("greedy", "heaps")


def test_single_slot_goes_to_growth(bank):
    state = state_with(bank, lambda t: 0.5)
    daily = select_daily_set(state, bank, [], TODAY, CurriculumConfig(daily_set_size=1), seed=11)
    assert [s.slot for s in daily.slots] == ["growth"]


def test_missing_review_and_challenge_slots_backfill_with_growth(bank):
    state = state_with(bank, lambda t: 0.5)
    daily = select_daily_set(state, bank, [], TODAY, CurriculumConfig(), seed=11)
    assert daily.count("growth") == 10
    assert daily.shortfall == 0


def test_small_bank_reports_shortfall():
    bank = [item("a"), item("b"), item("c")]
    state = state_with(bank, lambda t: 0.5)
    daily = select_daily_set(state, bank, [], TODAY, CurriculumConfig(), seed=1)
    assert len(daily.slots) == 3
    assert daily.shortfall == 7


def test_cold_learner_only_gets_items_without_prerequisites(bank, cold_state):
    daily = select_daily_set(cold_state, bank, [], TODAY, CurriculumConfig(), seed=5)
    assert len(daily.slots) == 10
    by_id = {i.id: i for i in bank}
    assert all(not by_id[i].prerequisites for i in daily.item_ids)
    assert all(s.slot == "challenge" for s in daily.slots)


def test_recently_selected_items_are_not_eligible(bank):
    state = state_with(bank, lambda t: 0.5)
    history = [(TODAY - timedelta(days=6), "arrays-01-max_element"), (TODAY - timedelta(days=7), "arrays-02-prefix_sums")]
    ids = [i.id for i in eligible_items(bank, state, history, TODAY, CurriculumConfig())]
    assert "arrays-01-max_element" not in ids
    assert "arrays-02-prefix_sums" in ids


def test_selection_is_deterministic(bank, warm_state):
    first = select_daily_set(warm_state, bank, [], TODAY, CurriculumConfig(), seed=3)
    second = select_daily_set(warm_state, bank, [], TODAY, CurriculumConfig(), seed=3)
    assert first == second


def test_thirty_days_cover_the_bank_without_early_repeats(bank):
    topics = sorted(bank_topics(bank))
    state = state_with(bank, lambda t: 0.31 + 0.38 * topics.index(t) / (len(topics) - 1))
    config = CurriculumConfig()
    history, log = [], []
    for offset in range(30):
        day = TODAY + timedelta(days=offset)
        daily = select_daily_set(state, bank, [], day, config, seed=9, history=history)
        per_topic = {}
        for slot in daily.slots:
            per_topic[slot.topic] = per_topic.get(slot.topic, 0) + 1
            history.append((day, slot.item_id))
            log.append((day, slot.item_id, next(i.topics for i in bank if i.id == slot.item_id)))
        assert max(per_topic.values(), default=0) <= 4

    last_seen = {}
    for day, item_id in history:
        if item_id in last_seen:
            assert (day - last_seen[item_id]).days >= config.repetition_window_k
        last_seen[item_id] = day
    assert coverage_report(log, topics, [], horizon=30).coverage >= 0.9
