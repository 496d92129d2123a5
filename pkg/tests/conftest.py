from datetime import datetime, timedelta, timezone

import pytest

from config import TutorConfig
from curriculum.bank import bank_topics, load_bank
from learner_state.mastery import new_learner_state
from learner_state.models import HistoricalAttempt, Observation, Preferences

T0 = datetime(2025, 1, 6, 9, 0, tzinfo=timezone.utc)


def at(days: float = 0, minutes: float = 0) -> datetime:
    return T0 + timedelta(days=days, minutes=minutes)


def observation(item, passed=True, when=None, hints=0, solve_time=120.0, errors=(), tests_passed=None):
    total = max(1, len(item.tests))
    if tests_passed is None:
        tests_passed = total if passed else 0
    return Observation(
        item_id=item.id,
        passed=passed,
        timestamp=when or T0,
        hint_count=hints,
        error_tags=tuple(errors),
        solve_time=solve_time,
        tests_passed=tests_passed,
        tests_total=total,
    )


@pytest.fixture(scope="session")
def bank():
    return load_bank()


@pytest.fixture(scope="session")
def items(bank):
    return {item.id: item for item in bank}


@pytest.fixture
def config():
    return TutorConfig()


@pytest.fixture
def warm_state(bank, config):
    """A learner with two days of history on the root topics."""
    history = []
    for k, topic in enumerate(["arrays", "strings", "hash_maps", "math", "stacks", "queues", "recursion"]):
        for j in range(3):
            history.append(
                HistoricalAttempt(
                    item_id=f"{topic}-0{j + 1}",
                    topics=(topic,),
                    passed=(j + k) % 3 != 0,
                    timestamp=T0 - timedelta(days=2, minutes=10 * (3 * k + j)),
                )
            )
    return new_learner_state(
        "learner-1",
        Preferences(self_reported_skill=0.5, expertise_rank=0.4),
        history,
        bank_topics(bank),
        config.mastery,
        seed=7,
    )


@pytest.fixture
def cold_state(bank, config):
    return new_learner_state("learner-cold", Preferences(), [], bank_topics(bank), config.mastery, seed=7)
