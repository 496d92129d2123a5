import math
from datetime import date, timedelta

import pytest

from curriculum.coverage import coverage_report, fairness_iqr_ratio

DAY = date(2025, 2, 1)
TOPICS = ["arrays", "graphs", "strings", "trees"]


def test_fairness_ratio():
    assert fairness_iqr_ratio([1.0, 2.0, 3.0, 4.0, 5.0]) == pytest.approx(2.0 / 3.0)
    assert fairness_iqr_ratio([0.0, -0.1, 0.2]) == math.inf
    assert fairness_iqr_ratio([]) is None


def test_uniform_selection_has_full_coverage_and_diversity():
    log = [(DAY, f"{t}-01", (t,)) for t in TOPICS]
    report = coverage_report(log, TOPICS, [0.1, 0.2], horizon=7)
    assert report.coverage == 1.0
    assert report.diversity == pytest.approx(1.0)
    assert report.topic_counts == {t: 1 for t in TOPICS}


def test_single_topic_selection():
    log = [(DAY, "arrays-01", ("arrays",)), (DAY, "arrays-02", ("arrays",))]
    report = coverage_report(log, TOPICS, [], horizon=7)
    assert report.coverage == 0.25
    assert report.diversity == 0.0
    assert report.fairness_iqr_ratio is None


def test_entries_outside_the_horizon_are_ignored():
    log = [
        (DAY - timedelta(days=10), "graphs-01", ("graphs",)),
        (DAY, "arrays-01", ("arrays",)),
        (DAY - timedelta(days=2), "trees-01", ("trees", "unknown")),
    ]
    report = coverage_report(log, TOPICS, [], horizon=3)
    assert report.topic_counts == {"arrays": 1, "trees": 1}
    assert report.coverage == 0.5


def test_empty_log_and_bad_horizon():
    assert coverage_report([], TOPICS, [], horizon=30).coverage == 0.0
    with pytest.raises(ValueError):
        coverage_report([], TOPICS, [], horizon=0)


def test_infinite_fairness_serializes():
    report = coverage_report([], TOPICS, [0.0], horizon=1)
    assert '"fairness_iqr_ratio":"Infinity"' in report.model_dump_json()
