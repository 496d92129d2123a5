"""
Offline metrics over simulated trajectories: learning gains, hint effectiveness,
coverage, calibration (Brier, ECE) and recall ranking (AUROC).

Metrics with no data to define them are None, never zero.
"""

from datetime import date
from typing import Iterable, Optional, Sequence

import numpy as np
from pydantic import ConfigDict, Field
from sklearn.metrics import brier_score_loss, roc_auc_score

from curriculum.coverage import CoverageReport, coverage_report
from learner_state.models import FrozenModel

ECE_BINS = 10


class AttemptRecord(FrozenModel):
    persona_id: str
    day: date
    item_id: str
    topic: str
    passed: bool
    hint_count: int = 0
    predicted_mastery: float
    first_attempt: bool = True
    # last submission of the item that day; its outcome is the task outcome
    final_attempt: bool = True
    reward: float = 0.0


class RecallSample(FrozenModel):
    persona_id: str
    item_id: str
    score: float
    recalled: bool


class TrajectoryMetrics(FrozenModel):
    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="strings")

    persona_id: str = "all"
    # absolute mastery points, not a relative change
    mean_mastery_gain: float
    # per submission
    success_rate_overall: Optional[float] = Field(default=None, ge=0, le=1)
    # per task, i.e. final submissions
    success_rate_tasks: Optional[float] = Field(default=None, ge=0, le=1)
    success_rate_with_hints: Optional[float] = Field(default=None, ge=0, le=1)
    attempts: int = 0
    tasks: int = 0
    hinted_tasks: int = 0
    coverage_report: CoverageReport
    brier: Optional[float] = Field(default=None, ge=0, le=1)
    ece: Optional[float] = Field(default=None, ge=0, le=1)
    recall_auroc: Optional[float] = Field(default=None, ge=0, le=1)
    recall_samples: int = 0
    median_trigger_latency_ms: Optional[float] = None
    cumulative_reward: float = 0.0


def brier(predicted: Sequence[float], outcomes: Sequence[bool]) -> Optional[float]:
    if len(predicted) == 0:
        return None
    y = np.asarray(outcomes, dtype=int)
    return float(brier_score_loss(y, np.asarray(predicted, dtype=float), pos_label=1))


def expected_calibration_error(predicted: Sequence[float], outcomes: Sequence[bool], bins: int = ECE_BINS) -> Optional[float]:
    """Weighted mean |accuracy - confidence| over equal-width probability bins."""
    if len(predicted) == 0:
        return None
    p = np.clip(np.asarray(predicted, dtype=float), 0.0, 1.0)
    y = np.asarray(outcomes, dtype=float)
    index = np.minimum((p * bins).astype(int), bins - 1)
    total = 0.0
    for b in range(bins):
        mask = index == b
        if mask.any():
            total += mask.sum() * abs(y[mask].mean() - p[mask].mean())
    return float(total / len(p))


def auroc(scores: Sequence[float], labels: Sequence[bool]) -> Optional[float]:
    """Undefined (None) unless both outcomes occur."""
    y = np.asarray(labels, dtype=int)
    if len(y) == 0 or y.min() == y.max():
        return None
    return float(roc_auc_score(y, np.asarray(scores, dtype=float)))


def success_rate(attempts: Iterable[AttemptRecord]) -> Optional[float]:
    outcomes = [a.passed for a in attempts]
    if not outcomes:
        return None
    return float(np.mean(outcomes))


def final_attempts(attempts: Iterable[AttemptRecord]) -> list[AttemptRecord]:
    """One record per task: the submission whose outcome is the task outcome."""
    return [a for a in attempts if a.final_attempt]


def hinted_tasks(attempts: Iterable[AttemptRecord]) -> list[AttemptRecord]:
    """Final submissions of tasks where at least one hint was requested."""
    return [a for a in final_attempts(attempts) if a.hint_count > 0]


def compute_metrics(
    attempts: Sequence[AttemptRecord],
    recall: Sequence[RecallSample],
    gains: Sequence[float],
    selection_log: Sequence[tuple[date, str, Sequence[str]]],
    bank_topics: Iterable[str],
    latencies_ms: Sequence[float],
    horizon: int,
    persona_id: str = "all",
) -> TrajectoryMetrics:
    """
    Folds trajectory records into one metrics row.

    Overall success is the pass rate of every submission, so retries after a
    failure count against it. Success with hints is the share of hinted tasks
    the learner finally solved; `success_rate_tasks` is the same per-task rate
    over every task and is the like-for-like baseline for it.

    Args:
        attempts: Every simulated attempt with the mastery predicted before it.
        recall: Predicted recall and first-attempt outcome on due reviews.
        gains: Mean mastery after minus before, one per learner.
        selection_log: (day, item_id, topics) for every recommended item.
        bank_topics: Topics of the bank, for coverage.
        latencies_ms: Per-trigger orchestration times.
        horizon (int): Days simulated.
        persona_id (str): Row label.
    """
    tasks = final_attempts(attempts)
    hinted = hinted_tasks(attempts)
    predicted = [a.predicted_mastery for a in attempts]
    outcomes = [a.passed for a in attempts]
    return TrajectoryMetrics(
        persona_id=persona_id,
        mean_mastery_gain=float(np.mean(gains)) if len(gains) else 0.0,
        success_rate_overall=success_rate(attempts),
        success_rate_tasks=success_rate(tasks),
        success_rate_with_hints=success_rate(hinted),
        attempts=len(attempts),
        tasks=len(tasks),
        hinted_tasks=len(hinted),
        coverage_report=coverage_report(selection_log, bank_topics, gains, max(1, horizon)),
        brier=brier(predicted, outcomes),
        ece=expected_calibration_error(predicted, outcomes),
        recall_auroc=auroc([r.score for r in recall], [r.recalled for r in recall]),
        recall_samples=len(recall),
        median_trigger_latency_ms=float(np.median(latencies_ms)) if len(latencies_ms) else None,
        cumulative_reward=float(sum(a.reward for a in attempts)),
    )
