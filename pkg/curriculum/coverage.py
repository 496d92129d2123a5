import math
from datetime import date, timedelta
from typing import Iterable, Optional, Sequence

import numpy as np
from pydantic import ConfigDict, Field

from learner_state.models import FrozenModel


class CoverageReport(FrozenModel):
    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="strings")

    horizon_days: int = Field(ge=1)
    coverage: float = Field(ge=0, le=1)
    diversity: float = Field(ge=0, le=1)
    # inf when the median gain is not positive, None without gains
    fairness_iqr_ratio: Optional[float] = None
    topic_counts: dict[str, int] = Field(default_factory=dict)


def fairness_iqr_ratio(gains: Sequence[float]) -> Optional[float]:
    if len(gains) == 0:
        return None
    values = np.asarray(gains, dtype=float)
    median = float(np.median(values))
    if median <= 0:
        return math.inf
    q1, q3 = np.percentile(values, [25, 75])
    return float(q3 - q1) / median


def coverage_report(
    selection_log: Iterable[tuple[date, str, Sequence[str]]],
    bank_topics: Iterable[str],
    gains: Sequence[float],
    horizon: int,
) -> CoverageReport:
    """
    Summarizes which topics a selection log touched over the trailing horizon.

    Args:
        selection_log: (day, item_id, topics) per selected item.
        bank_topics: Every topic in the bank.
        gains: Per-learner mastery gains for the fairness ratio.
        horizon (int): Days, counted back from the latest logged day.

    Returns:
        CoverageReport: coverage, normalized topic entropy and IQR/median of gains.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1 day")
    topics = sorted(set(bank_topics))
    entries = list(selection_log)
    counts = {topic: 0 for topic in topics}
    if entries:
        start = max(day for day, _, _ in entries) - timedelta(days=horizon - 1)
        for day, _, item_topics in entries:
            if day < start:
                continue
            for topic in item_topics:
                if topic in counts:
                    counts[topic] += 1

    selected = [c for c in counts.values() if c > 0]
    coverage = len(selected) / len(topics) if topics else 0.0
    diversity = 0.0
    if len(topics) > 1 and selected:
        p = np.asarray(selected, dtype=float) / sum(selected)
        diversity = float(-(p * np.log(p)).sum() / math.log(len(topics)))
    return CoverageReport(
        horizon_days=horizon,
        coverage=coverage,
        diversity=min(1.0, max(0.0, diversity)),
        fairness_iqr_ratio=fairness_iqr_ratio(gains),
        topic_counts={t: c for t, c in counts.items() if c > 0},
    )
