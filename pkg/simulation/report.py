"""
Writes simulation results as JSON and CSV files.
"""

import json
import logging
from pathlib import Path
from typing import Sequence

import pandas as pd

from config import TutorConfig
from curriculum.bank import ProblemItem
from learner_state.mastery import mean_mastery
from simulation.metrics import TrajectoryMetrics, final_attempts, hinted_tasks
from simulation.runner import SimulationResult, TrajectoryResult
from state_storage.store import LearnerStore

logger = logging.getLogger(__name__)


def skill_band(skill: float, bands: tuple[float, float]) -> str:
    low, high = bands
    if skill < low:
        return "low"
    if skill < high:
        return "medium"
    return "high"


def metrics_frame(metrics: Sequence[TrajectoryMetrics]) -> pd.DataFrame:
    rows = []
    for row in metrics:
        data = row.model_dump(mode="json")
        coverage = data.pop("coverage_report")
        coverage.pop("topic_counts")
        data.update({f"coverage_{key}" if key != "coverage" else key: value for key, value in coverage.items()})
        rows.append(data)
    return pd.DataFrame(rows)


def learning_gains_frame(trajectories: Sequence[TrajectoryResult], bands: tuple[float, float]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "persona": t.persona.persona_id,
                "skill_band": skill_band(t.persona.default_skill, bands),
                "before": mean_mastery(t.initial_state),
                "after": mean_mastery(t.final_state),
                "gain": t.gain,
            }
            for t in trajectories
        ],
        columns=["persona", "skill_band", "before", "after", "gain"],
    )


def hint_effectiveness_frame(trajectories: Sequence[TrajectoryResult]) -> pd.DataFrame:
    """Success rates by bucket; `unit` says whether a row counts submissions or tasks."""
    attempts = [a for t in trajectories for a in t.attempts]
    tasks = final_attempts(attempts)
    buckets = [
        ("overall", "submission", attempts),
        ("first_attempt", "submission", [a for a in attempts if a.first_attempt]),
        ("tasks", "task", tasks),
        ("tasks_without_hints", "task", [a for a in tasks if a.hint_count == 0]),
        ("tasks_with_hints", "task", hinted_tasks(attempts)),
    ]
    rows = [
        {
            "bucket": name,
            "unit": unit,
            "count": len(records),
            "success_rate": (sum(a.passed for a in records) / len(records)) if records else None,
        }
        for name, unit, records in buckets
    ]
    return pd.DataFrame(rows, columns=["bucket", "unit", "count", "success_rate"])


def topic_distribution_frame(trajectories: Sequence[TrajectoryResult]) -> pd.DataFrame:
    counts: dict[str, int] = {}
    for t in trajectories:
        for _, _, topics in t.selection_log:
            for topic in topics:
                counts[topic] = counts.get(topic, 0) + 1
    frame = pd.DataFrame(sorted(counts.items()), columns=["topic", "selections"])
    return frame.sort_values(["selections", "topic"], ascending=[False, True], ignore_index=True)


def write_report(
    result: SimulationResult,
    out_dir,
    config: TutorConfig,
    bank: Sequence[ProblemItem],
    with_events: bool = True,
) -> Path:
    """
    Writes metrics.json, metrics.csv and the per-figure CSVs under `out_dir`.

    With `with_events`, each persona also gets a learner directory under
    `learners/` holding its initial snapshot and event log, so `replay` can
    verify the run.

    Returns:
        Path: The output directory.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "metrics.json", "w", encoding="utf-8") as f:
        json.dump([m.model_dump(mode="json") for m in result.metrics], f, indent=2)
    metrics_frame(result.metrics).to_csv(out / "metrics.csv", index=False)
    learning_gains_frame(result.trajectories, config.simulation.skill_bands).to_csv(
        out / "learning_gains.csv", index=False
    )
    hint_effectiveness_frame(result.trajectories).to_csv(out / "hint_effectiveness.csv", index=False)
    topic_distribution_frame(result.trajectories).to_csv(out / "topic_distribution.csv", index=False)

    if with_events:
        for t in result.trajectories:
            store = LearnerStore.create(out / "learners" / t.persona.persona_id, t.initial_state, config, bank)
            store.record(t.final_state, t.audits)
    logger.info("Wrote simulation report for %d personas to %s", len(result.trajectories), out)
    return out
