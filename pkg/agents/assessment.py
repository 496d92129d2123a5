"""
Skill assessment from test outcomes.

Code execution itself is outside this engine: observations arrive with test
counts already filled in by whatever ran the learner's code.
"""

from typing import Literal

from pydantic import Field, model_validator

from agents.feedback import tier_for
from curriculum.bank import SUGGESTION_CATEGORIES, ProblemItem
from errors import MalformedItemError
from learner_state.models import ActionEntry, ActionKind, FrozenModel, Observation
from orchestrator.proposals import ActionRecord, Proposal

AGENT_ID = "skill_assessment"
DETAIL_BY_TIER = {"beginner": 1, "intermediate": 2, "advanced": 3}


class AssessmentResult(FrozenModel):
    verdict: Literal["pass", "fail"]
    failing_tests: tuple[str, ...] = ()
    suggestions: dict[str, tuple[str, ...]] = Field(default_factory=dict)
    detail_level: int = Field(ge=1, le=3)

    @model_validator(mode="after")
    def _errors_only_on_fail(self):
        if self.verdict == "fail" and self.suggestions:
            raise ValueError("failed assessments carry no suggestions")
        if self.verdict == "pass" and self.failing_tests:
            raise ValueError("passed assessments carry no failing tests")
        return self


def failing_test_ids(obs: Observation, item: ProblemItem) -> tuple[str, ...]:
    """Identifiers of the tests that did not pass; the passing ones are counted first."""
    ids = []
    for index in range(obs.tests_passed, obs.tests_total):
        label = f"test-{index + 1}"
        if index < len(item.tests):
            label += f" ({item.tests[index].input})"
        ids.append(label)
    return tuple(ids)


def assess_submission(obs: Observation, item: ProblemItem, p_hat: float) -> AssessmentResult:
    """
    Grades a submission.

    A failure surfaces the failing tests and nothing else. A pass surfaces the
    item's improvement suggestions, d per category where d grows with p_hat.

    Raises:
        MalformedItemError: the observation reports zero tests.
    """
    if obs.tests_total == 0:
        raise MalformedItemError(f"Submission on {item.id} reports no tests")
    detail = DETAIL_BY_TIER[tier_for(p_hat)]
    if not obs.passed:
        return AssessmentResult(verdict="fail", failing_tests=failing_test_ids(obs, item), detail_level=detail)
    suggestions = {}
    for category in SUGGESTION_CATEGORIES:
        texts = tuple(item.suggestions.get(category, ()))[:detail]
        if texts:
            suggestions[category] = texts
    return AssessmentResult(verdict="pass", suggestions=suggestions, detail_level=detail)


def assessment_proposal(obs: Observation, item: ProblemItem, p_hat: float) -> Proposal:
    result = assess_submission(obs, item, p_hat)
    if result.verdict == "pass":
        message = "All tests pass."
    else:
        message = f"{len(result.failing_tests)} of {obs.tests_total} tests fail."
    action = ActionEntry(
        kind=ActionKind.FEEDBACK,
        agent_id=AGENT_ID,
        day=obs.timestamp.date(),
        issued_at=obs.timestamp,
        item_id=item.id,
        detail=result.detail_level,
        message=message,
        verdict=result.verdict,
        failing_tests=result.failing_tests,
        suggestions=result.suggestions,
    )
    return Proposal(agent_id=AGENT_ID, deltas=(ActionRecord(action=action),), rationale=message)
