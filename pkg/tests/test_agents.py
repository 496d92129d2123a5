from datetime import timedelta

import pytest

from agents.assessment import assess_submission
from agents.backends import AgentContext, ReplayBackend
from agents.curator import curate
from agents.engagement import engagement_check
from agents.feedback import generate_hint, hint_level, tier_for
from agents.profiler import behavioral_trend, next_engagement, profiler_analyze
from agents.progress import synthesize_progress
from config import AgentsConfig
from curriculum.bank import Difficulty, ProblemItem
from errors import AgentError, ConfigError, HintUnavailableError, MalformedItemError
from learner_state.memory import redact_pii
from learner_state.models import (
    ActionEntry,
    ActionKind,
    ActivityDay,
    EngagementState,
    InterventionKind,
    LearnerState,
    Observation,
    Preferences,
    ReviewItem,
)
from orchestrator import triggers
from orchestrator.proposals import EngagementUpdate, MemoryAppend, Proposal
from orchestrator.state_graph import Orchestrator
from scheduler.sm2 import SchedulerConfig
from tests.conftest import T0, at, observation

TODAY = T0.date()


@pytest.mark.parametrize("p_hat, tier", [(0.0, "beginner"), (0.29, "beginner"), (0.3, "intermediate"), (0.7, "intermediate"), (0.71, "advanced")])
def test_tier_for(p_hat, tier):
    assert tier_for(p_hat) == tier


def test_hint_level_escalates_and_caps():
    assert [hint_level(h) for h in range(7)] == [1, 2, 3, 4, 5, 5, 5]


def test_generate_hint_uses_tier_template(items):
    item = items["recursion-01-factorial"]
    hint = generate_hint(item, hint_history=2, p_hat=0.9)
    assert (hint.level, hint.tier, hint.name) == (3, "advanced", "strategic")
    assert hint.text == item.template(3, "advanced")


def test_generate_hint_falls_back_to_lower_level():
    solution = "def smallest(xs):\n    return sorted(xs)[0]"
    item = ProblemItem(
        id="tiny",
        topics=("sorting",),
        difficulty=Difficulty.EASY,
        reference_solution=solution,
        hint_templates={
            "1:beginner": "What does the smallest input look like?",
            "2:beginner": "Just write return sorted(xs)[0] and submit.",
        },
    )
    hint = generate_hint(item, hint_history=3, p_hat=0.1)
    assert hint.level == 1

    bare = ProblemItem(id="bare", topics=("sorting",), difficulty=Difficulty.EASY)
    with pytest.raises(HintUnavailableError):
        generate_hint(bare, hint_history=0, p_hat=0.5)


def test_failed_assessment_lists_failing_tests_only(items):
    item = items["arrays-03-rotate_right"]
    result = assess_submission(observation(item, passed=False, tests_passed=1), item, p_hat=0.5)
    assert result.verdict == "fail"
    assert result.failing_tests == ("test-2 ([1, 2], 5)", "test-3 ([], 3)")
    assert result.suggestions == {}


@pytest.mark.parametrize("p_hat, detail", [(0.1, 1), (0.5, 2), (0.9, 3)])
def test_passed_assessment_scales_suggestions(items, p_hat, detail):
    item = items["arrays-01-max_element"]
    result = assess_submission(observation(item), item, p_hat)
    assert result.verdict == "pass"
    assert result.detail_level == detail
    assert set(result.suggestions) == {"time", "space", "readability", "edge_case"}
    assert all(len(texts) == detail for texts in result.suggestions.values())


def test_assessment_needs_tests(items):
    item = items["arrays-01-max_element"]
    empty = Observation(item_id=item.id, passed=True, timestamp=T0, tests_passed=0, tests_total=0)
    with pytest.raises(MalformedItemError):
        assess_submission(empty, item, 0.5)


def test_curator_proposes_once_per_day(bank, config, warm_state):
    proposal = curate(warm_state, bank, TODAY, T0, config.curriculum, config.scheduler, seed=1)
    assert len(proposal.deltas) == config.curriculum.daily_set_size
    assert all(d.action.kind is ActionKind.RECOMMEND_ITEM for d in proposal.deltas)

    state, _ = Orchestrator(bank, config).process(warm_state, triggers.daily_generation(TODAY, T0))
    assert curate(state, bank, TODAY, T0, config.curriculum, config.scheduler, seed=1) is None


def engaged(streak=0, last_seen=None, failures=0, opt_outs=(), mastery=None):
    return LearnerState(
        learner_id="e",
        mastery=mastery or {},
        engagement=EngagementState(streak_days=streak, last_seen=last_seen, failure_streak=failures),
        preferences=Preferences(opt_outs=opt_outs),
    )


def kinds(interventions):
    return [i.kind for i in interventions]


def test_streak_nudge_and_reengagement():
    assert kinds(engagement_check(engaged(streak=5, last_seen=at(days=-2)), TODAY, [])) == [InterventionKind.STREAK_NUDGE]
    assert kinds(engagement_check(engaged(streak=5, last_seen=at(days=-3)), TODAY, [])) == [
        InterventionKind.STREAK_NUDGE,
        InterventionKind.REENGAGEMENT,
    ]
    assert engagement_check(engaged(streak=5, last_seen=at(days=-1)), TODAY, []) == []


def test_simpler_variant_targets_weakest_topic(bank, warm_state):
    state = LearnerState(
        learner_id="e",
        mastery=warm_state.mastery,
        engagement=EngagementState(failure_streak=3, last_seen=at(minutes=-5)),
    )
    interventions = engagement_check(state, TODAY, [], AgentsConfig(), bank, T0)
    assert kinds(interventions) == [InterventionKind.SIMPLER_VARIANT]
    weakest = min(state.mastery.values(), key=lambda t: (t.m, t.topic_id)).topic_id
    assert interventions[0].item_id.startswith(f"{weakest}-01-")


def test_interventions_respect_opt_outs_and_daily_limit():
    state = engaged(streak=5, last_seen=at(days=-4), opt_outs=(InterventionKind.STREAK_NUDGE,))
    assert kinds(engagement_check(state, TODAY, [])) == [InterventionKind.REENGAGEMENT]
    issued = [
        ActionEntry(
            kind=ActionKind.INTERVENE,
            agent_id="engagement",
            day=TODAY,
            issued_at=T0,
            intervention=InterventionKind.REENGAGEMENT,
        )
    ]
    assert engagement_check(state, TODAY, issued) == []


def test_first_review_of_a_fast_pass(items, warm_state):
    item = items["arrays-01-max_element"]
    proposal = synthesize_progress(warm_state, observation(item, solve_time=60.0), item, SchedulerConfig(), TODAY)
    review = proposal.deltas[0].review
    assert review.ease_factor == pytest.approx(2.6)
    assert (review.interval_days, review.n_reviews) == (1, 1)
    assert review.due_date == TODAY + timedelta(days=1)


def test_failed_review_restarts_the_sequence(items, warm_state):
    item = items["arrays-01-max_element"]
    proposal = synthesize_progress(warm_state, observation(item, passed=False), item, SchedulerConfig(), TODAY)
    review = proposal.deltas[0].review
    assert review.ease_factor == pytest.approx(2.5 - 0.8 + 0.28 - 0.02)
    assert (review.interval_days, review.n_reviews) == (1, 0)


def test_third_review_multiplies_interval(items, warm_state):
    item = items["arrays-01-max_element"]
    previous = ReviewItem(item_id=item.id, topics=item.topics, due_date=TODAY, interval_days=6, n_reviews=2)
    state = LearnerState(**{**dict(warm_state), "reviews": (previous,)})
    proposal = synthesize_progress(state, observation(item, solve_time=280.0), item, SchedulerConfig(), TODAY)
    review = proposal.deltas[0].review
    assert review.ease_factor == pytest.approx(2.5)
    assert review.interval_days == 15
    assert review.n_reviews == 3


def test_profiler_counts_unknown_tags_as_other(items, config, warm_state):
    item = items["arrays-01-max_element"]
    obs = observation(item, passed=False, errors=("off-by-one", "typo-in-name"))
    proposal = profiler_analyze(obs, item, warm_state, config.mastery)
    misconceptions = [d.misconception.tag for d in proposal.deltas if isinstance(d, MemoryAppend) and d.misconception]
    insights = [d.text for d in proposal.deltas if isinstance(d, MemoryAppend) and d.section == "insights"]
    assert misconceptions == ["off-by-one", "other"]
    assert insights and "typo-in-name" in insights[0]
    engagement = next(d.engagement for d in proposal.deltas if isinstance(d, EngagementUpdate))
    assert engagement.failure_streak == 1


def test_next_engagement_tracks_streaks(items):
    item = items["arrays-01-max_element"]
    first = next_engagement(EngagementState(), observation(item, when=at(days=-1)))
    second = next_engagement(first, observation(item, when=T0))
    assert (first.streak_days, second.streak_days) == (1, 2)
    later = next_engagement(second, observation(item, passed=False, when=at(days=3)))
    assert later.streak_days == 1
    assert later.failure_streak == 1
    assert [e.day for e in later.activity_window] == [TODAY - timedelta(days=1), TODAY, TODAY + timedelta(days=3)]


def test_behavioral_trend_flags_fatigue():
    window = tuple(ActivityDay(day=TODAY - timedelta(days=k), attempts=2, passes=1) for k in range(1, 4))
    window += (ActivityDay(day=TODAY, attempts=10, passes=1),)
    trend = behavioral_trend(EngagementState(activity_window=window), TODAY, AgentsConfig())
    assert trend.fatigue_flag
    assert trend.velocity == pytest.approx(16 / 7)
    assert trend.success_trend < 0


def test_replay_backend(bank, config, warm_state):
    recorded = Proposal(agent_id="curator", rationale="recorded")
    backend = ReplayBackend([{"version_before": 0, "agent_id": "curator", "proposal": recorded.model_dump(mode="json")}])
    ctx = AgentContext(
        trigger=triggers.daily_generation(TODAY, T0),
        state=warm_state,
        config=config,
        items={i.id: i for i in bank},
        seed=1,
    )
    assert backend.propose("curator", ctx) == recorded
    with pytest.raises(AgentError):
        backend.propose("engagement", ctx)
    with pytest.raises(ConfigError):
        ReplayBackend([{"agent_id": "curator"}])


def test_redact_pii():
    text = redact_pii("mail ana@example.org or call +1 (555) 123-4567, see https://example.org/x")
    assert "example.org" not in text
    assert "[email]" in text and "[phone]" in text and "[url]" in text
