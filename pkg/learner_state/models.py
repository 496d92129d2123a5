"""
Learner-state schema.

Every record here is a frozen pydantic model with tuple sequences, so a state
snapshot handed to an agent cannot be changed in place. The orchestrator is the
only place that builds successor states.
"""

from datetime import date, datetime, timezone
from enum import Enum
from typing import Annotated, Literal, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator


def _as_utc(value: datetime) -> datetime:
    if value.tzinfo is None:
        return value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


Timestamp = Annotated[datetime, AfterValidator(_as_utc)]
Unit = Annotated[float, Field(ge=0.0, le=1.0)]

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
DEFAULT_EASE = 2.5


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class Observation(FrozenModel):
    """One submission: o = (q_id, y, timestamp, h_cnt, errors, t_solve) plus test counts."""

    item_id: str
    passed: bool
    timestamp: Timestamp
    hint_count: int = Field(default=0, ge=0)
    error_tags: tuple[str, ...] = ()
    solve_time: float = 0.0
    tests_passed: int = Field(default=0, ge=0)
    tests_total: int = Field(default=1, ge=0)
    abandoned: bool = False

    @model_validator(mode="after")
    def _check_tests(self):
        if self.tests_passed > self.tests_total:
            raise ValueError("tests_passed cannot exceed tests_total")
        if self.tests_total > 0 and self.passed != (self.tests_passed == self.tests_total):
            raise ValueError("passed must hold exactly when every test passes")
        return self


class HistoricalAttempt(FrozenModel):
    item_id: str
    topics: tuple[str, ...]
    passed: bool
    timestamp: Timestamp


class TopicMastery(FrozenModel):
    topic_id: str
    m: Unit = 0.0
    alpha_count: float = Field(default=1.0, ge=1.0)
    beta_count: float = Field(default=1.0, ge=1.0)
    last_update: Timestamp = EPOCH
    recent_outcomes: tuple[bool, ...] = Field(default=(), max_length=10)
    recent_solve_times: tuple[float, ...] = Field(default=(), max_length=10)


class ActivityDay(FrozenModel):
    day: date
    attempts: int = Field(ge=0)
    passes: int = Field(default=0, ge=0)


class EngagementState(FrozenModel):
    streak_days: int = Field(default=0, ge=0)
    last_seen: Optional[Timestamp] = None
    failure_streak: int = Field(default=0, ge=0)
    activity_window: tuple[ActivityDay, ...] = Field(default=(), max_length=30)
    recent_outcomes: tuple[bool, ...] = Field(default=(), max_length=10)


class Modality(str, Enum):
    TEXT = "text"
    VISUAL = "visual"
    CODE = "code"


class InterventionKind(str, Enum):
    STREAK_NUDGE = "streak_nudge"
    REENGAGEMENT = "reengagement"
    SIMPLER_VARIANT = "simpler_variant"


class Preferences(FrozenModel):
    self_reported_skill: Unit = 0.0
    expertise_rank: Unit = 0.0
    daily_time_budget: float = Field(default=30.0, gt=0)
    modality: Modality = Modality.CODE
    opt_outs: tuple[InterventionKind, ...] = ()


class Misconception(FrozenModel):
    tag: str
    evidence_count: int = Field(ge=1)
    last_seen: Timestamp
    rank: int = Field(default=1, ge=1)


class MemorySections(FrozenModel):
    trends: tuple[str, ...] = ()
    misconceptions: tuple[Misconception, ...] = ()
    insights: tuple[str, ...] = ()
    cap_per_section: int = Field(default=20, ge=1)

    @model_validator(mode="after")
    def _check_caps(self):
        for name in ("trends", "misconceptions", "insights"):
            if len(getattr(self, name)) > self.cap_per_section:
                raise ValueError(f"memory section {name} exceeds cap {self.cap_per_section}")
        return self


class ReviewItem(FrozenModel):
    """SM-2 queue entry (q_id, topics, d_due, interval, EF, n_reviews)."""

    item_id: str
    topics: tuple[str, ...]
    due_date: date
    interval_days: int = Field(default=1, ge=1)
    ease_factor: float = Field(default=DEFAULT_EASE, ge=1.3)
    n_reviews: int = Field(default=0, ge=0)
    last_review: Optional[date] = None


class ActionKind(str, Enum):
    RECOMMEND_ITEM = "recommend_item"
    HINT = "hint"
    ADJUST_SCHEDULE = "adjust_schedule"
    INTERVENE = "intervene"
    FEEDBACK = "feedback"


SlotKind = Literal["review", "growth", "challenge"]


class ActionEntry(FrozenModel):
    """One action taken on the learner's behalf, as kept in the action log."""

    kind: ActionKind
    agent_id: str
    day: date
    issued_at: Timestamp
    item_id: Optional[str] = None
    slot: Optional[SlotKind] = None
    level: Optional[int] = Field(default=None, ge=1, le=5)
    tier: Optional[str] = None
    detail: Optional[int] = Field(default=None, ge=1, le=3)
    intervention: Optional[InterventionKind] = None
    message: str = ""
    verdict: Optional[Literal["pass", "fail"]] = None
    failing_tests: tuple[str, ...] = ()
    suggestions: dict[str, tuple[str, ...]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_kind_fields(self):
        if self.kind is ActionKind.HINT and self.level is None:
            raise ValueError("hint actions carry a level")
        if self.kind is ActionKind.INTERVENE and self.intervention is None:
            raise ValueError("intervene actions carry an intervention kind")
        if self.kind is ActionKind.RECOMMEND_ITEM and (self.item_id is None or self.slot is None):
            raise ValueError("recommend_item actions carry an item and a slot")
        return self


class LearnerState(FrozenModel):
    """S_t = {mastery, reviews, engagement, preferences, memory, version}."""

    learner_id: str
    mastery: dict[str, TopicMastery] = Field(default_factory=dict)
    reviews: tuple[ReviewItem, ...] = ()
    engagement: EngagementState = Field(default_factory=EngagementState)
    preferences: Preferences = Field(default_factory=Preferences)
    memory: MemorySections = Field(default_factory=MemorySections)
    actions: tuple[ActionEntry, ...] = ()
    version: int = Field(default=0, ge=0)
    updated_at: Timestamp = EPOCH

    def review_for(self, item_id: str) -> Optional[ReviewItem]:
        for review in self.reviews:
            if review.item_id == item_id:
                return review
        return None

    def actions_on(self, day: date, kind: ActionKind) -> list[ActionEntry]:
        return [a for a in self.actions if a.day == day and a.kind is kind]


class LearnerProfile(FrozenModel):
    """Onboarding input: who the learner is and what they have already attempted."""

    learner_id: str = Field(min_length=1)
    preferences: Preferences = Field(default_factory=Preferences)
    history: tuple[HistoricalAttempt, ...] = ()
