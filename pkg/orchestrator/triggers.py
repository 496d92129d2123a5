"""
Pedagogical triggers and the routing table that maps each one to its ordered
agent pipeline.
"""

from datetime import date, datetime, time, timezone
from enum import Enum
from typing import Annotated, Literal, Optional, Union

from pydantic import Field

from learner_state.models import ActionEntry, FrozenModel, Observation, Timestamp

# A.3 action record; the learner's action log stores these.
Action = ActionEntry


class TriggerKind(str, Enum):
    ON_SUBMISSION = "on_submission"
    ON_HINT_REQUEST = "on_hint_request"
    ON_SESSION_CHECK = "on_session_check"
    ON_DAILY_GENERATION = "on_daily_generation"
    ON_REVIEW_DUE = "on_review_due"


class SubmissionPayload(FrozenModel):
    kind: Literal["on_submission"] = "on_submission"
    observation: Observation


class HintRequestPayload(FrozenModel):
    kind: Literal["on_hint_request"] = "on_hint_request"
    item_id: str
    hint_history: int = Field(default=0, ge=0)


class SessionCheckPayload(FrozenModel):
    kind: Literal["on_session_check"] = "on_session_check"
    day: date


class DailyGenerationPayload(FrozenModel):
    kind: Literal["on_daily_generation"] = "on_daily_generation"
    day: date


class ReviewDuePayload(FrozenModel):
    kind: Literal["on_review_due"] = "on_review_due"
    day: date
    observation: Optional[Observation] = None


Payload = Annotated[
    Union[SubmissionPayload, HintRequestPayload, SessionCheckPayload, DailyGenerationPayload, ReviewDuePayload],
    Field(discriminator="kind"),
]


class Trigger(FrozenModel):
    timestamp: Timestamp
    payload: Payload

    @property
    def kind(self) -> TriggerKind:
        return TriggerKind(self.payload.kind)

    @property
    def day(self) -> date:
        day = getattr(self.payload, "day", None)
        return day if day is not None else self.timestamp.date()


ROUTES: dict[TriggerKind, tuple[str, ...]] = {
    TriggerKind.ON_SUBMISSION: ("skill_assessment", "profiler", "feedback"),
    TriggerKind.ON_HINT_REQUEST: ("feedback",),
    TriggerKind.ON_SESSION_CHECK: ("curator", "engagement"),
    TriggerKind.ON_DAILY_GENERATION: ("curator",),
    TriggerKind.ON_REVIEW_DUE: ("progress_synthesizer", "curator"),
}


def route_trigger(trigger: Trigger) -> tuple[str, ...]:
    return ROUTES[trigger.kind]


def start_of(day: date) -> datetime:
    return datetime.combine(day, time(0, 0), tzinfo=timezone.utc)


def submission(observation: Observation) -> Trigger:
    return Trigger(timestamp=observation.timestamp, payload=SubmissionPayload(observation=observation))


def hint_request(item_id: str, hint_history: int, timestamp: datetime) -> Trigger:
    return Trigger(timestamp=timestamp, payload=HintRequestPayload(item_id=item_id, hint_history=hint_history))


def session_check(day: date, timestamp: Optional[datetime] = None) -> Trigger:
    return Trigger(timestamp=timestamp or start_of(day), payload=SessionCheckPayload(day=day))


def daily_generation(day: date, timestamp: Optional[datetime] = None) -> Trigger:
    return Trigger(timestamp=timestamp or start_of(day), payload=DailyGenerationPayload(day=day))


def review_due(day: date, observation: Optional[Observation] = None, timestamp: Optional[datetime] = None) -> Trigger:
    if timestamp is None:
        timestamp = observation.timestamp if observation is not None else start_of(day)
    return Trigger(timestamp=timestamp, payload=ReviewDuePayload(day=day, observation=observation))
