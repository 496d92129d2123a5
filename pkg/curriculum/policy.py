"""
Daily-set selection: zone classification, eligibility filters and 40/50/10
composition with backfill.
"""

import logging
import math
from datetime import date
from enum import Enum
from typing import Iterable, Optional, Sequence

from pydantic import Field, model_validator

from curriculum.bank import ProblemItem
from learner_state.models import ActionKind, FrozenModel, LearnerState, ReviewItem, SlotKind
from seeding import rng_for

logger = logging.getLogger(__name__)

SLOT_ORDER: tuple[SlotKind, ...] = ("review", "growth", "challenge")
BACKFILL_ORDER: tuple[SlotKind, ...] = ("growth", "review", "challenge")


class CurriculumConfig(FrozenModel):
    ratio_review: float = Field(default=0.4, ge=0, le=1)
    ratio_growth: float = Field(default=0.5, ge=0, le=1)
    ratio_challenge: float = Field(default=0.1, ge=0, le=1)
    growth_low: float = Field(default=0.3, ge=0, le=1)
    growth_high: float = Field(default=0.7, ge=0, le=1)
    repetition_window_k: int = Field(default=7, ge=0)
    prereq_mastery_min: float = Field(default=0.3, ge=0, le=1)
    max_topic_share: float = Field(default=0.4, gt=0, le=1)
    daily_set_size: int = Field(default=10, ge=1)

    @model_validator(mode="after")
    def _check_bands(self):
        if not math.isclose(math.fsum(self.ratios), 1.0, abs_tol=1e-9):
            raise ValueError("curriculum ratios must sum to 1.0")
        if not self.growth_low < self.growth_high:
            raise ValueError("growth_low must be below growth_high")
        return self

    @property
    def ratios(self) -> tuple[float, float, float]:
        return self.ratio_review, self.ratio_growth, self.ratio_challenge


class Zone(str, Enum):
    CHALLENGE = "challenge"
    GROWTH = "growth"
    MASTERED = "mastered"


class DailySlot(FrozenModel):
    item_id: str
    slot: SlotKind
    topic: str


class DailySet(FrozenModel):
    day: date
    slots: tuple[DailySlot, ...] = ()
    targets: dict[str, int] = Field(default_factory=dict)
    shortfall: int = Field(default=0, ge=0)

    @property
    def item_ids(self) -> list[str]:
        return [s.item_id for s in self.slots]

    def count(self, slot: SlotKind) -> int:
        return sum(1 for s in self.slots if s.slot == slot)


def classify_zone(m: float, config: Optional[CurriculumConfig] = None) -> Zone:
    config = config or CurriculumConfig()
    if m < config.growth_low:
        return Zone.CHALLENGE
    if m <= config.growth_high:
        return Zone.GROWTH
    return Zone.MASTERED


def apportion(size: int, ratios: Sequence[float]) -> tuple[int, ...]:
    """
    Largest-remainder apportionment of `size` slots; remainder ties go to the
    earlier slot kind.
    """
    quotas = [size * r for r in ratios]
    counts = [math.floor(q + 1e-9) for q in quotas]
    remainders = [q - c for q, c in zip(quotas, counts)]
    left = size - sum(counts)
    for index in sorted(range(len(ratios)), key=lambda i: (-remainders[i], i))[:left]:
        counts[index] += 1
    return tuple(counts)


def selection_history(state: LearnerState) -> list[tuple[date, str]]:
    """(day, item_id) of every recommendation still in the action log."""
    return [
        (a.day, a.item_id)
        for a in state.actions
        if a.kind is ActionKind.RECOMMEND_ITEM and a.item_id is not None
    ]


def _m(state: LearnerState, topic: str) -> float:
    entry = state.mastery.get(topic)
    return 0.0 if entry is None else entry.m


def eligible_items(
    bank: Iterable[ProblemItem],
    state: LearnerState,
    history: Iterable[tuple[date, str]],
    today: date,
    config: CurriculumConfig,
) -> list[ProblemItem]:
    """
    Items not selected in the last k days whose prerequisite topics all reach
    prereq_mastery_min, ordered by id.
    """
    recent = {
        item_id
        for day, item_id in history
        if 0 <= (today - day).days < config.repetition_window_k
    }
    eligible = []
    for item in bank:
        if item.id in recent:
            continue
        if any(_m(state, p) < config.prereq_mastery_min for p in item.prerequisites):
            continue
        eligible.append(item)
    return sorted(eligible, key=lambda item: item.id)


def _rank(pool: list[ProblemItem], state: LearnerState, seed: int, today: date, slot: str) -> list[ProblemItem]:
    if not pool:
        return []
    keys = rng_for(seed, today.isoformat(), slot).permutation(len(pool))
    ranked = sorted(zip(pool, keys), key=lambda pair: (_m(state, pair[0].primary_topic), int(pair[1])))
    return [item for item, _ in ranked]


def select_daily_set(
    state: LearnerState,
    bank: Sequence[ProblemItem],
    due_reviews: Sequence[ReviewItem],
    today: date,
    config: CurriculumConfig,
    seed: int,
    history: Optional[Iterable[tuple[date, str]]] = None,
) -> DailySet:
    """
    Composes the day's problem set.

    Review slots come from due reviews, growth slots from items whose primary
    topic sits in the growth band, challenge slots from the challenge band.
    Unfilled slots backfill growth, then review, then challenge. A topic takes at
    most max_topic_share of the set unless no alternative remains.

    Returns:
        DailySet: Selected slots; `shortfall` counts slots nothing could fill.
    """
    size = config.daily_set_size
    if history is None:
        history = selection_history(state)
    eligible = eligible_items(bank, state, history, today, config)
    due_ids = {review.item_id for review in due_reviews}

    pools = {"review": [], "growth": [], "challenge": []}
    for item in eligible:
        if item.id in due_ids:
            pools["review"].append(item)
            continue
        zone = classify_zone(_m(state, item.primary_topic), config)
        if zone is Zone.GROWTH:
            pools["growth"].append(item)
        elif zone is Zone.CHALLENGE:
            pools["challenge"].append(item)
    ranked = {slot: _rank(pool, state, seed, today, slot) for slot, pool in pools.items()}

    targets = dict(zip(SLOT_ORDER, apportion(size, config.ratios)))
    topic_cap = max(1, math.floor(config.max_topic_share * size + 1e-9))
    chosen: list[DailySlot] = []
    taken: set[str] = set()
    per_topic: dict[str, int] = {}

    def take(slot: str, limit: int, capped: bool) -> None:
        for item in ranked[slot]:
            if limit <= 0:
                return
            if item.id in taken:
                continue
            if capped and per_topic.get(item.primary_topic, 0) >= topic_cap:
                continue
            chosen.append(DailySlot(item_id=item.id, slot=slot, topic=item.primary_topic))
            taken.add(item.id)
            per_topic[item.primary_topic] = per_topic.get(item.primary_topic, 0) + 1
            limit -= 1

    for slot in SLOT_ORDER:
        take(slot, targets[slot], capped=True)
    for capped in (True, False):
        for slot in BACKFILL_ORDER:
            take(slot, size - len(chosen), capped=capped)

    order = {slot: i for i, slot in enumerate(SLOT_ORDER)}
    chosen.sort(key=lambda s: order[s.slot])
    shortfall = size - len(chosen)
    if shortfall:
        logger.info("Daily set for %s on %s is short by %d items", state.learner_id, today, shortfall)
    return DailySet(day=today, slots=tuple(chosen), targets=targets, shortfall=shortfall)
