from datetime import date

from learner_state.models import LearnerState, ReviewItem
from scheduler.sm2 import SchedulerConfig, predict_recall


def recall_on(review: ReviewItem, today: date, config: SchedulerConfig) -> float:
    """Predicted recall of a queued item on a given day."""
    if review.last_review is None:
        elapsed = review.interval_days
    else:
        elapsed = max(0, (today - review.last_review).days)
    return predict_recall(elapsed, review.ease_factor, review.interval_days, config)


def _due_sorted(state: LearnerState, today: date, config: SchedulerConfig) -> list[ReviewItem]:
    due = [review for review in state.reviews if review.due_date <= today]
    return sorted(due, key=lambda r: (r.due_date, recall_on(r, today, config), r.item_id))


def build_review_queue(state: LearnerState, today: date, config: SchedulerConfig) -> list[ReviewItem]:
    """
    Due reviews ordered by due date, then lowest predicted recall, capped at daily_cap.

    Items beyond the cap keep their due date and show up again the next day.
    """
    return _due_sorted(state, today, config)[:config.daily_cap]


def carried_over(state: LearnerState, today: date, config: SchedulerConfig) -> list[ReviewItem]:
    return _due_sorted(state, today, config)[config.daily_cap:]
