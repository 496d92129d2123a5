"""
Event handler for the tutor commands.

`handle_event({"command": ..., ...})` runs one command against a learner
directory and returns `{"statusCode": int, "body": json text}`. The CLI in
main.py is a thin argparse layer over it.
"""

import json
import logging
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Callable

import pandas as pd
from pydantic import ValidationError

from config import TutorConfig, load_config, parse_config
from curriculum.bank import bank_topics, load_bank
from errors import (
    BankError,
    ConfigError,
    HintUnavailableError,
    LogCorruptionError,
    LogGapError,
    MalformedItemError,
    RejectedInputError,
    ReplayDivergenceError,
    StoreLockedError,
    UnknownTopicError,
)
from learner_state.mastery import new_learner_state, uncertainty
from learner_state.models import ActionKind, LearnerProfile, Observation
from learner_state.proficiency import current_proficiency
from orchestrator import session
from scheduler.review_queue import build_review_queue, carried_over
from seeding import derive_seed
from simulation.personas import load_personas
from simulation.report import write_report
from simulation.runner import run_simulation
from state_storage.canonical import state_digest
from state_storage.store import LearnerStore

logger = logging.getLogger(__name__)

STATUS_CODES = [
    ((RejectedInputError, UnknownTopicError, MalformedItemError, BankError, ConfigError), 400),
    ((FileNotFoundError, HintUnavailableError), 404),
    ((StoreLockedError, LogGapError, FileExistsError), 409),
    ((ReplayDivergenceError, LogCorruptionError), 422),
]


def status_for(error: Exception) -> int:
    for types, status in STATUS_CODES:
        if isinstance(error, types):
            return status
    return 500


def _required(event: dict, key: str):
    value = event.get(key)
    if value is None or value == "":
        raise RejectedInputError(f"'{key}' is required.")
    return value


def _date(event: dict, key: str = "date") -> date:
    try:
        return date.fromisoformat(str(_required(event, key)))
    except ValueError:
        raise RejectedInputError(f"'{key}' must be YYYY-MM-DD, got {event.get(key)!r}") from None


def _timestamp(event: dict, key: str = "at") -> datetime:
    value = event.get(key)
    if value is None:
        return datetime.now(timezone.utc)
    try:
        parsed = datetime.fromisoformat(str(value).replace("Z", "+00:00"))
    except ValueError:
        raise RejectedInputError(f"'{key}' must be an ISO timestamp, got {value!r}") from None
    return parsed if parsed.tzinfo else parsed.replace(tzinfo=timezone.utc)


def _flag(value) -> bool:
    if isinstance(value, str):
        if value.lower() not in ("true", "false"):
            raise RejectedInputError(f"Expected true or false, got {value!r}")
        return value.lower() == "true"
    return bool(value)


def _with_seed(config: TutorConfig, seed) -> TutorConfig:
    if seed is None:
        return config
    return parse_config({**config.model_dump(mode="json"), "seed": seed})


def _store(event: dict) -> LearnerStore:
    store = LearnerStore(_required(event, "state"))
    if not store.exists():
        raise FileNotFoundError(f"No learner state in {store.directory}")
    return store


def _action_body(action) -> dict:
    return action.model_dump(mode="json", exclude_defaults=True)


def init_learner(event: dict) -> dict:
    profile_path = Path(_required(event, "profile"))
    if not profile_path.exists():
        raise RejectedInputError(f"Profile {profile_path} not found.")
    try:
        profile = LearnerProfile.model_validate_json(profile_path.read_bytes())
    except ValidationError as e:
        raise RejectedInputError(f"Invalid profile {profile_path}: {e}") from e

    config = load_config(event.get("config"))
    config = _with_seed(config, event.get("seed"))
    bank = load_bank(event.get("bank"))
    state = new_learner_state(
        profile.learner_id,
        profile.preferences,
        profile.history,
        bank_topics(bank),
        config.mastery,
        derive_seed(config.seed, profile.learner_id),
        memory_cap=config.agents.memory_cap,
    )
    store = LearnerStore.create(_required(event, "state"), state, config, bank)
    return {
        "learner_id": state.learner_id,
        "version": state.version,
        "state": str(store.directory),
        "mastery": {topic: round(t.m, 4) for topic, t in state.mastery.items()},
    }


def daily(event: dict) -> dict:
    day = _date(event)
    store = _store(event)
    with store.lock():
        state = store.load_state()
        at = _timestamp(event) if event.get("at") else None
        state, audit = session.daily_generation(store.orchestrator(), state, day, at)
        store.record(state, [audit])
    return {
        "version": state.version,
        "date": day.isoformat(),
        "daily_set": [_action_body(a) for a in session.daily_set(state, day)],
    }


def _parse_tests(text: str) -> tuple[int, int]:
    try:
        passed, total = (int(part) for part in str(text).split("/"))
    except ValueError:
        raise RejectedInputError(f"'tests' must be <passed>/<total>, got {text!r}") from None
    return passed, total


def submit(event: dict) -> dict:
    store = _store(event)
    item_id = _required(event, "item")
    tests_passed, tests_total = _parse_tests(_required(event, "tests"))
    errors = event.get("errors") or ()
    if isinstance(errors, str):
        errors = tuple(tag for tag in errors.split(",") if tag)
    with store.lock():
        orchestrator = store.orchestrator()
        if item_id not in orchestrator.items:
            raise RejectedInputError(f"Unknown item {item_id}")
        state = store.load_state()
        timestamp = _timestamp(event)
        if timestamp < state.updated_at:
            raise RejectedInputError(f"Submission at {timestamp.isoformat()} predates the last update {state.updated_at.isoformat()}")
        try:
            observation = Observation(
                item_id=item_id,
                passed=_flag(event.get("passed")),
                timestamp=timestamp,
                hint_count=int(event.get("hints") or 0),
                error_tags=tuple(errors),
                solve_time=float(event.get("time_ms") or 0) / 1000.0,
                tests_passed=tests_passed,
                tests_total=tests_total,
            )
        except ValidationError as e:
            raise RejectedInputError(f"Invalid submission: {e}") from e
        state, audits = session.submit_attempt(orchestrator, state, observation)
        store.record(state, audits)

    item = orchestrator.items[item_id]
    feedback = [
        a for a in state.actions
        if a.kind is ActionKind.FEEDBACK and a.item_id == item_id and a.issued_at == timestamp
    ]
    review = state.review_for(item_id)
    return {
        "version": state.version,
        "feedback": [_action_body(a) for a in feedback],
        "mastery": {topic: round(state.mastery[topic].m, 4) for topic in item.topics if topic in state.mastery},
        "review": review.model_dump(mode="json") if review else None,
        "rejected": [
            {"agent_id": o.proposal.agent_id, "reason": o.reason}
            for audit in audits for o in audit.proposals if not o.accepted
        ],
    }


def hint(event: dict) -> dict:
    store = _store(event)
    item_id = _required(event, "item")
    with store.lock():
        orchestrator = store.orchestrator()
        if item_id not in orchestrator.items:
            raise RejectedInputError(f"Unknown item {item_id}")
        state = store.load_state()
        timestamp = max(_timestamp(event), state.updated_at)
        state, audit = session.request_hint(orchestrator, state, item_id, timestamp)
        store.record(state, [audit])
    for failure in audit.agent_failures:
        if failure.error.startswith(HintUnavailableError.__name__):
            raise HintUnavailableError(failure.error)
    issued = session.latest_hint(state, item_id)
    return {"version": state.version, "hint": _action_body(issued) if issued else None}


def session_check(event: dict) -> dict:
    day = _date(event)
    store = _store(event)
    with store.lock():
        state = store.load_state()
        state, audit = session.session_check(store.orchestrator(), state, day)
        store.record(state, [audit])
    return {
        "version": state.version,
        "interventions": [_action_body(a) for a in state.actions_on(day, ActionKind.INTERVENE)],
        "daily_set": [_action_body(a) for a in session.daily_set(state, day)],
    }


def review_due(event: dict) -> dict:
    day = _date(event)
    store = _store(event)
    with store.lock():
        state = store.load_state()
        orchestrator = store.orchestrator()
        state, audit = session.review_due(orchestrator, state, day)
        store.record(state, [audit])
    scheduler = orchestrator.config.scheduler
    return {
        "version": state.version,
        "due": [r.model_dump(mode="json") for r in build_review_queue(state, day, scheduler)],
        "carried_over": [r.item_id for r in carried_over(state, day, scheduler)],
    }


def simulate(event: dict) -> dict:
    config = load_config(event.get("config"))
    config = _with_seed(config, event.get("seed"))
    bank = load_bank(event.get("bank"))
    personas = load_personas(event.get("personas"))
    days = int(event.get("days") or config.simulation.days)
    if days < 1:
        raise RejectedInputError("'days' must be at least 1")
    result = run_simulation(personas, bank, config, days)
    out = write_report(result, _required(event, "out"), config, bank, with_events=bool(event.get("events", True)))
    return {"out": str(out), "days": days, "metrics": result.overall.model_dump(mode="json")}


def mastery_frame(state) -> pd.DataFrame:
    rows = []
    for topic, t in sorted(state.mastery.items()):
        mean, variance = uncertainty(t)
        rows.append(
            {
                "topic": topic,
                "m": t.m,
                "alpha": t.alpha_count,
                "beta": t.beta_count,
                "beta_mean": mean,
                "beta_variance": variance,
                "last_update": t.last_update.isoformat(),
            }
        )
    return pd.DataFrame(rows, columns=["topic", "m", "alpha", "beta", "beta_mean", "beta_variance", "last_update"])


def report(event: dict) -> dict:
    store = _store(event)
    state = store.load_state()
    config = store.load_config()
    if event.get("format", "json") == "csv":
        return {"csv": mastery_frame(state).to_csv(index=False)}
    if event.get("format", "json") != "json":
        raise RejectedInputError(f"Unknown report format {event.get('format')!r}")

    today = _date(event) if event.get("date") else state.updated_at.date()
    events = store.events()
    latencies = [e.latency_ms for e in events]
    return {
        "learner_id": state.learner_id,
        "version": state.version,
        "date": today.isoformat(),
        "mastery": mastery_frame(state).to_dict(orient="records"),
        "review_queue": [r.model_dump(mode="json") for r in build_review_queue(state, today, config.scheduler)],
        "proficiency": current_proficiency(state, config.proficiency, today),
        "memory": state.memory.model_dump(mode="json"),
        "audit": {
            "events": len(events),
            "failed_commits": sum(e.status == "failed" for e in events),
            "rejected_proposals": sum(len(e.rejected) for e in events),
            "agent_failures": sum(len(e.agent_failures) for e in events),
            "by_trigger": {
                kind: int(count) for kind, count in pd.Series([e.trigger_kind for e in events], dtype=object).value_counts().items()
            },
            "median_latency_ms": float(pd.Series(latencies).median()) if latencies else None,
        },
    }


def replay(event: dict) -> dict:
    store = _store(event)
    state = store.reconstruct()
    latest = store.load_state()
    expected, actual = state_digest(latest), state_digest(state)
    if latest.version != state.version or expected != actual:
        raise ReplayDivergenceError(latest.version, expected, actual)
    return {"consistent": True, "version": state.version, "digest": actual}


COMMANDS: dict[str, Callable[[dict], dict]] = {
    "init": init_learner,
    "daily": daily,
    "submit": submit,
    "hint": hint,
    "session-check": session_check,
    "review-due": review_due,
    "simulate": simulate,
    "report": report,
    "replay": replay,
}


def handle_event(event, context=None):
    """
    Runs one tutor command.

    Args:
        event: Dict with a "command" key (see COMMANDS) plus the command's
               arguments, e.g. {"command": "daily", "state": "state/demo", "date": "2025-01-06"}.
        context: Unused; kept for handler-style callers.

    Returns:
        dict: {"statusCode": 200, "body": json} on success, or the mapped
              error status with {"error": type, "message": text}.
    """
    command = event.get("command")
    action = COMMANDS.get(command)
    if action is None:
        return {"statusCode": 400, "body": json.dumps({"error": "UnknownCommand", "message": f"Unknown command {command!r}"})}
    try:
        body = action(event)
        return {"statusCode": 200, "body": json.dumps(body, default=str)}
    except Exception as e:
        status = status_for(e)
        if status == 500:
            logger.exception("Command %s failed", command)
        else:
            logger.warning("Command %s rejected (%d): %s", command, status, e)
        return {"statusCode": status, "body": json.dumps({"error": type(e).__name__, "message": str(e)})}
