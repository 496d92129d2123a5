"""
Problem bank: item records, loading and validation.
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

import networkx as nx
from pydantic import Field, ValidationError, field_validator

from errors import BankError
from learner_state.models import FrozenModel

logger = logging.getLogger(__name__)

HINT_LEVELS = (1, 2, 3, 4, 5)
HINT_TIERS = ("beginner", "intermediate", "advanced")
SUGGESTION_CATEGORIES = ("time", "space", "readability", "edge_case")
DISCLOSURE_SPAN = 12

# Closed vocabulary of error tags; anything else is counted under "other".
ERROR_TAGS = (
    "missing-base-case",
    "off-by-one",
    "wrong-data-structure",
    "infinite-loop",
    "boundary-condition",
    "null-handling",
    "wrong-complexity",
    "incorrect-recurrence",
    "mutation-side-effect",
    "type-confusion",
    "integer-overflow",
    "wrong-traversal-order",
)


class Difficulty(str, Enum):
    EASY = "Easy"
    MEDIUM = "Medium"
    HARD = "Hard"


class ItemTest(FrozenModel):
    input: str
    expected: str


class ProblemItem(FrozenModel):
    id: str
    topics: tuple[str, ...] = Field(min_length=1)
    difficulty: Difficulty
    prerequisites: tuple[str, ...] = ()
    expected_solve_time: Optional[float] = Field(default=None, gt=0)
    reference_solution: str = ""
    # keyed "<level>:<tier>", e.g. "3:intermediate"
    hint_templates: dict[str, str] = Field(default_factory=dict)
    tests: tuple[ItemTest, ...] = ()
    suggestions: dict[str, tuple[str, ...]] = Field(default_factory=dict)
    error_tags: tuple[str, ...] = ()

    @field_validator("prerequisites")
    @classmethod
    def _sorted_prerequisites(cls, value):
        return tuple(sorted(set(value)))

    @property
    def primary_topic(self) -> str:
        return self.topics[0]

    def template(self, level: int, tier: str) -> Optional[str]:
        return self.hint_templates.get(template_key(level, tier))


def template_key(level: int, tier: str) -> str:
    return f"{level}:{tier}"


def shares_solution_span(text: str, solution: str, span: int = DISCLOSURE_SPAN) -> bool:
    """
    Checks whether text contains any substring of solution of length >= span.

    Args:
        text (str): Learner-facing text.
        solution (str): Reference solution that must never leak.
        span (int): Minimum leaked length that counts as disclosure.

    Returns:
        bool: True when some window of the solution appears verbatim in text.
    """
    if len(solution) < span or len(text) < span:
        return False
    windows = {solution[i:i + span] for i in range(len(solution) - span + 1)}
    return any(text[i:i + span] in windows for i in range(len(text) - span + 1))


def bank_topics(bank: Iterable[ProblemItem]) -> set[str]:
    topics = set()
    for item in bank:
        topics.update(item.topics)
    return topics


def prerequisite_graph(bank: Iterable[ProblemItem]) -> nx.DiGraph:
    """Topic graph with an edge prerequisite -> topic for every item."""
    graph = nx.DiGraph()
    for item in bank:
        graph.add_nodes_from(item.topics)
        for prerequisite in item.prerequisites:
            for topic in item.topics:
                if prerequisite != topic:
                    graph.add_edge(prerequisite, topic)
    return graph


def validate_bank(bank: list[ProblemItem]) -> list[ProblemItem]:
    """
    Validates a loaded bank and returns it sorted by id.

    Raises:
        BankError: duplicate ids, unknown prerequisite topics, a prerequisite cycle,
            or a hint template that discloses part of the reference solution.
    """
    seen = set()
    for item in bank:
        if item.id in seen:
            raise BankError(f"Duplicate item id {item.id}")
        seen.add(item.id)

    topics = bank_topics(bank)
    for item in bank:
        missing = [p for p in item.prerequisites if p not in topics]
        if missing:
            raise BankError(f"Item {item.id} has unknown prerequisite topics {missing}")
        for key, text in item.hint_templates.items():
            if shares_solution_span(text, item.reference_solution):
                raise BankError(f"Hint template {key} of item {item.id} discloses the solution")

    graph = prerequisite_graph(bank)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise BankError(f"Prerequisite cycle between topics: {cycle}")

    return sorted(bank, key=lambda item: item.id)


def load_bank(file_path: Optional[str] = None) -> list[ProblemItem]:
    """
    Loads a problem bank from a JSON array, or the built-in default bank.

    Args:
        file_path (str, optional): Path to a JSON array of ProblemItem records.

    Returns:
        list: Validated ProblemItem records sorted by id.
    """
    if file_path is None:
        from curriculum.default_bank import build_default_bank

        return validate_bank(build_default_bank())

    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Problem bank {path} not found.")
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    try:
        bank = [ProblemItem.model_validate(record) for record in data]
    except ValidationError as e:
        raise BankError(f"Invalid problem bank {path}: {e}") from e
    logger.info("Loaded %d items from %s", len(bank), path)
    return validate_bank(bank)


def index_bank(bank: Iterable[ProblemItem]) -> dict[str, ProblemItem]:
    return {item.id: item for item in bank}
