"""Domain types for the guardrail artifact bundle.

A bundle is the validated, in-memory form of one project directory:
requirements, user stories, given-when-then acceptance tests, the C4
architecture model, architecture decision records, roadmap phases, and
work issues. Instances are treated as immutable after load; the one
sanctioned mutation is an issue's status, performed by the loop engine
under the single-writer rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class RequirementKind(str, Enum):
    FUNCTIONAL = "functional"
    NON_FUNCTIONAL = "non_functional"


class ClauseKind(str, Enum):
    GIVEN = "given"
    WHEN = "when"
    THEN = "then"


class C4Level(str, Enum):
    CONTEXT = "context"
    CONTAINER = "container"
    COMPONENT = "component"
    CODE = "code"


# Ordered outermost to innermost; a parent must sit exactly one level above.
C4_LEVEL_ORDER = [C4Level.CONTEXT, C4Level.CONTAINER, C4Level.COMPONENT, C4Level.CODE]


class AdrStatus(str, Enum):
    PROPOSED = "proposed"
    ACCEPTED = "accepted"
    DEPRECATED = "deprecated"
    SUPERSEDED = "superseded"


class IssueStatus(str, Enum):
    OPEN = "open"
    IN_PROGRESS = "in_progress"
    CLOSED = "closed"


@dataclass(frozen=True)
class Requirement:
    id: str
    text: str
    kind: RequirementKind


@dataclass(frozen=True)
class UserStory:
    id: str
    as_a: str
    i_want: str
    so_that: str
    requirement_refs: tuple[str, ...]


@dataclass(frozen=True)
class Clause:
    kind: ClauseKind
    text: str


@dataclass(frozen=True)
class AcceptanceTest:
    id: str
    story_ref: str
    name: str
    clauses: tuple[Clause, ...]

    def clause_texts(self, kind: ClauseKind) -> list[str]:
        return [c.text for c in self.clauses if c.kind == kind]


@dataclass(frozen=True)
class C4Element:
    id: str
    name: str
    level: C4Level
    parent: str | None
    description: str


@dataclass(frozen=True)
class C4Relation:
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class PathMapping:
    path_prefix: str
    element_id: str


@dataclass(frozen=True)
class C4Model:
    elements: tuple[C4Element, ...] = ()
    relations: tuple[C4Relation, ...] = ()
    path_mappings: tuple[PathMapping, ...] = ()

    def element_by_id(self) -> dict[str, C4Element]:
        return {e.id: e for e in self.elements}


@dataclass(frozen=True)
class ADRecord:
    id: str
    title: str
    status: AdrStatus
    date: str
    context: str
    decision: str
    consequences: str
    supersedes: str | None = None


@dataclass(frozen=True)
class RoadmapPhase:
    id: str
    name: str
    goal: str
    architecture_tasks: tuple[str, ...]
    test_ids: tuple[str, ...]
    depends_on: tuple[str, ...]


@dataclass
class WorkIssue:
    """Issue status is the one field the loop engine may update in place."""

    id: str
    phase_ref: str
    title: str
    description: str
    constraint_test_ids: tuple[str, ...]
    context_links: tuple[str, ...]
    status: IssueStatus


@dataclass
class ArtifactBundle:
    root: Path = field(compare=False)
    manifest: dict
    requirements: list[Requirement] = field(default_factory=list)
    stories: list[UserStory] = field(default_factory=list)
    tests: list[AcceptanceTest] = field(default_factory=list)
    c4: C4Model = field(default_factory=C4Model)
    adrs: list[ADRecord] = field(default_factory=list)
    phases: list[RoadmapPhase] = field(default_factory=list)
    issues: list[WorkIssue] = field(default_factory=list)
    # Which .gwt file each test id was loaded from, for layout-preserving saves.
    test_files: dict[str, list[str]] = field(default_factory=dict, compare=False)

    def requirement_ids(self) -> set[str]:
        return {r.id for r in self.requirements}

    def story_ids(self) -> set[str]:
        return {s.id for s in self.stories}

    def test_ids(self) -> set[str]:
        return {t.id for t in self.tests}

    def phase_ids(self) -> set[str]:
        return {p.id for p in self.phases}

    def issue_ids(self) -> set[str]:
        return {i.id for i in self.issues}

    def test_by_id(self, test_id: str) -> AcceptanceTest:
        for t in self.tests:
            if t.id == test_id:
                return t
        raise KeyError(test_id)

    def phase_by_id(self, phase_id: str) -> RoadmapPhase:
        for p in self.phases:
            if p.id == phase_id:
                return p
        raise KeyError(phase_id)

    def issue_by_id(self, issue_id: str) -> WorkIssue:
        for i in self.issues:
            if i.id == issue_id:
                return i
        raise KeyError(issue_id)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, attributed to an artifact and a named rule."""

    artifact_id: str
    rule: str
    message: str
    file: str | None = None
    line: int | None = None

    def __str__(self) -> str:
        loc = ""
        if self.file:
            loc = f" [{self.file}" + (f":{self.line}]" if self.line else "]")
        return f"{self.artifact_id}: {self.rule}: {self.message}{loc}"
