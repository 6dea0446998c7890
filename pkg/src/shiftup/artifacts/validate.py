"""Whole-bundle invariant checking.

Validation is exhaustive: every broken invariant in the bundle is
reported, never just the first. Violations are data, not exceptions;
an empty list means the bundle is valid.
"""

from __future__ import annotations

from collections import Counter

from shiftup import ids
from shiftup.artifacts.model import (
    AcceptanceTest,
    ArtifactBundle,
    C4_LEVEL_ORDER,
    ClauseKind,
    AdrStatus,
    Violation,
)

_CLAUSE_RANK = {ClauseKind.GIVEN: 0, ClauseKind.WHEN: 1, ClauseKind.THEN: 2}


def validate(bundle: ArtifactBundle) -> list[Violation]:
    """All invariant violations in the bundle; empty iff the bundle is valid."""
    out: list[Violation] = []
    out += _check_unique_ids(bundle)
    out += _check_requirements(bundle)
    out += _check_stories(bundle)
    out += _check_tests(bundle)
    out += _check_c4(bundle)
    out += _check_adrs(bundle)
    out += _check_phases(bundle)
    out += _check_issues(bundle)
    return out


def _check_unique_ids(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    families = [
        ("requirement", [r.id for r in bundle.requirements]),
        ("story", [s.id for s in bundle.stories]),
        ("test", [t.id for t in bundle.tests]),
        ("adr", [a.id for a in bundle.adrs]),
        ("phase", [p.id for p in bundle.phases]),
        ("issue", [i.id for i in bundle.issues]),
        ("c4-element", [e.id for e in bundle.c4.elements]),
    ]
    for family, id_list in families:
        for value, count in sorted(Counter(id_list).items()):
            if count > 1:
                out.append(Violation(value, "duplicate-id", f"{family} id appears {count} times"))
    return out


def _check_requirements(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    for req in bundle.requirements:
        if not ids.is_valid(ids.REQUIREMENT, req.id):
            out.append(Violation(req.id, "bad-id-format", "expected REQ-<n>"))
        if not req.text.strip():
            out.append(Violation(req.id, "empty-text", "requirement text is empty"))
    return out


def _check_stories(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    known = bundle.requirement_ids()
    for story in bundle.stories:
        if not ids.is_valid(ids.STORY, story.id):
            out.append(Violation(story.id, "bad-id-format", "expected US-<n>"))
        for slot, value in (("as_a", story.as_a), ("i_want", story.i_want), ("so_that", story.so_that)):
            if not value.strip():
                out.append(Violation(story.id, "empty-text", f"story slot {slot} is empty"))
        for ref in story.requirement_refs:
            if ref not in known:
                out.append(Violation(story.id, "dangling-reference", f"{story.id} -> {ref}"))
    return out


def _check_test_clauses(test: AcceptanceTest) -> list[Violation]:
    out = []
    kinds = [c.kind for c in test.clauses]
    for kind in ClauseKind:
        if kind not in kinds:
            out.append(
                Violation(test.id, "test-missing-clause-kind", f"no {kind.value} clause")
            )
    ranks = [_CLAUSE_RANK[k] for k in kinds]
    if any(b < a for a, b in zip(ranks, ranks[1:])):
        out.append(
            Violation(test.id, "test-clause-order", "clauses must appear in given, when, then order")
        )
    return out


def _check_tests(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    known = bundle.story_ids()
    for test in bundle.tests:
        if not ids.is_valid(ids.TEST, test.id):
            out.append(Violation(test.id, "bad-id-format", "expected TC-<n>"))
        if test.story_ref not in known:
            out.append(Violation(test.id, "dangling-reference", f"{test.id} -> {test.story_ref}"))
        out += _check_test_clauses(test)
    return out


def _check_c4(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    elements = bundle.c4.element_by_id()
    level_index = {level: i for i, level in enumerate(C4_LEVEL_ORDER)}
    for element in bundle.c4.elements:
        if element.parent is None:
            continue
        parent = elements.get(element.parent)
        if parent is None:
            out.append(
                Violation(element.id, "dangling-reference", f"{element.id} -> {element.parent}")
            )
        elif level_index[parent.level] != level_index[element.level] - 1:
            out.append(
                Violation(
                    element.id,
                    "c4-level-order",
                    f"parent {parent.id} is {parent.level.value}, "
                    f"expected one level above {element.level.value}",
                )
            )
    for relation in bundle.c4.relations:
        for endpoint in (relation.source, relation.target):
            if endpoint not in elements:
                out.append(
                    Violation(endpoint, "dangling-reference", f"relation endpoint {endpoint} unknown")
                )
    seen_prefixes = Counter(m.path_prefix for m in bundle.c4.path_mappings)
    for prefix, count in sorted(seen_prefixes.items()):
        if count > 1:
            out.append(
                Violation(prefix, "c4-duplicate-path-prefix", f"path prefix mapped {count} times")
            )
    for mapping in bundle.c4.path_mappings:
        if mapping.element_id not in elements:
            out.append(
                Violation(
                    mapping.element_id,
                    "dangling-reference",
                    f"path mapping {mapping.path_prefix} -> {mapping.element_id}",
                )
            )
    return out


def _check_adrs(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    known = {a.id for a in bundle.adrs}
    superseders = {a.supersedes for a in bundle.adrs if a.supersedes}
    for adr in bundle.adrs:
        if not ids.is_valid(ids.ADR, adr.id):
            out.append(Violation(adr.id, "bad-id-format", "expected ADR-<nnnn>"))
        for section, value in (
            ("context", adr.context),
            ("decision", adr.decision),
            ("consequences", adr.consequences),
        ):
            if not value.strip():
                out.append(Violation(adr.id, "adr-empty-section", f"section {section} is empty"))
        if adr.supersedes and adr.supersedes not in known:
            out.append(Violation(adr.id, "dangling-reference", f"{adr.id} supersedes {adr.supersedes}"))
        if adr.status == AdrStatus.SUPERSEDED and adr.id not in superseders:
            out.append(
                Violation(
                    adr.id,
                    "adr-superseded-without-superseder",
                    "no record in the bundle names this one in supersedes",
                )
            )
    return out


def _check_phases(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    tests = bundle.test_ids()
    phases = bundle.phase_ids()
    for phase in bundle.phases:
        if not ids.is_valid(ids.PHASE, phase.id):
            out.append(Violation(phase.id, "bad-id-format", "expected PH-<n>"))
        if not phase.test_ids:
            out.append(Violation(phase.id, "phase-tests-empty", "phase lists no acceptance tests"))
        for ref in phase.test_ids:
            if ref not in tests:
                out.append(Violation(phase.id, "dangling-reference", f"{phase.id} -> {ref}"))
        for dep in phase.depends_on:
            if dep == phase.id:
                out.append(Violation(phase.id, "phase-self-dependency", "phase depends on itself"))
            elif dep not in phases:
                out.append(Violation(phase.id, "dangling-reference", f"{phase.id} -> {dep}"))
    return out


def _check_issues(bundle: ArtifactBundle) -> list[Violation]:
    out = []
    tests = bundle.test_ids()
    phases = {p.id: p for p in bundle.phases}
    for issue in bundle.issues:
        if not ids.is_valid(ids.ISSUE, issue.id):
            out.append(Violation(issue.id, "bad-id-format", "expected ISS-<n>"))
        phase = phases.get(issue.phase_ref)
        if phase is None:
            out.append(Violation(issue.id, "dangling-reference", f"{issue.id} -> {issue.phase_ref}"))
        if not issue.constraint_test_ids:
            out.append(
                Violation(issue.id, "issue-constraints-empty", "issue lists no constraint tests")
            )
        for ref in issue.constraint_test_ids:
            if ref not in tests:
                out.append(Violation(issue.id, "dangling-reference", f"{issue.id} -> {ref}"))
            elif phase is not None and ref not in phase.test_ids:
                out.append(
                    Violation(
                        issue.id,
                        "issue-constraint-outside-phase",
                        f"{ref} is not in {phase.id}'s test set",
                    )
                )
    return out
