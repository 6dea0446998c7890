"""Parser, renderer, and linter for the ``.gwt`` acceptance-test text format.

A ``.gwt`` file holds one or more test blocks separated by at least one
blank line. A block is three header lines in fixed order followed by
clause lines::

    test: TC-12
    story: US-4
    name: Checkout rejects an empty cart
    Given a signed-in customer with an empty cart
    When the customer submits the checkout form
    Then the order is refused
    And the cart page shows an explanatory message

``And`` continues the kind of the nearest preceding primary clause.
Lines starting with ``#`` are comments and are ignored. Input may use
CRLF line endings; canonical output is always LF with a trailing
newline. Parsing is total: any input string yields a result carrying
the tests that parsed plus per-line diagnostics, and never raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from shiftup.artifacts.model import AcceptanceTest, Clause, ClauseKind

_CLAUSE_RE = re.compile(r"^(Given|When|Then|And) +(\S.*)$")
_HEADER_RE = re.compile(r"^(test|story|name):(.*)$")
_KEYWORD_BY_KIND = {
    ClauseKind.GIVEN: "Given",
    ClauseKind.WHEN: "When",
    ClauseKind.THEN: "Then",
}
_KIND_BY_KEYWORD = {v: k for k, v in _KEYWORD_BY_KIND.items()}
_CLAUSE_RANK = {ClauseKind.GIVEN: 0, ClauseKind.WHEN: 1, ClauseKind.THEN: 2}

LONG_NAME_LIMIT = 120
_CONJUNCTION_RE = re.compile(r"\band\b", re.IGNORECASE)


@dataclass(frozen=True)
class GwtError:
    """One parse diagnostic, anchored to a 1-based line number."""

    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class GwtWarning:
    test_id: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.test_id}: {self.rule}: {self.message}"


@dataclass(frozen=True)
class GwtFile:
    tests: tuple[AcceptanceTest, ...]
    path: str | None = None


@dataclass
class GwtParseResult:
    tests: list[AcceptanceTest] = field(default_factory=list)
    errors: list[GwtError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_file(self, path: str | None = None) -> GwtFile:
        return GwtFile(tests=tuple(self.tests), path=path)


def parse_gwt(text: str) -> GwtParseResult:
    """Parse ``.gwt`` text into tests plus diagnostics. Never raises."""
    result = GwtParseResult()
    lines = text.split("\n")
    blocks = _split_blocks(lines)
    if not blocks:
        result.errors.append(GwtError(1, "expected at least one test block"))
        return result
    seen: dict[str, int] = {}
    for block in blocks:
        test = _parse_block(block, result.errors)
        if test is None:
            continue
        if test.id in seen:
            first = seen[test.id]
            result.errors.append(
                GwtError(block[0][0], f"duplicate test id {test.id} (first seen at line {first})")
            )
            continue
        seen[test.id] = block[0][0]
        result.tests.append(test)
    return result


def _split_blocks(lines: list[str]) -> list[list[tuple[int, str]]]:
    """Group numbered lines into blocks separated by blank lines.

    Comment lines are dropped here and never separate blocks.
    """
    blocks: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        if line.startswith("#"):
            continue
        if not line.strip():
            if current:
                blocks.append(current)
                current = []
            continue
        current.append((lineno, line))
    if current:
        blocks.append(current)
    return blocks


def _parse_block(block: list[tuple[int, str]], errors: list[GwtError]) -> AcceptanceTest | None:
    headers: dict[str, str] = {}
    index = 0
    for key in ("test", "story", "name"):
        if index >= len(block):
            errors.append(GwtError(block[-1][0], f"missing header field '{key}:'"))
            return None
        lineno, line = block[index]
        m = _HEADER_RE.match(line)
        if not m or m.group(1) != key:
            errors.append(GwtError(lineno, f"expected '{key}: <value>'"))
            return None
        value = m.group(2).strip()
        if not value:
            errors.append(GwtError(lineno, f"header '{key}:' has an empty value"))
            return None
        headers[key] = value
        index += 1

    clauses: list[Clause] = []
    last_kind: ClauseKind | None = None
    bad = False
    for lineno, line in block[index:]:
        m = _CLAUSE_RE.match(line)
        if not m:
            errors.append(GwtError(lineno, "expected clause line 'Given|When|Then|And <text>'"))
            bad = True
            continue
        keyword, clause_text = m.group(1), m.group(2).rstrip()
        if keyword == "And":
            if last_kind is None:
                errors.append(GwtError(lineno, "And without preceding clause"))
                bad = True
                continue
            kind = last_kind
        else:
            kind = _KIND_BY_KEYWORD[keyword]
            if last_kind is not None and _CLAUSE_RANK[kind] < _CLAUSE_RANK[last_kind]:
                errors.append(
                    GwtError(
                        lineno,
                        f"{keyword} may not follow {_KEYWORD_BY_KIND[last_kind]} "
                        "(clauses run given, when, then)",
                    )
                )
                bad = True
                continue
            last_kind = kind
        clauses.append(Clause(kind=kind, text=clause_text))

    if not clauses and not bad:
        errors.append(GwtError(block[-1][0], "test block has no clause lines"))
        return None
    if bad:
        return None
    return AcceptanceTest(
        id=headers["test"],
        story_ref=headers["story"],
        name=headers["name"],
        clauses=tuple(clauses),
    )


def render_gwt(file: GwtFile) -> str:
    """Canonical text for a GwtFile: fixed header order, one clause per
    line, a single blank line between tests, trailing newline.

    Assumes file invariants hold (ids unique, single-line texts with no
    leading or trailing whitespace); ``parse_gwt(render_gwt(f))``
    reproduces the same test list.
    """
    blocks = []
    for test in file.tests:
        lines = [f"test: {test.id}", f"story: {test.story_ref}", f"name: {test.name}"]
        previous: ClauseKind | None = None
        for clause in test.clauses:
            keyword = "And" if clause.kind == previous else _KEYWORD_BY_KIND[clause.kind]
            lines.append(f"{keyword} {clause.text}")
            previous = clause.kind
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def lint_gwt(file: GwtFile) -> list[GwtWarning]:
    """Best-practice warnings for a cleanly parsed file."""
    warnings: list[GwtWarning] = []
    for test in file.tests:
        when_count = sum(1 for c in test.clauses if c.kind == ClauseKind.WHEN)
        if when_count > 1:
            warnings.append(
                GwtWarning(test.id, "multiple-when", f"{when_count} when clauses in one test")
            )
        for clause in test.clauses:
            if clause.kind == ClauseKind.THEN and _CONJUNCTION_RE.search(clause.text):
                warnings.append(
                    GwtWarning(
                        test.id,
                        "then-conjunction",
                        f"then clause contains 'and'; split with an And line: {clause.text!r}",
                    )
                )
        if len(test.name) > LONG_NAME_LIMIT:
            warnings.append(
                GwtWarning(test.id, "long-name", f"name is {len(test.name)} chars (limit {LONG_NAME_LIMIT})")
            )
        seen: set[str] = set()
        for clause in test.clauses:
            if clause.text in seen:
                warnings.append(
                    GwtWarning(test.id, "duplicate-clause-text", f"repeated clause: {clause.text!r}")
                )
                break
            seen.add(clause.text)
    return warnings
