"""Artifact id schemes and ordering helpers.

Every artifact family has a fixed prefix and a numeric suffix
(``REQ-3``, ``US-12``, ``TC-175``, ``PH-1``, ``ISS-20``, ``ADR-0004``).
Sorting anywhere in the tool is by numeric suffix so that ``TC-2``
precedes ``TC-10`` regardless of string order.
"""

from __future__ import annotations

import re

REQUIREMENT = "REQ"
STORY = "US"
TEST = "TC"
PHASE = "PH"
ISSUE = "ISS"
ADR = "ADR"

_PATTERNS = {
    REQUIREMENT: re.compile(r"^REQ-[1-9][0-9]*$"),
    STORY: re.compile(r"^US-[1-9][0-9]*$"),
    TEST: re.compile(r"^TC-[1-9][0-9]*$"),
    PHASE: re.compile(r"^PH-[1-9][0-9]*$"),
    ISSUE: re.compile(r"^ISS-[1-9][0-9]*$"),
    ADR: re.compile(r"^ADR-[0-9]{4}$"),
}

_SUFFIX = re.compile(r"^([A-Z]+)-([0-9]+)$")


def is_valid(kind: str, value: str) -> bool:
    """True if ``value`` matches the id pattern of the given artifact kind."""
    pattern = _PATTERNS.get(kind)
    return bool(pattern and pattern.match(value))


def kind_of(value: str) -> str | None:
    """Artifact kind implied by an id's prefix, or None if unrecognized."""
    m = _SUFFIX.match(value)
    if not m:
        return None
    prefix = m.group(1)
    return prefix if prefix in _PATTERNS else None


def numeric_suffix(value: str) -> int:
    """Numeric part of an artifact id; raises ValueError on malformed ids."""
    m = _SUFFIX.match(value)
    if not m:
        raise ValueError(f"not an artifact id: {value!r}")
    return int(m.group(2))


def sort_key(value: str) -> tuple[str, int]:
    """Sort key grouping by prefix, then by numeric suffix."""
    m = _SUFFIX.match(value)
    if not m:
        return (value, 0)
    return (m.group(1), int(m.group(2)))
