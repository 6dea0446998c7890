"""Bundled example project: a ski-lodge snack bar ordering system.

The bundle under ``snackbar/`` is a complete, valid artifact set kept
at the scale of the original study: 68 user stories, 175 acceptance
tests, 10 roadmap phases, plus labeled prompt logs for the metrics
reports. Regenerate it with scripts/make_snackbar_fixture.py.
"""

from __future__ import annotations

from pathlib import Path


def snackbar_root() -> Path:
    """Directory of the bundled snack-bar project."""
    return Path(__file__).resolve().parent / "snackbar"
