"""Shift-Up guardrail tooling: artifact validation, traceability, and the implement/verify loop."""

__version__ = "0.1.0"


class ShiftUpError(Exception):
    """Base class for all domain errors raised by this package."""
