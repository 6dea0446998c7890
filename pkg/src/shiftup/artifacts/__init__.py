"""Machine-readable guardrail artifacts: model, validation, and on-disk store."""

from shiftup.artifacts.model import (
    AcceptanceTest,
    ADRecord,
    AdrStatus,
    ArtifactBundle,
    C4Element,
    C4Level,
    C4Model,
    C4Relation,
    Clause,
    ClauseKind,
    IssueStatus,
    PathMapping,
    Requirement,
    RequirementKind,
    RoadmapPhase,
    UserStory,
    Violation,
    WorkIssue,
)
from shiftup.artifacts.store import BundleLoadError, BundleSaveError, load_bundle, save_bundle
from shiftup.artifacts.validate import validate

__all__ = [
    "AcceptanceTest",
    "ADRecord",
    "AdrStatus",
    "ArtifactBundle",
    "BundleLoadError",
    "BundleSaveError",
    "C4Element",
    "C4Level",
    "C4Model",
    "C4Relation",
    "Clause",
    "ClauseKind",
    "IssueStatus",
    "PathMapping",
    "Requirement",
    "RequirementKind",
    "RoadmapPhase",
    "UserStory",
    "Violation",
    "WorkIssue",
    "load_bundle",
    "save_bundle",
    "validate",
]
