"""Prompt-log metrics and the paradigm drift simulation.

Two instruments live here. The first records developer prompts to a
JSONL log, suggests categories from ordered keyword rules, and reports
per-category counts with round-half-to-even percentages. The second
contrasts the guardrailed loop against prompt-only generation with a
paired-seed Monte Carlo over the mock agent model.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from statistics import fmean

from shiftup import ShiftUpError
from shiftup.adapters import MockAgent, MockAgentParams, MockRunner, advance_correctness
from shiftup.artifacts.model import (
    AcceptanceTest,
    ArtifactBundle,
    C4Element,
    C4Level,
    C4Model,
    Clause,
    ClauseKind,
    IssueStatus,
    Requirement,
    RequirementKind,
    RoadmapPhase,
    UserStory,
    WorkIssue,
)
from shiftup.loop import LoopConfig, LoopEngine, LoopState

PROMPT_LOG_NAME = "prompts.jsonl"


class MetricsError(ShiftUpError):
    """Raised for malformed prompt records or unreportable logs."""


class Paradigm(str, Enum):
    SHIFT_UP = "shift_up"
    STRUCTURED_VIBE = "structured_vibe"


# Closed category sets; reporting order follows the declaration order.
SHIFT_UP_CATEGORIES = (
    "proceed_next_step",
    "execute_acceptance_tests",
    "developer_identified_fix",
    "accept_agent_solution",
    "initiate_next_plan_step",
)
STRUCTURED_CATEGORIES = (
    "manual_issue_fix",
    "proceed_next_step",
    "feature_planning",
    "new_feature_implementation",
    "other",
)

CATEGORIES = {
    Paradigm.SHIFT_UP: SHIFT_UP_CATEGORIES,
    Paradigm.STRUCTURED_VIBE: STRUCTURED_CATEGORIES,
}


@dataclass(frozen=True)
class PromptRecord:
    ts: str
    paradigm: Paradigm
    text: str
    issue_ref: str | None = None
    label: str | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("prompt text must be non-empty")

    def to_dict(self) -> dict:
        data = {"ts": self.ts, "paradigm": self.paradigm.value, "text": self.text}
        if self.issue_ref is not None:
            data["issue_ref"] = self.issue_ref
        if self.label is not None:
            data["label"] = self.label
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PromptRecord":
        try:
            paradigm = Paradigm(data["paradigm"])
        except (KeyError, ValueError) as exc:
            raise MetricsError(f"bad paradigm in prompt record: {data.get('paradigm')!r}") from exc
        try:
            return cls(
                ts=str(data["ts"]),
                paradigm=paradigm,
                text=str(data["text"]),
                issue_ref=data.get("issue_ref"),
                label=data.get("label"),
            )
        except (KeyError, ValueError) as exc:
            raise MetricsError(f"bad prompt record: {exc}") from exc


def record_prompt(log_path: Path, record: PromptRecord) -> None:
    """Append one record as a JSON line, leaving earlier lines untouched."""
    log_path.parent.mkdir(parents=True, exist_ok=True)
    with open(log_path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")


def load_prompts(log_path: Path) -> list[PromptRecord]:
    records = []
    with open(log_path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(PromptRecord.from_dict(json.loads(line)))
            except json.JSONDecodeError as exc:
                raise MetricsError(f"{log_path}:{n}: malformed JSON: {exc.msg}") from exc
            except MetricsError as exc:
                raise MetricsError(f"{log_path}:{n}: {exc}") from exc
    return records


# Ordered rule tables: first case-insensitive pattern match wins.
DEFAULT_RULES: dict[Paradigm, tuple[tuple[str, str], ...]] = {
    Paradigm.SHIFT_UP: (
        (r"acceptance tests?", "execute_acceptance_tests"),
        (r"\b(fix|bug|incorrect|broken|wrong)\b", "developer_identified_fix"),
        (r"\b(accept|accepted|looks good|approve)\b", "accept_agent_solution"),
        (r"\b(start|begin|initiate|draft)\b.*\bplan\b", "initiate_next_plan_step"),
        (r"\b(proceed|continue|go ahead|next step)\b", "proceed_next_step"),
    ),
    Paradigm.STRUCTURED_VIBE: (
        (r"\b(fix|bug|error|broken|wrong|crash)\b", "manual_issue_fix"),
        (r"\b(plan|design|architecture|roadmap)\b", "feature_planning"),
        (r"\bnew feature\b|\b(implement|add|build|create)\b.*\bfeature\b", "new_feature_implementation"),
        (r"\b(proceed|continue|go ahead|next step)\b", "proceed_next_step"),
    ),
}


def categorize(
    record: PromptRecord,
    rules: tuple[tuple[str, str], ...] | None = None,
) -> str | None:
    """Category for a record; an explicit label always wins.

    Unmatched structured_vibe prompts fall back to "other". There is no
    fallback for shift_up: unmatched records return None, flagging them
    for the reporter.
    """
    allowed = CATEGORIES[record.paradigm]
    if record.label is not None:
        if record.label not in allowed:
            raise MetricsError(
                f"label {record.label!r} is not a {record.paradigm.value} category"
            )
        return record.label
    table = rules if rules is not None else DEFAULT_RULES[record.paradigm]
    for pattern, category in table:
        if category not in allowed:
            raise MetricsError(f"rule category {category!r} outside {record.paradigm.value} set")
        if re.search(pattern, record.text, re.IGNORECASE):
            return category
    if record.paradigm is Paradigm.STRUCTURED_VIBE:
        return "other"
    return None


@dataclass(frozen=True)
class DistributionReport:
    paradigm: Paradigm
    total: int
    rows: tuple[tuple[str, int, int], ...]  # (category, count, rounded percent)

    def to_dict(self) -> dict:
        return {
            "paradigm": self.paradigm.value,
            "total": self.total,
            "categories": [
                {"category": c, "count": n, "percent": p} for c, n, p in self.rows
            ],
        }


def rounded_percent(count: int, total: int) -> int:
    """Banker's rounding of 100*count/total, computed exactly."""
    return int(round(Fraction(100 * count, total)))


def distribution_report(
    log_path: Path,
    paradigm: Paradigm,
    rules: tuple[tuple[str, str], ...] | None = None,
) -> DistributionReport:
    """Per-category counts and rounded percentages for one paradigm.

    Raises when any record stays uncategorized, listing the offenders;
    percentages deliberately keep their rounded values even when they
    do not sum to 100.
    """
    records = [r for r in load_prompts(log_path) if r.paradigm is paradigm]
    counts = {category: 0 for category in CATEGORIES[paradigm]}
    uncategorized = []
    for record in records:
        category = categorize(record, rules)
        if category is None:
            uncategorized.append(record.text)
        else:
            counts[category] += 1
    if uncategorized:
        shown = "; ".join(uncategorized[:5])
        raise MetricsError(
            f"{len(uncategorized)} uncategorized {paradigm.value} prompts: {shown}"
        )
    total = len(records)
    if total == 0:
        return DistributionReport(paradigm=paradigm, total=0, rows=())
    rows = tuple(
        (category, counts[category], rounded_percent(counts[category], total))
        for category in CATEGORIES[paradigm]
    )
    return DistributionReport(paradigm=paradigm, total=total, rows=rows)


def format_distribution(report: DistributionReport) -> str:
    """Aligned plain-text table for terminal output."""
    lines = [f"{report.paradigm.value}  ({report.total} prompts)"]
    if not report.rows:
        lines.append("  (no records)")
        return "\n".join(lines) + "\n"
    width = max(len(c) for c, _, _ in report.rows)
    for category, count, percent in report.rows:
        lines.append(f"  {category.ljust(width)}  {count:>4}  {percent:>3}%")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Paradigm simulation
# ---------------------------------------------------------------------------


class SimMode(str, Enum):
    GUARDRAIL = "guardrail"
    PROMPT_ONLY = "prompt_only"


@dataclass(frozen=True)
class SimulationReport:
    mode: SimMode
    trials: int
    mean_iterations: float
    mean_residual_failures: float
    stalled_fraction: float

    def __post_init__(self):
        if not 0.0 <= self.stalled_fraction <= 1.0:
            raise ValueError("stalled_fraction must be in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "trials": self.trials,
            "mean_iterations": self.mean_iterations,
            "mean_residual_failures": self.mean_residual_failures,
            "stalled_fraction": self.stalled_fraction,
        }


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed; both modes share it, which pairs their streams."""
    digest = hashlib.sha256(f"{seed}:trial:{trial}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _single_issue_bundle(test_count: int) -> ArtifactBundle:
    """Minimal in-memory bundle: one issue constraining test_count tests."""
    clauses = (
        Clause(ClauseKind.GIVEN, "the system under simulation"),
        Clause(ClauseKind.WHEN, "the behaviour is exercised"),
        Clause(ClauseKind.THEN, "the expected effect is observed"),
    )
    tests = [
        AcceptanceTest(
            id=f"TC-{n}", story_ref="US-1", name=f"simulated check {n}", clauses=clauses
        )
        for n in range(1, test_count + 1)
    ]
    requirement = Requirement(
        id="REQ-1", text="simulated capability", kind=RequirementKind.FUNCTIONAL
    )
    story = UserStory(
        id="US-1",
        as_a="developer",
        i_want="a simulated capability",
        so_that="the loop has something to chase",
        requirement_refs=("REQ-1",),
    )
    phase = RoadmapPhase(
        id="PH-1",
        name="simulation",
        goal="close the simulated issue",
        architecture_tasks=(),
        test_ids=tuple(t.id for t in tests),
        depends_on=(),
    )
    issue = WorkIssue(
        id="ISS-1",
        phase_ref="PH-1",
        title="simulated issue",
        description="drives the paradigm contrast",
        constraint_test_ids=tuple(t.id for t in tests),
        context_links=(),
        status=IssueStatus.OPEN,
    )
    c4 = C4Model(
        elements=(
            C4Element(
                id="sim",
                name="simulated system",
                level=C4Level.CONTEXT,
                parent=None,
                description="placeholder",
            ),
        ),
        relations=(),
        path_mappings=(),
    )
    return ArtifactBundle(
        root=Path("."),
        manifest={"name": "simulation"},
        requirements=[requirement],
        stories=[story],
        tests=tests,
        c4=c4,
        adrs=[],
        phases=[phase],
        issues=[issue],
    )


def _guardrail_trial(
    bundle: ArtifactBundle, params: MockAgentParams, max_iterations: int
) -> tuple[int, int, bool]:
    """(iterations, residual failures, stalled) for one guardrailed run."""
    issue = bundle.issue_by_id("ISS-1")
    issue.status = IssueStatus.OPEN
    agent = MockAgent(params)
    runner = MockRunner(agent)
    engine = LoopEngine(
        bundle,
        LoopConfig(max_iterations=max_iterations, require_plan_approval=False),
    )
    run = engine.open_issue("ISS-1")
    engine.run_to_completion(run, agent, runner)
    residual = len(run.constraint_ids) - len(run.passing)
    return run.iteration, residual, run.state is LoopState.STALLED


def _prompt_only_trial(
    test_ids: list[str], params: MockAgentParams, max_iterations: int
) -> tuple[int, int, bool]:
    """Same generative model, no feedback, tests checked only at the end."""
    state = {tid: False for tid in test_ids}
    for call_index in range(1, max_iterations + 1):
        state = advance_correctness(state, params, call_index, targeted=set())
    residual = sum(1 for correct in state.values() if not correct)
    return max_iterations, residual, residual > 0


def simulate_paradigms(
    params: MockAgentParams,
    test_count: int = 12,
    trials: int = 1000,
    seed: int = 7,
    max_iterations: int = 25,
) -> tuple[SimulationReport, SimulationReport]:
    """Paired-seed contrast of guardrailed vs prompt-only development.

    Guardrail trials run the real loop engine with per-iteration
    feedback and stop as soon as every test passes. Prompt-only trials
    make the same number of capped generate calls with no test named
    (everything untargeted) and evaluate the suite once at the end.
    Trial t of both modes uses the same derived seed, so differences
    are down to feedback, not luck.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if test_count < 1:
        raise ValueError("test_count must be at least 1")
    bundle = _single_issue_bundle(test_count)
    test_ids = [t.id for t in bundle.tests]
    outcomes = {SimMode.GUARDRAIL: [], SimMode.PROMPT_ONLY: []}
    for trial in range(trials):
        trial_params = replace(params, seed=trial_seed(seed, trial))
        outcomes[SimMode.GUARDRAIL].append(
            _guardrail_trial(bundle, trial_params, max_iterations)
        )
        outcomes[SimMode.PROMPT_ONLY].append(
            _prompt_only_trial(test_ids, trial_params, max_iterations)
        )
    reports = []
    for mode in (SimMode.GUARDRAIL, SimMode.PROMPT_ONLY):
        rows = outcomes[mode]
        reports.append(
            SimulationReport(
                mode=mode,
                trials=trials,
                mean_iterations=fmean(r[0] for r in rows),
                mean_residual_failures=fmean(r[1] for r in rows),
                stalled_fraction=sum(1 for r in rows if r[2]) / trials,
            )
        )
    return reports[0], reports[1]


def format_simulation(reports: tuple[SimulationReport, SimulationReport]) -> str:
    header = f"{'mode':<12} {'trials':>6} {'mean_iter':>10} {'mean_residual':>14} {'stalled':>8}"
    lines = [header]
    for report in reports:
        lines.append(
            f"{report.mode.value:<12} {report.trials:>6} "
            f"{report.mean_iterations:>10.3f} {report.mean_residual_failures:>14.3f} "
            f"{report.stalled_fraction:>8.3f}"
        )
    return "\n".join(lines) + "\n"
