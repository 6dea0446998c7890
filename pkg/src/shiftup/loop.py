"""Implement/verify loop over one work issue, as an auditable state machine.

States move issue_opened -> plan_drafted -> plan_approved ->
code_generated -> tests_run, and from tests_run either the issue
closes (every constraint test passed), another generation round starts
with the failing outcomes as feedback, or the run stalls at the
iteration cap. Every transition appends an event; the event log is a
sufficient statistic, so ``replay`` rebuilds the exact final run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

from shiftup import ShiftUpError
from shiftup.adapters import (
    AdapterError,
    AgentContract,
    ChangeSet,
    OutcomeStatus,
    PlanContext,
    RunnerContract,
    TestOutcome,
)
from shiftup.artifacts.model import ArtifactBundle, IssueStatus, WorkIssue
from shiftup.artifacts.store import LOGS_DIR, PLANS_DIR, save_issue
from shiftup.gwt import GwtFile, render_gwt

EVENT_LOG_NAME = "loop-events.jsonl"


class LoopError(ShiftUpError):
    """Base for loop engine failures."""


class WrongStateError(LoopError):
    """Operation requested in a state that does not allow it."""

    def __init__(self, operation: str, state: "LoopState"):
        super().__init__(f"cannot {operation} in state {state.value}")
        self.operation = operation
        self.state = state


class DependencyError(LoopError):
    """Issue opened while a dependency phase still has open issues."""

    def __init__(self, issue_id: str, blocking_phases: list[str]):
        super().__init__(
            f"{issue_id} blocked: open issues remain in {', '.join(blocking_phases)}"
        )
        self.blocking_phases = blocking_phases


class AgentFailure(LoopError):
    """Agent adapter failed; the run keeps its previous state."""


class RunnerFailure(LoopError):
    """Runner adapter failed or broke contract; retryable."""


class LoopState(str, Enum):
    ISSUE_OPENED = "issue_opened"
    PLAN_DRAFTED = "plan_drafted"
    PLAN_APPROVED = "plan_approved"
    CODE_GENERATED = "code_generated"
    TESTS_RUN = "tests_run"
    ISSUE_CLOSED = "issue_closed"
    STALLED = "stalled"


TERMINAL_STATES = frozenset({LoopState.ISSUE_CLOSED, LoopState.STALLED})


@dataclass(frozen=True)
class LoopConfig:
    max_iterations: int = 25
    require_plan_approval: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class LoopEvent:
    seq: int
    ts: str
    issue: str
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "ts": self.ts,
            "issue": self.issue,
            "kind": self.kind,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LoopEvent":
        return cls(
            seq=int(data["seq"]),
            ts=str(data["ts"]),
            issue=str(data["issue"]),
            kind=str(data["kind"]),
            payload=dict(data["payload"]),
        )


# Event kinds. agent_error / runner_error leave the state unchanged.
EV_OPENED = "opened"
EV_PLAN_DRAFTED = "plan_drafted"
EV_PLAN_APPROVED = "plan_approved"
EV_AGENT_ERROR = "agent_error"
EV_CODE_GENERATED = "code_generated"
EV_RUNNER_ERROR = "runner_error"
EV_TESTS_RUN = "tests_run"
EV_ISSUE_CLOSED = "issue_closed"
EV_STALLED = "stalled"


@dataclass
class LoopRun:
    """State machine instance for one issue."""

    issue_ref: str
    constraint_ids: tuple[str, ...]
    state: LoopState = LoopState.ISSUE_OPENED
    iteration: int = 0
    passing: set[str] = field(default_factory=set)
    plan: str = ""
    last_outcomes: list[TestOutcome] = field(default_factory=list)
    events: list[LoopEvent] = field(default_factory=list)

    @property
    def failing(self) -> list[TestOutcome]:
        return [o for o in self.last_outcomes if o.status != OutcomeStatus.PASS]

    def to_dict(self) -> dict:
        return {
            "issue": self.issue_ref,
            "state": self.state.value,
            "iteration": self.iteration,
            "constraint_test_ids": list(self.constraint_ids),
            "passing": sorted(self.passing),
            "event_count": len(self.events),
        }


def _default_clock() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class LoopEngine:
    """Drives loop runs against one bundle.

    ``root`` is the bundle directory; when given, events append to
    logs/loop-events.jsonl and plans land under plans/. A rootless
    engine keeps everything in memory (used for simulations).
    """

    def __init__(
        self,
        bundle: ArtifactBundle,
        config: LoopConfig | None = None,
        root: Path | None = None,
        clock: Callable[[], str] | None = None,
    ):
        self.bundle = bundle
        self.config = config or LoopConfig()
        self.root = root
        self.clock = clock or _default_clock

    # -- event plumbing ----------------------------------------------------

    def _emit(self, run: LoopRun, kind: str, payload: dict) -> LoopEvent:
        event = LoopEvent(
            seq=len(run.events) + 1,
            ts=self.clock(),
            issue=run.issue_ref,
            kind=kind,
            payload=payload,
        )
        run.events.append(event)
        if self.root is not None:
            log_dir = self.root / LOGS_DIR
            log_dir.mkdir(parents=True, exist_ok=True)
            with open(log_dir / EVENT_LOG_NAME, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event.to_dict(), sort_keys=True) + "\n")
        return event

    # -- operations --------------------------------------------------------

    def open_issue(self, issue_id: str) -> LoopRun:
        issue = self.bundle.issue_by_id(issue_id)
        if issue.status is IssueStatus.CLOSED:
            raise LoopError(f"{issue_id} is already closed")
        if not issue.constraint_test_ids:
            raise LoopError(f"{issue_id} has no constraint tests")
        blocking = self.blocking_phases(issue)
        if blocking:
            raise DependencyError(issue_id, blocking)
        run = LoopRun(issue_ref=issue_id, constraint_ids=tuple(issue.constraint_test_ids))
        self._emit(
            run,
            EV_OPENED,
            {
                "title": issue.title,
                "phase": issue.phase_ref,
                "constraints": list(run.constraint_ids),
            },
        )
        return run

    def blocking_phases(self, issue: WorkIssue) -> list[str]:
        """Dependency phases of the issue's phase that still have open issues."""
        phase = self.bundle.phase_by_id(issue.phase_ref)
        open_by_phase: set[str] = {
            other.phase_ref
            for other in self.bundle.issues
            if other.status is IssueStatus.OPEN
        }
        return [dep for dep in phase.depends_on if dep in open_by_phase]

    def draft_plan(self, run: LoopRun, agent: AgentContract) -> LoopRun:
        # Re-drafting from plan_drafted discards the previous plan.
        if run.state not in (LoopState.ISSUE_OPENED, LoopState.PLAN_DRAFTED):
            raise WrongStateError("draft_plan", run.state)
        context = self._plan_context(run)
        try:
            plan = agent.draft_plan(context)
        except AdapterError as exc:
            self._emit(run, EV_AGENT_ERROR, {"operation": "draft_plan", "message": str(exc)})
            raise AgentFailure(f"draft_plan failed: {exc}") from exc
        if not plan.strip():
            self._emit(run, EV_AGENT_ERROR, {"operation": "draft_plan", "message": "empty-plan"})
            raise AgentFailure("empty-plan: agent returned a blank plan")
        run.plan = plan
        path = self._write_plan(run, plan)
        run.state = LoopState.PLAN_DRAFTED
        self._emit(
            run,
            EV_PLAN_DRAFTED,
            {"iteration": run.iteration, "plan": plan, "path": path},
        )
        if not self.config.require_plan_approval:
            run.state = LoopState.PLAN_APPROVED
            self._emit(run, EV_PLAN_APPROVED, {"actor": "auto"})
        return run

    def _plan_context(self, run: LoopRun) -> PlanContext:
        issue = self.bundle.issue_by_id(run.issue_ref)
        tests = []
        for tid in run.constraint_ids:
            test = self.bundle.test_by_id(tid)
            tests.append((tid, render_gwt(GwtFile(tests=(test,)))))
        c4_lines = [
            f"{element.level.value}: {element.name} - {element.description}"
            for element in self.bundle.c4.elements
        ]
        adr_lines = tuple(
            f"{adr.id} {adr.title} [{adr.status.value}]: {adr.decision}"
            for adr in self.bundle.adrs
        )
        return PlanContext(
            issue_id=issue.id,
            issue_title=issue.title,
            issue_description=issue.description,
            constraint_tests=tuple(tests),
            architecture="\n".join(c4_lines),
            decisions=adr_lines,
        )

    def _write_plan(self, run: LoopRun, plan: str) -> str:
        relative = f"{PLANS_DIR}/{run.issue_ref}-iter{run.iteration}.md"
        if self.root is not None:
            path = self.root / relative
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(plan if plan.endswith("\n") else plan + "\n", encoding="utf-8")
        return relative

    def approve_plan(self, run: LoopRun, actor: str = "human") -> LoopRun:
        if run.state is not LoopState.PLAN_DRAFTED:
            raise WrongStateError("approve_plan", run.state)
        run.state = LoopState.PLAN_APPROVED
        self._emit(run, EV_PLAN_APPROVED, {"actor": actor})
        return run

    def generate(
        self,
        run: LoopRun,
        agent: AgentContract,
        feedback: list[TestOutcome] | None = None,
    ) -> LoopRun:
        if run.state is LoopState.TESTS_RUN:
            if not run.failing:
                raise WrongStateError("generate (no failures to address)", run.state)
        elif run.state is not LoopState.PLAN_APPROVED:
            raise WrongStateError("generate", run.state)
        if run.iteration >= self.config.max_iterations:
            run.state = LoopState.STALLED
            self._emit(
                run,
                EV_STALLED,
                {
                    "iteration": run.iteration,
                    "failing": sorted(set(run.constraint_ids) - run.passing),
                },
            )
            return run
        try:
            changes = agent.generate(run.plan, feedback)
        except AdapterError as exc:
            self._emit(run, EV_AGENT_ERROR, {"operation": "generate", "message": str(exc)})
            raise AgentFailure(f"generate failed: {exc}") from exc
        run.iteration += 1
        run.state = LoopState.CODE_GENERATED
        self._emit(
            run,
            EV_CODE_GENERATED,
            {
                "iteration": run.iteration,
                "description": changes.description,
                "files": list(changes.files),
                "feedback_count": None if feedback is None else len(feedback),
            },
        )
        return run

    def run_tests(self, run: LoopRun, runner: RunnerContract) -> LoopRun:
        if run.state is not LoopState.CODE_GENERATED:
            raise WrongStateError("run_tests", run.state)
        try:
            outcomes = runner.run(list(run.constraint_ids))
        except AdapterError as exc:
            self._emit(run, EV_RUNNER_ERROR, {"message": str(exc)})
            raise RunnerFailure(f"runner failed: {exc}") from exc
        foreign = sorted({o.test_id for o in outcomes} - set(run.constraint_ids))
        if foreign:
            message = f"foreign-test-id: {', '.join(foreign)}"
            self._emit(run, EV_RUNNER_ERROR, {"message": message})
            raise RunnerFailure(message)
        run.last_outcomes = list(outcomes)
        run.passing = {o.test_id for o in outcomes if o.status is OutcomeStatus.PASS}
        run.state = LoopState.TESTS_RUN
        self._emit(
            run,
            EV_TESTS_RUN,
            {
                "iteration": run.iteration,
                "outcomes": [o.to_dict() for o in outcomes],
                "passed": sorted(run.passing),
                "failed": sorted({o.test_id for o in outcomes} - run.passing),
            },
        )
        return run

    def step(self, run: LoopRun, agent: AgentContract, runner: RunnerContract) -> LoopRun:
        if run.state in TERMINAL_STATES:
            raise WrongStateError("step", run.state)
        if run.state is LoopState.ISSUE_OPENED:
            return self.draft_plan(run, agent)
        if run.state is LoopState.PLAN_DRAFTED:
            return self.approve_plan(run)
        if run.state is LoopState.PLAN_APPROVED:
            return self.generate(run, agent, feedback=None)
        if run.state is LoopState.CODE_GENERATED:
            return self.run_tests(run, runner)
        # tests_run: close when everything passed, otherwise iterate.
        if run.passing == set(run.constraint_ids):
            return self._close(run)
        return self.generate(run, agent, feedback=run.failing)

    def _close(self, run: LoopRun) -> LoopRun:
        issue = self.bundle.issue_by_id(run.issue_ref)
        issue.status = IssueStatus.CLOSED
        if self.root is not None:
            save_issue(issue, self.root)
        run.state = LoopState.ISSUE_CLOSED
        self._emit(run, EV_ISSUE_CLOSED, {"iteration": run.iteration})
        return run

    def run_to_completion(
        self, run: LoopRun, agent: AgentContract, runner: RunnerContract
    ) -> LoopRun:
        while run.state not in TERMINAL_STATES:
            self.step(run, agent, runner)
        return run


# ---------------------------------------------------------------------------
# Event log replay
# ---------------------------------------------------------------------------


def load_events(path: Path) -> list[LoopEvent]:
    """Parse a loop event log (one JSON object per line)."""
    events = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                events.append(LoopEvent.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise LoopError(f"{path}:{n}: bad event record: {exc}") from exc
    return events


def replay(events: Iterable[LoopEvent]) -> LoopRun:
    """Rebuild a run from its event sequence.

    The log carries everything the run holds, so the result compares
    equal to the live run it was recorded from.
    """
    run: LoopRun | None = None
    for event in events:
        if event.kind == EV_OPENED:
            run = LoopRun(
                issue_ref=event.issue,
                constraint_ids=tuple(event.payload["constraints"]),
            )
            run.events.append(event)
            continue
        if run is None:
            raise LoopError(f"event log does not start with an {EV_OPENED!r} event")
        run.events.append(event)
        if event.kind == EV_PLAN_DRAFTED:
            run.plan = event.payload["plan"]
            run.state = LoopState.PLAN_DRAFTED
        elif event.kind == EV_PLAN_APPROVED:
            run.state = LoopState.PLAN_APPROVED
        elif event.kind == EV_CODE_GENERATED:
            run.iteration = event.payload["iteration"]
            run.state = LoopState.CODE_GENERATED
        elif event.kind == EV_TESTS_RUN:
            run.last_outcomes = [TestOutcome.from_dict(o) for o in event.payload["outcomes"]]
            run.passing = set(event.payload["passed"])
            run.state = LoopState.TESTS_RUN
        elif event.kind == EV_ISSUE_CLOSED:
            run.state = LoopState.ISSUE_CLOSED
        elif event.kind == EV_STALLED:
            run.state = LoopState.STALLED
        elif event.kind in (EV_AGENT_ERROR, EV_RUNNER_ERROR):
            pass
        else:
            raise LoopError(f"unknown event kind: {event.kind}")
    if run is None:
        raise LoopError("empty event log")
    return run


def replay_log(path: Path) -> dict[str, LoopRun]:
    """Latest run per issue from a shared event log file."""
    per_issue: dict[str, list[LoopEvent]] = {}
    for event in load_events(path):
        if event.kind == EV_OPENED:
            per_issue[event.issue] = []
        per_issue.setdefault(event.issue, []).append(event)
    return {issue: replay(events) for issue, events in per_issue.items()}
