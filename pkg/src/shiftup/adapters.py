"""Agent and test-runner contracts, the seeded mock pair, and command bridges.

The loop engine only ever talks to these two contracts, so anything
that can draft a plan / produce changes (agent) or execute named
acceptance tests (runner) can be plugged in. Two implementations ship:

- A deterministic seeded mock pair for offline experiments. The mock
  models code generation as a hidden per-test correctness map advanced
  by a documented pseudo-random scheme (see ``advance_correctness``).
- Command bridges that spawn an external process per call, exchanging
  JSON over files / standard streams, for attaching real tooling.
"""

from __future__ import annotations

import hashlib
import json
import random
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Protocol, Sequence

from shiftup import ShiftUpError, ids


class AdapterError(ShiftUpError):
    """Raised when an adapter cannot produce a contractual result."""


class OutcomeStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


@dataclass(frozen=True)
class TestOutcome:
    test_id: str
    status: OutcomeStatus
    message: str = ""
    duration_ms: int = 0

    def __post_init__(self):
        if self.duration_ms < 0:
            raise ValueError("duration_ms must be non-negative")

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "status": self.status.value,
            "message": self.message,
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TestOutcome":
        return cls(
            test_id=data["test_id"],
            status=OutcomeStatus(data["status"]),
            message=data.get("message", ""),
            duration_ms=int(data.get("duration_ms", 0)),
        )


@dataclass(frozen=True)
class PlanContext:
    """Everything an agent gets to see when drafting a plan.

    Assembled by the loop engine; agents never read the bundle itself.
    """

    issue_id: str
    issue_title: str
    issue_description: str
    constraint_tests: tuple[tuple[str, str], ...]  # (test id, rendered gwt text)
    architecture: str = ""
    decisions: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "issue": {
                "id": self.issue_id,
                "title": self.issue_title,
                "description": self.issue_description,
            },
            "constraint_tests": [
                {"test_id": tid, "text": text} for tid, text in self.constraint_tests
            ],
            "architecture": self.architecture,
            "decisions": list(self.decisions),
        }


@dataclass(frozen=True)
class ChangeSet:
    """Free-form description of one generation step's output."""

    description: str
    files: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"description": self.description, "files": list(self.files)}


class AgentContract(Protocol):
    def draft_plan(self, context: PlanContext) -> str: ...

    def generate(self, plan: str, feedback: list[TestOutcome] | None) -> ChangeSet: ...


class RunnerContract(Protocol):
    def run(self, test_ids: Sequence[str]) -> list[TestOutcome]: ...


# ---------------------------------------------------------------------------
# Seeded mock pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MockAgentParams:
    seed: int
    targeted_success_p: float = 0.5
    untargeted_success_p: float = 0.1
    regression_rate: float = 0.05

    def __post_init__(self):
        for name in ("targeted_success_p", "untargeted_success_p", "regression_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.untargeted_success_p > self.targeted_success_p:
            raise ValueError("untargeted_success_p must not exceed targeted_success_p")


def call_stream(seed: int, call_index: int) -> random.Random:
    """Pseudo-random stream for one generate call.

    The scheme is fixed so golden transcripts stay stable: the stream
    for call ``k`` is a Mersenne Twister seeded with the first 8 bytes
    of ``sha256("<seed>:<k>")``. Streams are independent per call index
    and identical across platforms.
    """
    digest = hashlib.sha256(f"{seed}:{call_index}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def advance_correctness(
    state: dict[str, bool],
    params: MockAgentParams,
    call_index: int,
    targeted: set[str],
) -> dict[str, bool]:
    """One generate call over the hidden correctness map.

    Walks tests in numeric-id order drawing exactly one uniform each,
    so two configurations sharing (seed, call_index) consume identical
    randomness regardless of which tests currently pass:

    - failing and targeted:   flips to correct when u < targeted_success_p
    - failing and untargeted: flips to correct when u < untargeted_success_p
    - passing:                regresses when u < regression_rate
    """
    rng = call_stream(params.seed, call_index)
    updated: dict[str, bool] = {}
    for test_id in sorted(state, key=ids.sort_key):
        u = rng.random()
        if state[test_id]:
            updated[test_id] = u >= params.regression_rate
        elif test_id in targeted:
            updated[test_id] = u < params.targeted_success_p
        else:
            updated[test_id] = u < params.untargeted_success_p
    return updated


def evaluate_correctness(state: dict[str, bool], test_ids: Sequence[str]) -> list[TestOutcome]:
    """Outcomes for the requested ids against a correctness map."""
    outcomes = []
    for test_id in test_ids:
        if test_id not in state:
            raise AdapterError(f"unknown test id: {test_id}")
        correct = state[test_id]
        outcomes.append(
            TestOutcome(
                test_id=test_id,
                status=OutcomeStatus.PASS if correct else OutcomeStatus.FAIL,
                message="" if correct else "mock failure",
            )
        )
    return outcomes


class MockAgent:
    """Deterministic simulated agent.

    Drafting a plan records one subtask per constraint test and marks
    every test as initially failing. A generate call with feedback
    targets exactly the failing tests named there; a call without
    feedback targets every test in the plan (the plan names the full
    constraint set, so the first implementation pass works toward all
    of them). Identical (params, feedback sequence) give bit-identical
    trajectories.
    """

    def __init__(self, params: MockAgentParams):
        self.params = params
        self.correctness: dict[str, bool] = {}
        self.plan_test_ids: list[str] = []
        self.calls = 0

    def draft_plan(self, context: PlanContext) -> str:
        self.plan_test_ids = [tid for tid, _ in context.constraint_tests]
        self.correctness = {tid: False for tid in self.plan_test_ids}
        self.calls = 0
        lines = [f"Plan for {context.issue_id}: {context.issue_title}", ""]
        for n, (tid, _) in enumerate(context.constraint_tests, start=1):
            lines.append(f"{n}. Implement behaviour exercised by {tid}")
        return "\n".join(lines) + "\n"

    def generate(self, plan: str, feedback: list[TestOutcome] | None) -> ChangeSet:
        self.calls += 1
        if feedback is None:
            targeted = set(self.plan_test_ids)
        else:
            targeted = {o.test_id for o in feedback if o.status != OutcomeStatus.PASS}
        before = dict(self.correctness)
        self.correctness = advance_correctness(
            self.correctness, self.params, self.calls, targeted
        )
        flipped = sorted(
            (t for t in self.correctness if self.correctness[t] != before.get(t, False)),
            key=ids.sort_key,
        )
        return ChangeSet(
            description=(
                f"mock generation call {self.calls}: targeted {len(targeted)} tests, "
                f"changed {len(flipped)} ({', '.join(flipped) or 'none'})"
            ),
            files=tuple(f"src/generated/{tid}.txt" for tid in flipped),
        )


class MockRunner:
    """Runner facet over a mock agent's hidden correctness map."""

    def __init__(self, agent: MockAgent):
        self._agent = agent

    def run(self, test_ids: Sequence[str]) -> list[TestOutcome]:
        return evaluate_correctness(self._agent.correctness, test_ids)


# ---------------------------------------------------------------------------
# Command bridges
# ---------------------------------------------------------------------------

_RESULT_STATUSES = {s.value for s in OutcomeStatus}


class CommandRunner:
    """Spawns an external command to execute acceptance tests.

    The command template must contain ``{ids}`` (comma-separated test
    ids) and ``{out}`` (path the command writes its JSON result file
    to): ``{"results": [{"test_id", "status", "message", "duration_ms"}]}``.
    A nonzero exit with a result file is fine (test failures); a
    nonzero exit without one is an error.
    """

    def __init__(self, command_template: str, workdir: Path | None = None):
        if "{ids}" not in command_template or "{out}" not in command_template:
            raise AdapterError("runner command template needs {ids} and {out} placeholders")
        self.command_template = command_template
        self.workdir = workdir

    def run(self, test_ids: Sequence[str]) -> list[TestOutcome]:
        with tempfile.TemporaryDirectory(prefix="shiftup-runner-") as tmp:
            out_path = Path(tmp) / "results.json"
            command = self.command_template.format(ids=",".join(test_ids), out=str(out_path))
            try:
                proc = subprocess.run(
                    shlex.split(command),
                    cwd=self.workdir,
                    capture_output=True,
                    text=True,
                )
            except OSError as exc:
                raise AdapterError(f"runner spawn failed: {exc}") from exc
            if not out_path.is_file():
                raise AdapterError(
                    f"runner exited {proc.returncode} without a result file"
                    + (f": {proc.stderr.strip()}" if proc.stderr.strip() else "")
                )
            raw = out_path.read_text(encoding="utf-8")
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise AdapterError(f"malformed result file at byte {exc.pos}: {exc.msg}") from exc
        return _parse_results(data, test_ids)


def _parse_results(data: object, test_ids: Sequence[str]) -> list[TestOutcome]:
    if not isinstance(data, dict) or not isinstance(data.get("results"), list):
        raise AdapterError("result file must be an object with a 'results' list")
    outcomes: dict[str, TestOutcome] = {}
    for item in data["results"]:
        if not isinstance(item, dict):
            raise AdapterError("result entries must be objects")
        test_id = item.get("test_id")
        status = item.get("status")
        if not isinstance(test_id, str) or status not in _RESULT_STATUSES:
            raise AdapterError(f"result entry needs test_id and a pass|fail|error status: {item!r}")
        if test_id in outcomes:
            raise AdapterError(f"duplicate result for {test_id}")
        message = item.get("message", "")
        duration = item.get("duration_ms", 0)
        if not isinstance(message, str) or not isinstance(duration, int) or duration < 0:
            raise AdapterError(f"bad message/duration_ms in result for {test_id}")
        outcomes[test_id] = TestOutcome(
            test_id=test_id, status=OutcomeStatus(status), message=message, duration_ms=duration
        )
    requested = set(test_ids)
    missing = sorted(requested - set(outcomes), key=ids.sort_key)
    if missing:
        raise AdapterError(f"runner omitted results for: {', '.join(missing)}")
    extra = sorted(set(outcomes) - requested, key=ids.sort_key)
    if extra:
        raise AdapterError(f"runner reported unrequested ids: {', '.join(extra)}")
    return [outcomes[tid] for tid in test_ids]


class CommandAgent:
    """Bridges draft/generate calls to an external command.

    One JSON request object goes to the child's stdin, one JSON reply
    is read from its stdout. Requests carry ``kind`` ("plan" or
    "generate") plus the context; replies carry ``plan`` or ``changes``.
    No retries: failure policy belongs to the caller.
    """

    def __init__(self, command: str, timeout_s: float = 60.0):
        self.command = command
        self.timeout_s = timeout_s
        self._context: PlanContext | None = None

    def _exchange(self, request: dict) -> dict:
        started = time.monotonic()
        try:
            proc = subprocess.run(
                shlex.split(self.command),
                input=json.dumps(request),
                capture_output=True,
                text=True,
                timeout=self.timeout_s,
            )
        except subprocess.TimeoutExpired as exc:
            elapsed = time.monotonic() - started
            raise AdapterError(f"agent command timed out after {elapsed:.1f}s") from exc
        except OSError as exc:
            raise AdapterError(f"agent spawn failed: {exc}") from exc
        if proc.returncode != 0:
            raise AdapterError(
                f"agent command exited {proc.returncode}"
                + (f": {proc.stderr.strip()}" if proc.stderr.strip() else "")
            )
        try:
            reply = json.loads(proc.stdout)
        except json.JSONDecodeError as exc:
            raise AdapterError(f"malformed agent reply at byte {exc.pos}: {exc.msg}") from exc
        if not isinstance(reply, dict):
            raise AdapterError("agent reply must be a JSON object")
        return reply

    def draft_plan(self, context: PlanContext) -> str:
        self._context = context
        reply = self._exchange({"kind": "plan", **context.to_dict()})
        plan = reply.get("plan")
        if not isinstance(plan, str):
            raise AdapterError("agent reply missing string field 'plan'")
        return plan

    def generate(self, plan: str, feedback: list[TestOutcome] | None) -> ChangeSet:
        request: dict = {"kind": "generate", "plan": plan}
        if self._context is not None:
            request["issue"] = self._context.to_dict()["issue"]
        if feedback is not None:
            request["feedback"] = [o.to_dict() for o in feedback]
        reply = self._exchange(request)
        changes = reply.get("changes")
        if not isinstance(changes, dict) or not isinstance(changes.get("description"), str):
            raise AdapterError("agent reply missing 'changes' with a string 'description'")
        files = changes.get("files", [])
        if not isinstance(files, list) or not all(isinstance(f, str) for f in files):
            raise AdapterError("'changes.files' must be a list of strings")
        return ChangeSet(description=changes["description"], files=tuple(files))
