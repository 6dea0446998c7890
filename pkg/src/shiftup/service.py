"""JSON HTTP service over one artifact bundle.

Exposes the bundle, trace graph, loop, and prompt reports to the
cockpit (and anything else speaking HTTP). The service applies the
same engine operations as the CLI; mutating commands are serialized
per issue in arrival order, and the event feed supports long-polling
with ``?after=<seq>`` so clients can render a live loop without
websockets. Errors use {error, detail} bodies with 404 for unknown
issues, 409 for illegal transitions, 400 for malformed requests.
"""

from __future__ import annotations

import asyncio
import json
import time
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from shiftup.adapters import (
    AgentContract,
    CommandAgent,
    CommandRunner,
    MockAgent,
    MockAgentParams,
    MockRunner,
    RunnerContract,
)
from shiftup.artifacts.store import LOGS_DIR, load_bundle
from shiftup.config import ProjectConfig, load_config
from shiftup import ids
from shiftup.graph import (
    PhaseCycleError,
    build_graph,
    coverage_report,
    impact_of,
    phase_order,
    to_json_dict,
)
from shiftup.loop import (
    DependencyError,
    LoopConfig,
    LoopEngine,
    LoopError,
    LoopRun,
    TERMINAL_STATES,
    WrongStateError,
)
from shiftup.metrics import (
    MetricsError,
    PROMPT_LOG_NAME,
    Paradigm,
    distribution_report,
)

LONG_POLL_MAX_S = 30.0

_OPEN_BODY_KEYS = {"agent", "seed", "max_iterations"}


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def find_static_dir(explicit: str | None = None) -> Path | None:
    """Cockpit asset directory: the given path, or frontend/dist nearby."""
    if explicit:
        path = Path(explicit)
        return path if path.is_dir() else None
    for candidate in (Path("frontend/dist"), Path(__file__).resolve().parents[2] / "frontend/dist"):
        if candidate.is_dir():
            return candidate
    return None


class _IssueSession:
    """Active loop run plus the adapters and cap bound to it."""

    def __init__(
        self,
        run: LoopRun,
        agent: AgentContract,
        runner: RunnerContract,
        max_iterations: int | None = None,
    ):
        self.run = run
        self.agent = agent
        self.runner = runner
        self.max_iterations = max_iterations


def create_app(root: Path, static_dir: Path | None = None) -> FastAPI:
    bundle = load_bundle(root)
    config = load_config(root)
    app = FastAPI(title="shiftup", docs_url=None, redoc_url=None)

    sessions: dict[str, _IssueSession] = {}
    locks: dict[str, asyncio.Lock] = {}

    def lock_for(issue_id: str) -> asyncio.Lock:
        return locks.setdefault(issue_id, asyncio.Lock())

    def engine_for(max_iterations: int | None = None) -> LoopEngine:
        loop_config = LoopConfig(
            max_iterations=max_iterations or config.max_iterations,
            require_plan_approval=config.require_plan_approval,
        )
        return LoopEngine(bundle, loop_config, root=root)

    def build_adapters(body: dict) -> tuple[AgentContract, RunnerContract]:
        choice = body.get("agent", config.agent_adapter)
        if choice == "mock":
            params = dict(config.agent_params)
            if "seed" in body:
                params["seed"] = body["seed"]
            params.setdefault("seed", 0)
            agent = MockAgent(MockAgentParams(**params))
            return agent, MockRunner(agent)
        if choice == "command":
            if not config.agent_command or not config.runner_command:
                raise ValueError("bundle manifest configures no agent/runner commands")
            return (
                CommandAgent(config.agent_command, timeout_s=config.agent_timeout_s),
                CommandRunner(config.runner_command),
            )
        raise ValueError(f"unknown agent adapter: {choice!r}")

    async def read_body(request: Request) -> dict:
        raw = await request.body()
        if not raw:
            return {}
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValueError(f"body is not valid JSON: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ValueError("body must be a JSON object")
        return data

    # -- read endpoints ------------------------------------------------------

    @app.get("/api/bundle/summary")
    async def bundle_summary():
        return {
            "name": bundle.manifest.get("name", root.name),
            "counts": {
                "requirements": len(bundle.requirements),
                "stories": len(bundle.stories),
                "tests": len(bundle.tests),
                "adrs": len(bundle.adrs),
                "phases": len(bundle.phases),
                "issues": len(bundle.issues),
            },
            "issues": {
                "open": sum(1 for i in bundle.issues if i.status.value == "open"),
                "closed": sum(1 for i in bundle.issues if i.status.value == "closed"),
            },
        }

    @app.get("/api/graph")
    async def graph_view():
        return to_json_dict(build_graph(bundle))

    @app.get("/api/graph/impact/{node_id}")
    async def graph_impact(node_id: str):
        graph = build_graph(bundle)
        try:
            impacted = impact_of(graph, node_id)
        except KeyError:
            return _error(404, "unknown-node", f"no node {node_id}")
        return {"node": node_id, "impacted": sorted(impacted, key=ids.sort_key)}

    @app.get("/api/phases/order")
    async def phases_order():
        try:
            order = phase_order(build_graph(bundle))
        except PhaseCycleError as exc:
            return _error(409, "phase-cycle", ", ".join(sorted(exc.phase_ids)))
        phases = []
        for phase_id in order:
            phase = bundle.phase_by_id(phase_id)
            phases.append(
                {
                    "id": phase.id,
                    "name": phase.name,
                    "goal": phase.goal,
                    "depends_on": list(phase.depends_on),
                    "test_ids": list(phase.test_ids),
                }
            )
        return {"phases": phases}

    @app.get("/api/coverage")
    async def coverage_view():
        return coverage_report(build_graph(bundle)).to_dict()

    @app.get("/api/issues")
    async def issues_view():
        engine = engine_for()
        items = []
        for issue in bundle.issues:
            session = sessions.get(issue.id)
            items.append(
                {
                    "id": issue.id,
                    "title": issue.title,
                    "phase": issue.phase_ref,
                    "status": issue.status.value,
                    "constraint_test_ids": list(issue.constraint_test_ids),
                    "blocked": bool(engine.blocking_phases(issue)),
                    "run": session.run.to_dict() if session else None,
                }
            )
        return {"issues": items}

    @app.get("/api/loop/{issue_id}/events")
    async def issue_events(issue_id: str, after: int = 0, timeout: float = 10.0):
        try:
            bundle.issue_by_id(issue_id)
        except KeyError:
            return _error(404, "unknown-issue", f"no issue {issue_id}")
        deadline = time.monotonic() + max(0.0, min(timeout, LONG_POLL_MAX_S))
        while True:
            session = sessions.get(issue_id)
            if session is not None:
                fresh = [e.to_dict() for e in session.run.events if e.seq > after]
                if fresh:
                    return {"issue": issue_id, "events": fresh}
            if time.monotonic() >= deadline:
                return {"issue": issue_id, "events": []}
            await asyncio.sleep(0.1)

    @app.get("/api/reports/prompts")
    async def prompts_view():
        log_path = root / LOGS_DIR / PROMPT_LOG_NAME
        if not log_path.is_file():
            return _error(404, "not-found", f"no prompt log at {log_path}")
        try:
            reports = [
                distribution_report(log_path, paradigm)
                for paradigm in (Paradigm.SHIFT_UP, Paradigm.STRUCTURED_VIBE)
            ]
        except MetricsError as exc:
            return _error(400, "uncategorized-prompts", str(exc))
        return {"reports": [r.to_dict() for r in reports]}

    # -- loop commands -------------------------------------------------------

    @app.post("/api/loop/{issue_id}/open")
    async def loop_open(issue_id: str, request: Request):
        try:
            body = await read_body(request)
            unknown = set(body) - _OPEN_BODY_KEYS
            if unknown:
                raise ValueError(f"unknown body keys: {', '.join(sorted(unknown))}")
        except ValueError as exc:
            return _error(400, "malformed-body", str(exc))
        async with lock_for(issue_id):
            try:
                bundle.issue_by_id(issue_id)
            except KeyError:
                return _error(404, "unknown-issue", f"no issue {issue_id}")
            session = sessions.get(issue_id)
            if session is not None and session.run.state not in TERMINAL_STATES:
                return _error(409, "already-active", f"{issue_id} already has a live run")
            try:
                agent, runner = build_adapters(body)
            except ValueError as exc:
                return _error(400, "malformed-body", str(exc))
            engine = engine_for(body.get("max_iterations"))
            try:
                run = await asyncio.to_thread(engine.open_issue, issue_id)
            except DependencyError as exc:
                return _error(409, "dependency-not-satisfied", str(exc))
            except LoopError as exc:
                return _error(409, "loop-error", str(exc))
            sessions[issue_id] = _IssueSession(
                run, agent, runner, body.get("max_iterations")
            )
            return run.to_dict()

    async def _with_session(issue_id: str, operation) -> JSONResponse | dict:
        async with lock_for(issue_id):
            try:
                bundle.issue_by_id(issue_id)
            except KeyError:
                return _error(404, "unknown-issue", f"no issue {issue_id}")
            session = sessions.get(issue_id)
            if session is None:
                return _error(409, "not-open", f"{issue_id} has no live run; POST open first")
            try:
                await asyncio.to_thread(operation, session)
            except WrongStateError as exc:
                return _error(409, "wrong-state", str(exc))
            except LoopError as exc:
                return _error(409, "loop-error", str(exc))
            return session.run.to_dict()

    @app.post("/api/loop/{issue_id}/plan")
    async def loop_plan(issue_id: str):
        return await _with_session(
            issue_id, lambda s: engine_for(s.max_iterations).draft_plan(s.run, s.agent)
        )

    @app.post("/api/loop/{issue_id}/approve")
    async def loop_approve(issue_id: str):
        return await _with_session(
            issue_id,
            lambda s: engine_for(s.max_iterations).approve_plan(s.run, actor="human"),
        )

    @app.post("/api/loop/{issue_id}/step")
    async def loop_step(issue_id: str):
        return await _with_session(
            issue_id, lambda s: engine_for(s.max_iterations).step(s.run, s.agent, s.runner)
        )

    @app.post("/api/loop/{issue_id}/run-to-completion")
    async def loop_run_to_completion(issue_id: str):
        return await _with_session(
            issue_id,
            lambda s: engine_for(s.max_iterations).run_to_completion(s.run, s.agent, s.runner),
        )

    # -- cockpit assets ------------------------------------------------------

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="cockpit")
    else:

        @app.get("/")
        async def index():
            return {
                "service": "shiftup",
                "endpoints": [
                    "/api/bundle/summary",
                    "/api/graph",
                    "/api/phases/order",
                    "/api/coverage",
                    "/api/issues",
                    "/api/loop/{issue}/events",
                    "/api/reports/prompts",
                ],
            }

    return app
