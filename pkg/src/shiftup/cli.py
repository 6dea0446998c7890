"""Command-line entry point.

Grammar: shiftup <lint|order|coverage|graph|loop run|simulate|prompts
report|serve> [flags]. Exit codes follow one contract everywhere:
0 success, 1 domain failure (violations, cycles, stalled loops,
uncategorized prompts), 2 environment failure (missing files, bad
invocations). The bundle root comes from --root, then SHIFTUP_ROOT,
then the working directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from shiftup import __version__
from shiftup.adapters import (
    CommandAgent,
    CommandRunner,
    MockAgent,
    MockAgentParams,
    MockRunner,
)
from shiftup.artifacts.store import BundleLoadError, LOGS_DIR, load_bundle
from shiftup.config import ProjectConfig, load_config
from shiftup.graph import (
    PhaseCycleError,
    build_graph,
    coverage_report,
    impact_of,
    phase_order,
    to_dot,
    to_json_dict,
)
from shiftup.loop import DependencyError, LoopConfig, LoopEngine, LoopError, LoopState
from shiftup.metrics import (
    MetricsError,
    Paradigm,
    PROMPT_LOG_NAME,
    distribution_report,
    format_distribution,
    format_simulation,
    simulate_paradigms,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_ENV = 2


def resolve_root(value: str | None) -> Path:
    if value:
        return Path(value)
    env = os.environ.get("SHIFTUP_ROOT")
    if env:
        return Path(env)
    return Path.cwd()


def _violation_dict(violation) -> dict:
    return {
        "artifact_id": violation.artifact_id,
        "rule": violation.rule,
        "message": violation.message,
        "file": violation.file,
        "line": violation.line,
    }


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _load_or_exit(root: Path):
    """Bundle or an exit code: 2 when the root is unusable, 1 on violations."""
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return None, EXIT_ENV
    try:
        return load_bundle(root), None
    except BundleLoadError as exc:
        if any(v.rule == "missing-manifest" for v in exc.violations):
            print(f"error: no bundle manifest under {root}", file=sys.stderr)
            return None, EXIT_ENV
        for violation in exc.violations:
            print(str(violation), file=sys.stderr)
        return None, EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_ENV


def cmd_lint(args) -> int:
    root = resolve_root(args.root)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return EXIT_ENV
    try:
        load_bundle(root)
    except BundleLoadError as exc:
        if any(v.rule == "missing-manifest" for v in exc.violations):
            print(f"error: no bundle manifest under {root}", file=sys.stderr)
            return EXIT_ENV
        violations = sorted(exc.violations, key=lambda v: (v.file or "", v.artifact_id))
        _emit(
            args,
            {"ok": False, "violations": [_violation_dict(v) for v in violations]},
            "\n".join(str(v) for v in violations) + "\n",
        )
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV
    _emit(args, {"ok": True, "violations": []}, "ok: bundle is valid\n")
    return EXIT_OK


def cmd_order(args) -> int:
    bundle, code = _load_or_exit(resolve_root(args.root))
    if bundle is None:
        return code
    try:
        order = phase_order(build_graph(bundle))
    except PhaseCycleError as exc:
        members = sorted(exc.phase_ids)
        _emit(
            args,
            {"error": "phase-cycle", "members": members},
            "phase dependency cycle: " + ", ".join(members) + "\n",
        )
        return EXIT_DOMAIN
    _emit(args, {"phases": list(order)}, "\n".join(order) + "\n")
    return EXIT_OK


def cmd_coverage(args) -> int:
    bundle, code = _load_or_exit(resolve_root(args.root))
    if bundle is None:
        return code
    report = coverage_report(build_graph(bundle))
    text_lines = [
        f"requirement coverage     {report.requirement_coverage:.3f}"
        + (f"  uncovered: {', '.join(report.uncovered_requirements)}" if report.uncovered_requirements else ""),
        f"story coverage           {report.story_coverage:.3f}"
        + (f"  uncovered: {', '.join(report.uncovered_stories)}" if report.uncovered_stories else ""),
        f"test constraint coverage {report.test_constraint_coverage:.3f}"
        + (f"  unconstrained: {', '.join(report.unconstrained_tests)}" if report.unconstrained_tests else ""),
        f"test phase coverage      {report.test_phase_coverage:.3f}"
        + (f"  unphased: {', '.join(report.unphased_tests)}" if report.unphased_tests else ""),
    ]
    _emit(args, report.to_dict(), "\n".join(text_lines) + "\n")
    return EXIT_OK


def cmd_graph(args) -> int:
    bundle, code = _load_or_exit(resolve_root(args.root))
    if bundle is None:
        return code
    graph = build_graph(bundle)
    if args.impact:
        try:
            affected = impact_of(graph, args.impact)
        except KeyError:
            print(f"error: unknown node {args.impact}", file=sys.stderr)
            return EXIT_DOMAIN
        _emit(args, {"impact_of": args.impact, "affected": list(affected)},
              "\n".join(affected) + "\n" if affected else "(no dependents)\n")
        return EXIT_OK
    if args.format == "json":
        print(json.dumps(to_json_dict(graph), indent=2, sort_keys=True))
    else:
        print(to_dot(graph), end="")
    return EXIT_OK


def _agent_pair(config: ProjectConfig, choice: str, seed: int | None):
    """Build the (agent, runner) pair for a loop run."""
    if choice == "mock":
        params = dict(config.agent_params)
        if seed is not None:
            params["seed"] = seed
        params.setdefault("seed", 0)
        agent = MockAgent(MockAgentParams(**params))
        return agent, MockRunner(agent)
    if not config.agent_command or not config.runner_command:
        raise ValueError(
            "command adapter requires agent_command and runner_command in shiftup.json"
        )
    agent = CommandAgent(config.agent_command, timeout_s=config.agent_timeout_s)
    return agent, CommandRunner(config.runner_command)


def cmd_loop_run(args) -> int:
    root = resolve_root(args.root)
    bundle, code = _load_or_exit(root)
    if bundle is None:
        return code
    config = load_config(root)
    try:
        agent, runner = _agent_pair(config, args.agent or config.agent_adapter, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV
    loop_config = LoopConfig(
        max_iterations=args.max_iter or config.max_iterations,
        require_plan_approval=config.require_plan_approval,
    )
    engine = LoopEngine(bundle, loop_config, root=root)
    try:
        run = engine.open_issue(args.issue)
        engine.run_to_completion(run, agent, runner)
    except KeyError:
        print(f"error: unknown issue {args.issue}", file=sys.stderr)
        return EXIT_DOMAIN
    except DependencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LoopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    closed = run.state is LoopState.ISSUE_CLOSED
    _emit(
        args,
        run.to_dict(),
        f"{run.issue_ref}: {run.state.value} after {run.iteration} iteration(s), "
        f"{len(run.passing)}/{len(run.constraint_ids)} tests passing\n",
    )
    return EXIT_OK if closed else EXIT_DOMAIN


def cmd_simulate(args) -> int:
    try:
        params = MockAgentParams(
            seed=0,
            targeted_success_p=args.targeted_p,
            untargeted_success_p=args.untargeted_p,
            regression_rate=args.regression,
        )
        reports = simulate_paradigms(
            params,
            test_count=args.tests,
            trials=args.trials,
            seed=args.seed,
            max_iterations=args.max_iter,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV
    if args.mode != "both":
        reports = tuple(r for r in reports if r.mode.value == args.mode)
    _emit(
        args,
        {"reports": [r.to_dict() for r in reports]},
        format_simulation(tuple(reports)) if len(reports) == 2 else (
            json.dumps(reports[0].to_dict(), indent=2, sort_keys=True) + "\n"
        ),
    )
    return EXIT_OK


def cmd_prompts_report(args) -> int:
    root = resolve_root(args.root)
    log_path = Path(args.log) if args.log else root / LOGS_DIR / PROMPT_LOG_NAME
    if not log_path.is_file():
        print(f"error: no prompt log at {log_path}", file=sys.stderr)
        return EXIT_ENV
    paradigms = (
        [Paradigm(args.paradigm)]
        if args.paradigm != "both"
        else [Paradigm.SHIFT_UP, Paradigm.STRUCTURED_VIBE]
    )
    reports = []
    for paradigm in paradigms:
        try:
            reports.append(distribution_report(log_path, paradigm))
        except MetricsError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
    _emit(
        args,
        {"reports": [r.to_dict() for r in reports]},
        "\n".join(format_distribution(r) for r in reports),
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    root = resolve_root(args.root)
    bundle, code = _load_or_exit(root)
    if bundle is None:
        return code
    config = load_config(root)
    try:
        import uvicorn

        from shiftup.service import create_app, find_static_dir
    except ImportError as exc:
        print(f"error: service dependencies unavailable: {exc}", file=sys.stderr)
        return EXIT_ENV
    port = args.port or config.port
    app = create_app(root, static_dir=find_static_dir(args.static))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftup",
        description="Validate guardrail artifact bundles and drive the implement/verify loop.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--root", help="bundle directory (default: $SHIFTUP_ROOT or cwd)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lint", parents=[common], help="validate the artifact bundle")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("order", parents=[common], help="print phases in dependency order")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("coverage", parents=[common], help="traceability coverage report")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("graph", parents=[common], help="trace graph as DOT or JSON")
    p.add_argument("--impact", metavar="ID", help="list artifacts affected by changing ID")
    p.set_defaults(func=cmd_graph)

    loop = sub.add_parser("loop", help="implement/verify loop commands")
    loop_sub = loop.add_subparsers(dest="loop_command", required=True)
    p = loop_sub.add_parser("run", parents=[common], help="run one issue to completion")
    p.add_argument("issue", help="issue id, e.g. ISS-3")
    p.add_argument("--agent", choices=("mock", "command"))
    p.add_argument("--seed", type=int, help="mock agent seed")
    p.add_argument("--max-iter", type=int, help="iteration cap override")
    p.set_defaults(func=cmd_loop_run)

    p = sub.add_parser("simulate", parents=[common], help="guardrail vs prompt-only contrast")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--mode", choices=("both", "guardrail", "prompt_only"), default="both")
    p.add_argument("--tests", type=int, default=12, help="constraint tests per trial")
    p.add_argument("--max-iter", type=int, default=25)
    p.add_argument("--targeted-p", type=float, default=0.5)
    p.add_argument("--untargeted-p", type=float, default=0.1)
    p.add_argument("--regression", type=float, default=0.05)
    p.set_defaults(func=cmd_simulate)

    prompts = sub.add_parser("prompts", help="prompt log reports")
    prompts_sub = prompts.add_subparsers(dest="prompts_command", required=True)
    p = prompts_sub.add_parser("report", parents=[common], help="category distribution")
    p.add_argument("--log", help="prompt log path (default: <root>/logs/prompts.jsonl)")
    p.add_argument(
        "--paradigm", choices=("both", "shift_up", "structured_vibe"), default="both"
    )
    p.set_defaults(func=cmd_prompts_report)

    p = sub.add_parser("serve", parents=[common], help="serve the HTTP API and cockpit")
    p.add_argument("--port", type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", help="cockpit asset directory (default: autodetect)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
