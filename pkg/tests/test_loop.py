"""Loop engine: transitions, events, failure policy, replay."""

import itertools
import json

import pytest

from shiftup.adapters import (
    AdapterError,
    ChangeSet,
    MockAgent,
    MockAgentParams,
    MockRunner,
    OutcomeStatus,
    TestOutcome as Outcome,
)
from shiftup.artifacts.model import IssueStatus
from shiftup.loop import (
    EVENT_LOG_NAME,
    AgentFailure,
    DependencyError,
    LoopConfig,
    LoopEngine,
    LoopError,
    LoopEvent,
    LoopState,
    RunnerFailure,
    WrongStateError,
    load_events,
    replay,
    replay_log,
)

from builders import make_bundle, single_issue_bundle


def counter_clock():
    counter = itertools.count(1)
    return lambda: f"ts-{next(counter):06d}"


def sure_fix_params(seed: int = 3) -> MockAgentParams:
    return MockAgentParams(
        seed=seed, targeted_success_p=1.0, untargeted_success_p=0.0, regression_rate=0.0
    )


def never_fix_params(seed: int = 3) -> MockAgentParams:
    return MockAgentParams(
        seed=seed, targeted_success_p=0.0, untargeted_success_p=0.0, regression_rate=0.0
    )


def engine_for(bundle, root=None, **config_kwargs) -> LoopEngine:
    return LoopEngine(
        bundle,
        config=LoopConfig(**config_kwargs) if config_kwargs else None,
        root=root,
        clock=counter_clock(),
    )


def mock_pair(params: MockAgentParams):
    agent = MockAgent(params)
    return agent, MockRunner(agent)


class TestHappyPath:
    def test_full_walk_states_and_events(self):
        bundle = single_issue_bundle(test_count=2)
        engine = engine_for(bundle)
        agent, runner = mock_pair(sure_fix_params())

        run = engine.open_issue("ISS-1")
        assert run.state is LoopState.ISSUE_OPENED
        assert run.events[0].kind == "opened"
        assert run.events[0].payload == {
            "title": "work ISS-1",
            "phase": "PH-1",
            "constraints": ["TC-1", "TC-2"],
        }

        engine.draft_plan(run, agent)
        assert run.state is LoopState.PLAN_DRAFTED
        assert run.plan.startswith("Plan for ISS-1")
        assert run.events[-1].payload["path"] == "plans/ISS-1-iter0.md"

        engine.approve_plan(run)
        assert run.state is LoopState.PLAN_APPROVED
        assert run.events[-1].payload == {"actor": "human"}

        engine.generate(run, agent, feedback=None)
        assert run.state is LoopState.CODE_GENERATED
        assert run.iteration == 1
        assert run.events[-1].payload["feedback_count"] is None

        engine.run_tests(run, runner)
        assert run.state is LoopState.TESTS_RUN
        assert run.passing == {"TC-1", "TC-2"}
        assert run.events[-1].payload["failed"] == []

        engine.step(run, agent, runner)
        assert run.state is LoopState.ISSUE_CLOSED
        assert run.events[-1].kind == "issue_closed"
        assert run.events[-1].payload == {"iteration": 1}
        assert bundle.issue_by_id("ISS-1").status is IssueStatus.CLOSED

        kinds = [e.kind for e in run.events]
        assert kinds == [
            "opened",
            "plan_drafted",
            "plan_approved",
            "code_generated",
            "tests_run",
            "issue_closed",
        ]
        assert [e.seq for e in run.events] == list(range(1, 7))

    def test_run_to_completion_matches_golden_iteration_count(self):
        bundle = single_issue_bundle(test_count=12)
        engine = engine_for(bundle)
        agent, runner = mock_pair(MockAgentParams(seed=42))
        run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        assert run.state is LoopState.ISSUE_CLOSED
        assert run.iteration == 6
        kinds = [e.kind for e in run.events]
        assert kinds[:3] == ["opened", "plan_drafted", "plan_approved"]
        assert kinds[3:-1] == ["code_generated", "tests_run"] * 6
        assert kinds[-1] == "issue_closed"
        assert [e.seq for e in run.events] == list(range(1, len(run.events) + 1))

    def test_close_only_when_every_constraint_passes(self):
        bundle = single_issue_bundle(test_count=5)
        engine = engine_for(bundle)
        agent, runner = mock_pair(MockAgentParams(seed=11, regression_rate=0.0))
        run = engine.open_issue("ISS-1")
        engine.draft_plan(run, agent)
        engine.approve_plan(run)
        while run.state is not LoopState.ISSUE_CLOSED:
            engine.step(run, agent, runner)
            if run.state is LoopState.TESTS_RUN and run.failing:
                next_state_before = set(run.passing)
                engine.step(run, agent, runner)
                assert run.state is LoopState.CODE_GENERATED, next_state_before
        closing = run.events[-2]
        assert closing.kind == "tests_run"
        assert set(closing.payload["passed"]) == set(run.constraint_ids)


class TestWrongStates:
    def test_operation_state_matrix(self):
        bundle = single_issue_bundle()
        engine = engine_for(bundle)
        agent, runner = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")

        with pytest.raises(WrongStateError, match="cannot approve_plan in state issue_opened"):
            engine.approve_plan(run)
        with pytest.raises(WrongStateError, match="cannot generate in state issue_opened"):
            engine.generate(run, agent)
        with pytest.raises(WrongStateError, match="cannot run_tests in state issue_opened"):
            engine.run_tests(run, runner)

        engine.draft_plan(run, agent)
        engine.approve_plan(run)
        with pytest.raises(WrongStateError, match="cannot draft_plan in state plan_approved"):
            engine.draft_plan(run, agent)

        engine.generate(run, agent)
        engine.run_tests(run, runner)
        with pytest.raises(WrongStateError, match="no failures to address"):
            engine.generate(run, agent)

        engine.step(run, agent, runner)
        assert run.state is LoopState.ISSUE_CLOSED
        with pytest.raises(WrongStateError, match="cannot step in state issue_closed"):
            engine.step(run, agent, runner)

    def test_error_object_carries_operation_and_state(self):
        bundle = single_issue_bundle()
        engine = engine_for(bundle)
        run = engine.open_issue("ISS-1")
        agent, runner = mock_pair(sure_fix_params())
        with pytest.raises(WrongStateError) as exc:
            engine.run_tests(run, runner)
        assert exc.value.operation == "run_tests"
        assert exc.value.state is LoopState.ISSUE_OPENED

    def test_redraft_from_plan_drafted_replaces_plan(self):
        bundle = single_issue_bundle()
        engine = engine_for(bundle)
        agent, _ = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")
        engine.draft_plan(run, agent)
        first_plan = run.plan
        engine.draft_plan(run, agent)
        assert run.state is LoopState.PLAN_DRAFTED
        assert run.plan == first_plan
        assert [e.kind for e in run.events].count("plan_drafted") == 2


class TestOpenGuards:
    def two_phase_bundle(self):
        return make_bundle(
            [("PH-1", [], 1), ("PH-2", ["PH-1"], 1)],
            [
                ("ISS-1", "PH-1", None, IssueStatus.OPEN),
                ("ISS-2", "PH-2", None, IssueStatus.OPEN),
            ],
        )

    def test_dependency_block_and_release(self):
        bundle = self.two_phase_bundle()
        engine = engine_for(bundle)
        with pytest.raises(DependencyError, match="ISS-2 blocked: open issues remain in PH-1") as exc:
            engine.open_issue("ISS-2")
        assert exc.value.blocking_phases == ["PH-1"]

        bundle.issue_by_id("ISS-1").status = IssueStatus.CLOSED
        run = engine.open_issue("ISS-2")
        assert run.state is LoopState.ISSUE_OPENED

    def test_closed_issue_refused(self):
        bundle = single_issue_bundle()
        bundle.issue_by_id("ISS-1").status = IssueStatus.CLOSED
        with pytest.raises(LoopError, match="ISS-1 is already closed"):
            engine_for(bundle).open_issue("ISS-1")

    def test_unconstrained_issue_refused(self):
        bundle = make_bundle(
            [("PH-1", [], 1)],
            [("ISS-1", "PH-1", [], IssueStatus.OPEN)],
        )
        with pytest.raises(LoopError, match="ISS-1 has no constraint tests"):
            engine_for(bundle).open_issue("ISS-1")

    def test_unknown_issue_raises_key_error(self):
        with pytest.raises(KeyError):
            engine_for(single_issue_bundle()).open_issue("ISS-99")


class FailingAgent:
    def __init__(self, plan_error=None, generate_error=None, plan_text="a plan\n"):
        self.plan_error = plan_error
        self.generate_error = generate_error
        self.plan_text = plan_text

    def draft_plan(self, context):
        if self.plan_error:
            raise AdapterError(self.plan_error)
        return self.plan_text

    def generate(self, plan, feedback):
        if self.generate_error:
            raise AdapterError(self.generate_error)
        return ChangeSet(description="noop")


class FailingRunner:
    def __init__(self, error=None, outcomes=None):
        self.error = error
        self.outcomes = outcomes

    def run(self, test_ids):
        if self.error:
            raise AdapterError(self.error)
        return self.outcomes


class TestAdapterFailures:
    def test_agent_error_during_draft_keeps_state(self):
        engine = engine_for(single_issue_bundle())
        run = engine.open_issue("ISS-1")
        with pytest.raises(AgentFailure, match="draft_plan failed: no brain"):
            engine.draft_plan(run, FailingAgent(plan_error="no brain"))
        assert run.state is LoopState.ISSUE_OPENED
        assert run.events[-1].kind == "agent_error"
        assert run.events[-1].payload == {"operation": "draft_plan", "message": "no brain"}

    def test_blank_plan_is_agent_failure(self):
        engine = engine_for(single_issue_bundle())
        run = engine.open_issue("ISS-1")
        with pytest.raises(AgentFailure, match="empty-plan"):
            engine.draft_plan(run, FailingAgent(plan_text="   \n"))
        assert run.state is LoopState.ISSUE_OPENED
        assert run.events[-1].payload["message"] == "empty-plan"

    def test_agent_error_during_generate_keeps_state_and_iteration(self):
        engine = engine_for(single_issue_bundle())
        run = engine.open_issue("ISS-1")
        engine.draft_plan(run, FailingAgent())
        engine.approve_plan(run)
        with pytest.raises(AgentFailure, match="generate failed"):
            engine.generate(run, FailingAgent(generate_error="stuck"))
        assert run.state is LoopState.PLAN_APPROVED
        assert run.iteration == 0
        assert run.events[-1].payload["operation"] == "generate"

    def test_runner_error_keeps_state_and_is_retryable(self):
        bundle = single_issue_bundle(test_count=1)
        engine = engine_for(bundle)
        agent, runner = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")
        engine.draft_plan(run, agent)
        engine.approve_plan(run)
        engine.generate(run, agent)

        with pytest.raises(RunnerFailure, match="runner failed: infra down"):
            engine.run_tests(run, FailingRunner(error="infra down"))
        assert run.state is LoopState.CODE_GENERATED
        assert run.events[-1].kind == "runner_error"

        engine.run_tests(run, runner)
        assert run.state is LoopState.TESTS_RUN

    def test_foreign_test_id_is_runner_failure(self):
        engine = engine_for(single_issue_bundle(test_count=1))
        agent, _ = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")
        engine.draft_plan(run, agent)
        engine.approve_plan(run)
        engine.generate(run, agent)
        rogue = FailingRunner(
            outcomes=[
                Outcome("TC-1", OutcomeStatus.PASS),
                Outcome("TC-99", OutcomeStatus.PASS),
            ]
        )
        with pytest.raises(RunnerFailure, match="foreign-test-id: TC-99"):
            engine.run_tests(run, rogue)
        assert run.state is LoopState.CODE_GENERATED
        assert run.events[-1].payload == {"message": "foreign-test-id: TC-99"}


class TestStall:
    def test_iteration_cap_stalls_with_failing_list(self):
        bundle = single_issue_bundle(test_count=3)
        engine = engine_for(bundle, max_iterations=2)
        agent, runner = mock_pair(never_fix_params())
        run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        assert run.state is LoopState.STALLED
        assert run.iteration == 2
        assert run.events[-1].kind == "stalled"
        assert run.events[-1].payload == {
            "iteration": 2,
            "failing": ["TC-1", "TC-2", "TC-3"],
        }
        assert bundle.issue_by_id("ISS-1").status is IssueStatus.OPEN

    def test_config_rejects_non_positive_cap(self):
        with pytest.raises(ValueError):
            LoopConfig(max_iterations=0)


class TestApprovalModes:
    def test_auto_approval_emits_auto_actor(self):
        engine = engine_for(single_issue_bundle(), require_plan_approval=False)
        agent, _ = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")
        engine.draft_plan(run, agent)
        assert run.state is LoopState.PLAN_APPROVED
        kinds = [e.kind for e in run.events]
        assert kinds == ["opened", "plan_drafted", "plan_approved"]
        assert run.events[-1].payload == {"actor": "auto"}

    def test_step_approves_as_human(self):
        engine = engine_for(single_issue_bundle())
        agent, runner = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")
        engine.step(run, agent, runner)
        assert run.state is LoopState.PLAN_DRAFTED
        engine.step(run, agent, runner)
        assert run.state is LoopState.PLAN_APPROVED
        assert run.events[-1].payload == {"actor": "human"}


class TestPersistence:
    def test_rooted_engine_writes_plan_issue_and_event_log(self, tmp_path):
        bundle = single_issue_bundle(test_count=2)
        engine = engine_for(bundle, root=tmp_path)
        agent, runner = mock_pair(sure_fix_params())
        run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        assert run.state is LoopState.ISSUE_CLOSED

        plan_path = tmp_path / "plans" / "ISS-1-iter0.md"
        assert plan_path.read_text(encoding="utf-8") == run.plan

        issue_raw = json.loads((tmp_path / "issues" / "ISS-1.json").read_text(encoding="utf-8"))
        assert issue_raw["status"] == "closed"

        log_path = tmp_path / "logs" / EVENT_LOG_NAME
        assert load_events(log_path) == run.events

    def test_rootless_engine_touches_no_files(self, tmp_path):
        engine = engine_for(single_issue_bundle(test_count=1))
        agent, runner = mock_pair(sure_fix_params())
        engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        assert list(tmp_path.iterdir()) == []


class TestReplay:
    def closed_run(self, seed=42, test_count=12, cap=25):
        bundle = single_issue_bundle(test_count=test_count)
        engine = engine_for(bundle, max_iterations=cap)
        agent, runner = mock_pair(MockAgentParams(seed=seed))
        return engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)

    def test_replay_reconstructs_live_run_exactly(self):
        run = self.closed_run()
        rebuilt = replay(run.events)
        assert rebuilt == run

    def test_replay_of_stalled_run(self):
        bundle = single_issue_bundle(test_count=3)
        engine = engine_for(bundle, max_iterations=2)
        agent, runner = mock_pair(never_fix_params())
        run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        rebuilt = replay(run.events)
        assert rebuilt == run
        assert rebuilt.state is LoopState.STALLED

    def test_replay_through_event_log_file(self, tmp_path):
        bundle = single_issue_bundle(test_count=4)
        engine = engine_for(bundle, root=tmp_path)
        agent, runner = mock_pair(MockAgentParams(seed=5, regression_rate=0.0))
        run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        rebuilt = replay(load_events(tmp_path / "logs" / EVENT_LOG_NAME))
        assert rebuilt == run

    def test_replay_log_keeps_latest_run_per_issue(self, tmp_path):
        bundle = make_bundle(
            [("PH-1", [], 2)],
            [
                ("ISS-1", "PH-1", ["TC-1"], IssueStatus.OPEN),
                ("ISS-2", "PH-1", ["TC-2"], IssueStatus.OPEN),
            ],
        )
        engine = engine_for(bundle, root=tmp_path)
        agent, runner = mock_pair(sure_fix_params())
        first = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
        second = engine.run_to_completion(engine.open_issue("ISS-2"), agent, runner)
        runs = replay_log(tmp_path / "logs" / EVENT_LOG_NAME)
        assert set(runs) == {"ISS-1", "ISS-2"}
        assert runs["ISS-1"] == first
        assert runs["ISS-2"] == second

    def test_error_events_do_not_disturb_replay(self):
        engine = engine_for(single_issue_bundle(test_count=1))
        agent, runner = mock_pair(sure_fix_params())
        run = engine.open_issue("ISS-1")
        with pytest.raises(AgentFailure):
            engine.draft_plan(run, FailingAgent(plan_error="hiccup"))
        engine.draft_plan(run, agent)
        engine.approve_plan(run)
        engine.generate(run, agent)
        with pytest.raises(RunnerFailure):
            engine.run_tests(run, FailingRunner(error="hiccup"))
        engine.run_tests(run, runner)
        engine.step(run, agent, runner)
        assert replay(run.events) == run

    def test_load_events_rejects_bad_lines(self, tmp_path):
        path = tmp_path / "events.jsonl"
        path.write_text('{"seq": 1}\n', encoding="utf-8")
        with pytest.raises(LoopError, match=r"events\.jsonl:1: bad event record"):
            load_events(path)

    def test_replay_guards(self):
        with pytest.raises(LoopError, match="empty event log"):
            replay([])
        stray = LoopEvent(seq=1, ts="t", issue="ISS-1", kind="tests_run", payload={})
        with pytest.raises(LoopError, match="does not start with an 'opened' event"):
            replay([stray])
        opened = LoopEvent(
            seq=1, ts="t", issue="ISS-1", kind="opened",
            payload={"title": "t", "phase": "PH-1", "constraints": ["TC-1"]},
        )
        bogus = LoopEvent(seq=2, ts="t", issue="ISS-1", kind="mystery", payload={})
        with pytest.raises(LoopError, match="unknown event kind: mystery"):
            replay([opened, bogus])


class TestInvariants:
    def test_seqs_strictly_increase_across_many_runs(self):
        for seed in range(10):
            bundle = single_issue_bundle(test_count=6)
            engine = engine_for(bundle, max_iterations=8)
            agent, runner = mock_pair(MockAgentParams(seed=seed))
            run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
            seqs = [e.seq for e in run.events]
            assert seqs == list(range(1, len(seqs) + 1))

    def test_zero_regression_makes_passing_monotone(self):
        for seed in range(8):
            bundle = single_issue_bundle(test_count=8)
            engine = engine_for(bundle, max_iterations=25)
            agent, runner = mock_pair(
                MockAgentParams(seed=seed, regression_rate=0.0)
            )
            run = engine.run_to_completion(engine.open_issue("ISS-1"), agent, runner)
            previous: set[str] = set()
            for event in run.events:
                if event.kind == "tests_run":
                    current = set(event.payload["passed"])
                    assert previous <= current, seed
                    previous = current
