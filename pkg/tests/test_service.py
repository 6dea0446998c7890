"""HTTP service: read endpoints, loop commands, error mapping, parity."""

import json

import pytest
from fastapi.testclient import TestClient

from shiftup.cli import main
from shiftup.service import create_app, find_static_dir


@pytest.fixture()
def client(bundle_root):
    with TestClient(create_app(bundle_root)) as client:
        yield client


def loop_events(root):
    path = root / "logs" / "loop-events.jsonl"
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


def without_ts(events):
    return [{k: v for k, v in e.items() if k != "ts"} for e in events]


def _suffix_key(node_id):
    prefix, _, suffix = node_id.rpartition("-")
    return (prefix, int(suffix)) if suffix.isdigit() else (node_id, 0)


class TestReadEndpoints:
    def test_bundle_summary(self, client):
        payload = client.get("/api/bundle/summary").json()
        assert payload["name"] == "snackbar"
        assert payload["counts"] == {
            "requirements": 32,
            "stories": 68,
            "tests": 175,
            "adrs": 6,
            "phases": 10,
            "issues": 30,
        }
        assert payload["issues"] == {"open": 30, "closed": 0}

    def test_graph(self, client):
        payload = client.get("/api/graph").json()
        assert len(payload["nodes"]) == 315
        assert {"from": "PH-2", "to": "PH-1", "kind": "depends_on"} in payload["edges"]

    def test_graph_impact(self, client):
        payload = client.get("/api/graph/impact/TC-1").json()
        assert payload["node"] == "TC-1"
        assert "ISS-1" in payload["impacted"]
        assert "PH-1" in payload["impacted"]
        assert payload["impacted"] == sorted(payload["impacted"], key=_suffix_key)

    def test_graph_impact_unknown_node(self, client):
        response = client.get("/api/graph/impact/TC-9999")
        assert response.status_code == 404
        assert response.json() == {"error": "unknown-node", "detail": "no node TC-9999"}

    def test_phase_order(self, client):
        payload = client.get("/api/phases/order").json()
        assert [p["id"] for p in payload["phases"]] == [f"PH-{n}" for n in range(1, 11)]
        first = payload["phases"][0]
        assert set(first) == {"id", "name", "goal", "depends_on", "test_ids"}
        assert first["depends_on"] == []

    def test_coverage(self, client):
        payload = client.get("/api/coverage").json()
        assert payload["ratios"]["story_coverage"] == 1.0
        assert payload["uncovered_requirements"] == []

    def test_issues_with_blocking_flags(self, client):
        payload = client.get("/api/issues").json()
        by_id = {item["id"]: item for item in payload["issues"]}
        assert len(by_id) == 30
        assert by_id["ISS-1"]["blocked"] is False
        assert by_id["ISS-4"]["blocked"] is True
        assert by_id["ISS-1"]["run"] is None
        assert by_id["ISS-1"]["status"] == "open"

    def test_prompt_reports(self, client):
        payload = client.get("/api/reports/prompts").json()
        assert [r["paradigm"] for r in payload["reports"]] == [
            "shift_up",
            "structured_vibe",
        ]
        assert all(r["total"] == 176 for r in payload["reports"])

    def test_prompt_reports_missing_log(self, bundle_root):
        (bundle_root / "logs" / "prompts.jsonl").unlink()
        client = TestClient(create_app(bundle_root))
        response = client.get("/api/reports/prompts")
        assert response.status_code == 404
        assert response.json()["error"] == "not-found"

    def test_prompt_reports_uncategorized(self, bundle_root):
        log = bundle_root / "logs" / "prompts.jsonl"
        with open(log, "a", encoding="utf-8") as fh:
            fh.write(
                json.dumps(
                    {"ts": "t", "paradigm": "shift_up", "text": "nothing matches"}
                )
                + "\n"
            )
        client = TestClient(create_app(bundle_root))
        response = client.get("/api/reports/prompts")
        assert response.status_code == 400
        assert response.json()["error"] == "uncategorized-prompts"

    def test_json_index_without_static_dir(self, client):
        payload = client.get("/").json()
        assert payload["service"] == "shiftup"
        assert "/api/bundle/summary" in payload["endpoints"]


class TestStaticMount:
    def test_serves_cockpit_files(self, bundle_root, tmp_path):
        static = tmp_path / "dist"
        static.mkdir()
        (static / "index.html").write_text("<html><body>cockpit</body></html>")
        client = TestClient(create_app(bundle_root, static_dir=static))
        response = client.get("/")
        assert response.status_code == 200
        assert "cockpit" in response.text

    def test_find_static_dir_explicit(self, tmp_path):
        assert find_static_dir(str(tmp_path)) == tmp_path
        assert find_static_dir(str(tmp_path / "missing")) is None


class TestLoopCommands:
    def test_open_then_drive_to_closure(self, client):
        opened = client.post("/api/loop/ISS-1/open").json()
        assert opened["state"] == "issue_opened"
        assert opened["constraint_test_ids"] == ["TC-1", "TC-2", "TC-3", "TC-10", "TC-11"]

        planned = client.post("/api/loop/ISS-1/plan").json()
        assert planned["state"] == "plan_drafted"

        approved = client.post("/api/loop/ISS-1/approve").json()
        assert approved["state"] == "plan_approved"

        stepped = client.post("/api/loop/ISS-1/step").json()
        assert stepped["state"] == "code_generated"
        assert stepped["iteration"] == 1

        stepped = client.post("/api/loop/ISS-1/step").json()
        assert stepped["state"] == "tests_run"

        finished = client.post("/api/loop/ISS-1/run-to-completion").json()
        assert finished["state"] == "issue_closed"
        assert finished["iteration"] == 4

        issues = client.get("/api/issues").json()["issues"]
        record = next(i for i in issues if i["id"] == "ISS-1")
        assert record["status"] == "closed"
        assert record["run"]["state"] == "issue_closed"

    def test_open_unknown_issue(self, client):
        response = client.post("/api/loop/ISS-99/open")
        assert response.status_code == 404
        assert response.json() == {"error": "unknown-issue", "detail": "no issue ISS-99"}

    def test_step_without_open(self, client):
        response = client.post("/api/loop/ISS-2/step")
        assert response.status_code == 409
        body = response.json()
        assert body["error"] == "not-open"
        assert "POST open first" in body["detail"]

    def test_open_twice_conflicts(self, client):
        assert client.post("/api/loop/ISS-1/open").status_code == 200
        response = client.post("/api/loop/ISS-1/open")
        assert response.status_code == 409
        assert response.json()["error"] == "already-active"

    def test_reopen_after_closure_conflicts_as_loop_error(self, client):
        client.post("/api/loop/ISS-1/open")
        client.post("/api/loop/ISS-1/run-to-completion")
        response = client.post("/api/loop/ISS-1/open")
        assert response.status_code == 409
        assert response.json()["error"] == "loop-error"
        assert "already closed" in response.json()["detail"]

    def test_dependency_block_maps_to_409(self, client):
        response = client.post("/api/loop/ISS-4/open")
        assert response.status_code == 409
        body = response.json()
        assert body["error"] == "dependency-not-satisfied"
        assert "open issues remain in PH-1" in body["detail"]

    def test_wrong_state_maps_to_409(self, client):
        client.post("/api/loop/ISS-1/open")
        response = client.post("/api/loop/ISS-1/approve")
        assert response.status_code == 409
        body = response.json()
        assert body["error"] == "wrong-state"
        assert body["detail"] == "cannot approve_plan in state issue_opened"

    def test_malformed_bodies_rejected(self, client):
        response = client.post(
            "/api/loop/ISS-1/open",
            content=b"{nope",
            headers={"content-type": "application/json"},
        )
        assert response.status_code == 400
        assert response.json()["error"] == "malformed-body"

        response = client.post("/api/loop/ISS-1/open", json=[1, 2])
        assert response.status_code == 400
        assert "JSON object" in response.json()["detail"]

        response = client.post("/api/loop/ISS-1/open", json={"bogus": 1})
        assert response.status_code == 400
        assert response.json()["detail"] == "unknown body keys: bogus"

    def test_unconfigured_command_adapter_rejected(self, client):
        response = client.post("/api/loop/ISS-1/open", json={"agent": "command"})
        assert response.status_code == 400
        assert "no agent/runner commands" in response.json()["detail"]

        response = client.post("/api/loop/ISS-1/open", json={"agent": "alien"})
        assert response.status_code == 400
        assert "unknown agent adapter" in response.json()["detail"]

    def test_conflict_leaves_state_unchanged(self, client):
        client.post("/api/loop/ISS-1/open")
        before = client.get("/api/issues").json()
        response = client.post("/api/loop/ISS-1/approve")
        assert response.status_code == 409
        after = client.get("/api/issues").json()
        assert before == after

    def test_open_accepts_seed_and_cap_overrides(self, client):
        opened = client.post(
            "/api/loop/ISS-1/open", json={"seed": 1, "max_iterations": 1}
        ).json()
        assert opened["state"] == "issue_opened"
        finished = client.post("/api/loop/ISS-1/run-to-completion").json()
        assert finished["state"] == "stalled"
        assert finished["iteration"] == 1
        assert finished["passing"] == ["TC-1", "TC-10", "TC-2", "TC-3"]


class TestEventFeed:
    def test_events_for_unknown_issue(self, client):
        response = client.get("/api/loop/ISS-99/events", params={"timeout": 0})
        assert response.status_code == 404

    def test_events_empty_before_open(self, client):
        payload = client.get("/api/loop/ISS-1/events", params={"timeout": 0}).json()
        assert payload == {"issue": "ISS-1", "events": []}

    def test_events_after_filtering(self, client):
        client.post("/api/loop/ISS-1/open")
        first = client.get("/api/loop/ISS-1/events", params={"timeout": 0}).json()
        assert [e["seq"] for e in first["events"]] == [1]
        assert first["events"][0]["kind"] == "opened"

        empty = client.get(
            "/api/loop/ISS-1/events", params={"after": 1, "timeout": 0}
        ).json()
        assert empty["events"] == []

        client.post("/api/loop/ISS-1/plan")
        fresh = client.get(
            "/api/loop/ISS-1/events", params={"after": 1, "timeout": 0}
        ).json()
        assert [e["kind"] for e in fresh["events"]] == ["plan_drafted"]
        assert all(e["seq"] > 1 for e in fresh["events"])

    def test_full_run_feed_matches_disk_log(self, client, bundle_root):
        client.post("/api/loop/ISS-1/open")
        client.post("/api/loop/ISS-1/run-to-completion")
        feed = client.get("/api/loop/ISS-1/events", params={"timeout": 0}).json()
        assert without_ts(feed["events"]) == without_ts(loop_events(bundle_root))


class TestCliApiParity:
    def test_one_issue_to_closure_identical_event_logs(self, bundle_root, tmp_path, capsys):
        import shutil

        cli_root = tmp_path / "cli-copy"
        shutil.copytree(bundle_root, cli_root)

        assert main(["loop", "run", "ISS-1", "--root", str(cli_root)]) == 0
        capsys.readouterr()

        client = TestClient(create_app(bundle_root))
        assert client.post("/api/loop/ISS-1/open").status_code == 200
        finished = client.post("/api/loop/ISS-1/run-to-completion").json()
        assert finished["state"] == "issue_closed"

        cli_log = without_ts(loop_events(cli_root))
        api_log = without_ts(loop_events(bundle_root))
        assert cli_log == api_log
        assert [e["kind"] for e in cli_log][-1] == "issue_closed"
