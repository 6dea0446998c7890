"""Command-line interface: subcommands, exit codes, output formats."""

import json
import shutil
import subprocess

import pytest

from shiftup.artifacts.model import IssueStatus
from shiftup.artifacts.store import save_bundle
from shiftup.cli import EXIT_DOMAIN, EXIT_ENV, EXIT_OK, main

from builders import make_bundle


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRootResolution:
    def test_flag_wins_over_env(self, capsys, monkeypatch, bundle_root):
        monkeypatch.setenv("SHIFTUP_ROOT", "/nonexistent-root")
        code, out, _ = run_cli(capsys, "lint", "--root", str(bundle_root))
        assert code == EXIT_OK
        assert out == "ok: bundle is valid\n"

    def test_env_fallback(self, capsys, monkeypatch, bundle_root):
        monkeypatch.setenv("SHIFTUP_ROOT", str(bundle_root))
        code, out, _ = run_cli(capsys, "lint")
        assert code == EXIT_OK

    def test_cwd_fallback(self, capsys, monkeypatch, bundle_root):
        monkeypatch.delenv("SHIFTUP_ROOT", raising=False)
        monkeypatch.chdir(bundle_root)
        code, out, _ = run_cli(capsys, "lint")
        assert code == EXIT_OK


class TestLint:
    def test_valid_bundle(self, capsys, bundle_root):
        code, out, err = run_cli(capsys, "lint", "--root", str(bundle_root))
        assert (code, out, err) == (EXIT_OK, "ok: bundle is valid\n", "")

    def test_valid_bundle_json(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "lint", "--root", str(bundle_root), "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out) == {"ok": True, "violations": []}

    def test_violations_exit_domain(self, capsys, bundle_root):
        issue_path = bundle_root / "issues" / "ISS-1.json"
        raw = json.loads(issue_path.read_text(encoding="utf-8"))
        raw["constraint_test_ids"].append("TC-9999")
        issue_path.write_text(json.dumps(raw), encoding="utf-8")

        code, out, _ = run_cli(capsys, "lint", "--root", str(bundle_root), "--format", "json")
        assert code == EXIT_DOMAIN
        payload = json.loads(out)
        assert payload["ok"] is False
        rules = {v["rule"] for v in payload["violations"]}
        assert "dangling-reference" in rules

    def test_missing_root_exits_env(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "lint", "--root", str(tmp_path / "nope"))
        assert code == EXIT_ENV
        assert "is not a directory" in err

    def test_directory_without_manifest_exits_env(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "lint", "--root", str(tmp_path))
        assert code == EXIT_ENV
        assert "no bundle manifest" in err


class TestOrder:
    def test_fixture_order(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "order", "--root", str(bundle_root))
        assert code == EXIT_OK
        assert out.splitlines() == [f"PH-{n}" for n in range(1, 11)]

    def test_json_format(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "order", "--root", str(bundle_root), "--format", "json")
        assert json.loads(out) == {"phases": [f"PH-{n}" for n in range(1, 11)]}

    def test_cycle_exits_domain(self, capsys, tmp_path):
        bundle = make_bundle([("PH-1", ["PH-2"], 1), ("PH-2", ["PH-1"], 1)], [])
        save_bundle(bundle, tmp_path)
        code, out, _ = run_cli(capsys, "order", "--root", str(tmp_path), "--format", "json")
        assert code == EXIT_DOMAIN
        assert json.loads(out) == {"error": "phase-cycle", "members": ["PH-1", "PH-2"]}


class TestCoverage:
    def test_fixture_fully_covered(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "coverage", "--root", str(bundle_root))
        assert code == EXIT_OK
        assert "requirement coverage     1.000" in out
        assert "test phase coverage      1.000" in out

    def test_json_ratios(self, capsys, bundle_root):
        code, out, _ = run_cli(
            capsys, "coverage", "--root", str(bundle_root), "--format", "json"
        )
        payload = json.loads(out)
        assert payload["ratios"] == {
            "story_coverage": 1.0,
            "requirement_coverage": 1.0,
            "test_constraint_coverage": 1.0,
            "test_phase_coverage": 1.0,
        }
        assert payload["unphased_tests"] == []


class TestGraph:
    def test_dot_output(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "graph", "--root", str(bundle_root))
        assert code == EXIT_OK
        assert out.startswith("digraph trace {")

    def test_json_output_counts(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "graph", "--root", str(bundle_root), "--format", "json")
        payload = json.loads(out)
        assert len(payload["nodes"]) == 32 + 68 + 175 + 10 + 30
        assert {"from": "PH-2", "to": "PH-1", "kind": "depends_on"} in payload["edges"]

    def test_impact_json(self, capsys, bundle_root):
        code, out, _ = run_cli(
            capsys, "graph", "--root", str(bundle_root), "--impact", "TC-1", "--format", "json"
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["impact_of"] == "TC-1"
        assert "ISS-1" in payload["affected"]
        assert "PH-1" in payload["affected"]

    def test_impact_unknown_node(self, capsys, bundle_root):
        code, _, err = run_cli(capsys, "graph", "--root", str(bundle_root), "--impact", "TC-9999")
        assert code == EXIT_DOMAIN
        assert "unknown node TC-9999" in err

    def test_impact_without_dependents(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "graph", "--root", str(bundle_root), "--impact", "PH-10")
        assert code == EXIT_OK
        assert out == "(no dependents)\n"


class TestLoopRun:
    def test_issue_closes_exit_ok(self, capsys, bundle_root):
        code, out, _ = run_cli(capsys, "loop", "run", "ISS-1", "--root", str(bundle_root))
        assert code == EXIT_OK
        assert out == "ISS-1: issue_closed after 4 iteration(s), 5/5 tests passing\n"
        assert (bundle_root / "logs" / "loop-events.jsonl").is_file()
        issue_raw = json.loads((bundle_root / "issues" / "ISS-1.json").read_text(encoding="utf-8"))
        assert issue_raw["status"] == "closed"

    def test_json_format_reports_run_state(self, capsys, bundle_root):
        code, out, _ = run_cli(
            capsys, "loop", "run", "ISS-1", "--root", str(bundle_root), "--format", "json"
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["issue"] == "ISS-1"
        assert payload["state"] == "issue_closed"
        assert payload["iteration"] == 4
        assert payload["passing"] == ["TC-1", "TC-10", "TC-11", "TC-2", "TC-3"]

    def test_stalled_run_exits_domain(self, capsys, tmp_path):
        bundle = make_bundle(
            [("PH-1", [], 2)],
            [("ISS-1", "PH-1", None, IssueStatus.OPEN)],
        )
        bundle.manifest = {
            "name": "stall",
            "agent": {
                "adapter": "mock",
                "params": {
                    "seed": 1,
                    "targeted_success_p": 0.0,
                    "untargeted_success_p": 0.0,
                    "regression_rate": 0.0,
                },
            },
            "loop": {"max_iterations": 2},
        }
        save_bundle(bundle, tmp_path)
        code, out, _ = run_cli(capsys, "loop", "run", "ISS-1", "--root", str(tmp_path))
        assert code == EXIT_DOMAIN
        assert out == "ISS-1: stalled after 2 iteration(s), 0/2 tests passing\n"

    def test_blocked_issue_exits_domain(self, capsys, bundle_root):
        code, _, err = run_cli(capsys, "loop", "run", "ISS-4", "--root", str(bundle_root))
        assert code == EXIT_DOMAIN
        assert "ISS-4 blocked: open issues remain in PH-1" in err

    def test_unknown_issue_exits_domain(self, capsys, bundle_root):
        code, _, err = run_cli(capsys, "loop", "run", "ISS-99", "--root", str(bundle_root))
        assert code == EXIT_DOMAIN
        assert "unknown issue ISS-99" in err

    def test_closed_issue_exits_domain(self, capsys, bundle_root):
        run_cli(capsys, "loop", "run", "ISS-1", "--root", str(bundle_root))
        code, _, err = run_cli(capsys, "loop", "run", "ISS-1", "--root", str(bundle_root))
        assert code == EXIT_DOMAIN
        assert "ISS-1 is already closed" in err

    def test_seed_override_changes_trajectory(self, capsys, bundle_root):
        code, out, _ = run_cli(
            capsys, "loop", "run", "ISS-1", "--root", str(bundle_root),
            "--seed", "42", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["state"] == "issue_closed"
        assert payload["iteration"] == 5
        assert payload["event_count"] == 14


class TestSimulate:
    def test_text_table(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--trials", "20", "--tests", "3", "--max-iter", "4"
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].startswith("mode")
        assert lines[1].startswith("guardrail")
        assert lines[2].startswith("prompt_only")

    def test_json_reports(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--trials", "10", "--tests", "2", "--max-iter", "3",
            "--format", "json",
        )
        payload = json.loads(out)
        assert [r["mode"] for r in payload["reports"]] == ["guardrail", "prompt_only"]
        assert all(r["trials"] == 10 for r in payload["reports"])

    def test_single_mode(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--trials", "5", "--tests", "2", "--max-iter", "3",
            "--mode", "guardrail", "--format", "json",
        )
        payload = json.loads(out)
        assert [r["mode"] for r in payload["reports"]] == ["guardrail"]

    def test_bad_probability_exits_env(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--targeted-p", "1.5", "--trials", "2")
        assert code == EXIT_ENV
        assert "error:" in err


class TestPromptsReport:
    def test_fixture_both_paradigms(self, capsys, fixture_root):
        code, out, _ = run_cli(capsys, "prompts", "report", "--root", str(fixture_root))
        assert code == EXIT_OK
        assert "shift_up  (176 prompts)" in out
        assert "structured_vibe  (176 prompts)" in out

    def test_json_report_rows(self, capsys, fixture_root):
        code, out, _ = run_cli(
            capsys, "prompts", "report", "--root", str(fixture_root),
            "--paradigm", "shift_up", "--format", "json",
        )
        payload = json.loads(out)
        (report,) = payload["reports"]
        assert report["total"] == 176
        assert report["categories"][0] == {
            "category": "proceed_next_step",
            "count": 109,
            "percent": 62,
        }

    def test_explicit_log_flag(self, capsys, fixture_root):
        log = fixture_root / "logs" / "prompts.jsonl"
        code, out, _ = run_cli(
            capsys, "prompts", "report", "--log", str(log), "--paradigm", "structured_vibe"
        )
        assert code == EXIT_OK
        assert "structured_vibe  (176 prompts)" in out

    def test_missing_log_exits_env(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "prompts", "report", "--root", str(tmp_path))
        assert code == EXIT_ENV
        assert "no prompt log" in err

    def test_uncategorized_exits_domain(self, capsys, tmp_path):
        log = tmp_path / "prompts.jsonl"
        log.write_text(
            json.dumps(
                {"ts": "t", "paradigm": "shift_up", "text": "nothing matches this"}
            )
            + "\n",
            encoding="utf-8",
        )
        code, _, err = run_cli(capsys, "prompts", "report", "--log", str(log))
        assert code == EXIT_DOMAIN
        assert "uncategorized" in err


class TestServe:
    def test_bad_root_exits_env(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "serve", "--root", str(tmp_path / "nope"))
        assert code == EXIT_ENV
        assert "is not a directory" in err


class TestParser:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("shiftup ")

    def test_unknown_command_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_console_script_installed(self):
        assert shutil.which("shiftup"), "console script missing from PATH"
        proc = subprocess.run(
            ["shiftup", "--version"], capture_output=True, text=True, timeout=60
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("shiftup ")
