"""Project configuration parsed from the ``shiftup.json`` manifest.

The manifest marks a directory as a project root and carries the
operational defaults: which agent adapter to use, the external runner
command template, loop limits, and the service port. Unknown keys are
rejected so typos fail loudly instead of being silently ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from shiftup import ShiftUpError

MANIFEST_NAME = "shiftup.json"

DEFAULT_MAX_ITERATIONS = 25
DEFAULT_PORT = 8787
DEFAULT_AGENT_TIMEOUT_S = 60.0

_TOP_KEYS = {"name", "agent", "runner", "loop", "service"}
_AGENT_KEYS = {"adapter", "params", "command", "timeout_s"}
_AGENT_PARAM_KEYS = {"seed", "targeted_success_p", "untargeted_success_p", "regression_rate"}
_RUNNER_KEYS = {"command"}
_LOOP_KEYS = {"max_iterations", "require_plan_approval"}
_SERVICE_KEYS = {"port"}


class ConfigError(ShiftUpError):
    """Raised for a malformed or contradictory manifest."""


@dataclass
class ProjectConfig:
    name: str
    root: Path = Path(".")
    agent_adapter: str = "mock"
    agent_params: dict = field(default_factory=dict)
    agent_command: str | None = None
    agent_timeout_s: float = DEFAULT_AGENT_TIMEOUT_S
    runner_command: str | None = None
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    require_plan_approval: bool = True
    port: int = DEFAULT_PORT


def _reject_unknown(data: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(unknown)}")


def parse_manifest(data: object, root: Path = Path(".")) -> ProjectConfig:
    """Build a ProjectConfig from decoded manifest JSON."""
    if not isinstance(data, dict):
        raise ConfigError("manifest must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, MANIFEST_NAME)
    name = data.get("name")
    if not isinstance(name, str) or not name.strip():
        raise ConfigError("manifest requires a non-empty 'name'")
    config = ProjectConfig(name=name, root=root)

    agent = data.get("agent", {})
    if not isinstance(agent, dict):
        raise ConfigError("'agent' must be an object")
    _reject_unknown(agent, _AGENT_KEYS, "agent")
    config.agent_adapter = agent.get("adapter", "mock")
    if config.agent_adapter not in ("mock", "command"):
        raise ConfigError(f"unknown agent adapter: {config.agent_adapter!r}")
    params = agent.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("'agent.params' must be an object")
    _reject_unknown(params, _AGENT_PARAM_KEYS, "agent.params")
    config.agent_params = dict(params)
    command = agent.get("command")
    if command is not None and not isinstance(command, str):
        raise ConfigError("'agent.command' must be a string")
    config.agent_command = command
    timeout = agent.get("timeout_s", DEFAULT_AGENT_TIMEOUT_S)
    if not isinstance(timeout, (int, float)) or timeout <= 0:
        raise ConfigError("'agent.timeout_s' must be a positive number")
    config.agent_timeout_s = float(timeout)

    runner = data.get("runner", {})
    if not isinstance(runner, dict):
        raise ConfigError("'runner' must be an object")
    _reject_unknown(runner, _RUNNER_KEYS, "runner")
    runner_command = runner.get("command")
    if runner_command is not None and not isinstance(runner_command, str):
        raise ConfigError("'runner.command' must be a string")
    config.runner_command = runner_command

    loop = data.get("loop", {})
    if not isinstance(loop, dict):
        raise ConfigError("'loop' must be an object")
    _reject_unknown(loop, _LOOP_KEYS, "loop")
    max_iterations = loop.get("max_iterations", DEFAULT_MAX_ITERATIONS)
    if not isinstance(max_iterations, int) or isinstance(max_iterations, bool) or max_iterations < 1:
        raise ConfigError("'loop.max_iterations' must be an integer >= 1")
    config.max_iterations = max_iterations
    approval = loop.get("require_plan_approval", True)
    if not isinstance(approval, bool):
        raise ConfigError("'loop.require_plan_approval' must be a boolean")
    config.require_plan_approval = approval

    service = data.get("service", {})
    if not isinstance(service, dict):
        raise ConfigError("'service' must be an object")
    _reject_unknown(service, _SERVICE_KEYS, "service")
    port = service.get("port", DEFAULT_PORT)
    if not isinstance(port, int) or isinstance(port, bool) or not (0 < port < 65536):
        raise ConfigError("'service.port' must be a valid port number")
    config.port = port
    return config


def load_config(root: Path) -> ProjectConfig:
    """Read and parse ``shiftup.json`` under the given project root."""
    path = Path(root) / MANIFEST_NAME
    if not path.is_file():
        raise ConfigError(f"no {MANIFEST_NAME} manifest in {root}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_manifest(data, root=Path(root))
