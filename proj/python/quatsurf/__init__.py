"""Quaternionic calculus on sampled conformal surfaces."""

import json

from ._quatsurf import (
    NumericalError,
    ValidationError,
    command_names,
    curvature,
    default_bounds,
    generator_names,
    generator_positions,
    verify_groups,
)
from ._quatsurf import run_json as _run_json

__all__ = [
    "NumericalError",
    "ValidationError",
    "RunResult",
    "command_names",
    "curvature",
    "default_bounds",
    "generator_names",
    "generator_positions",
    "run",
    "verify_groups",
]


class RunResult:
    """Outcome of one command: exit code, parsed report and artifact bytes."""

    def __init__(self, exit_code, report, artifacts):
        self.exit_code = exit_code
        self.report_text = report
        self.report = json.loads(report)
        self.artifacts = artifacts

    @property
    def ok(self):
        return self.exit_code == 0

    def __repr__(self):
        return f"RunResult(command={self.report['command']!r}, status={self.report['status']!r})"


def run(command, **config):
    """Run a command with the same configuration keys as the JSON report.

    Nested groups (params, grid, tolerances) are plain dicts, e.g.
    ``run("analyze", generator="catenoid", grid={"n": 65})``.
    """
    config["command"] = command
    return RunResult(*_run_json(json.dumps(config)))
