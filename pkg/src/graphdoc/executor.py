"""Isolated execution of candidate programs.

Candidate code never runs in this process. The subprocess executor appends
a runner shim to the candidate source, launches a fresh interpreter, feeds
one JSON request over stdin, and reads back a single sentinel-prefixed JSON
line. Containment is best-effort resource limiting, not a security jail:
do not feed it code from untrusted humans.

Stub executors stand in where tests or offline runs need canned outcomes.
"""
from __future__ import annotations

import concurrent.futures
import json
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from .graphs import GraphInstance

SENTINEL = "##RESULT## "

SHIM_ENV_VAR = "GRAPHDOC_RUNNER_SHIM"

DEFAULT_WALL_TIME = 60.0
LARGE_WALL_TIME = 300.0


class HostError(Exception):
    """The host cannot run candidates at all (no interpreter, no shim)."""


@dataclass(frozen=True)
class SandboxLimits:
    wall_time: float = DEFAULT_WALL_TIME
    memory_bytes: int | None = 2 * 1024**3

    def __post_init__(self):
        if self.wall_time <= 0:
            raise ValueError(f"wall_time must be positive: {self.wall_time}")
        if self.memory_bytes is not None and self.memory_bytes <= 0:
            raise ValueError(f"memory_bytes must be positive: {self.memory_bytes}")


@dataclass(frozen=True)
class ExecutionRequest:
    code: str
    graph: GraphInstance
    args: dict = field(default_factory=dict)
    limits: SandboxLimits = SandboxLimits()


@dataclass(frozen=True)
class ExecutionOutcome:
    status: str  # success | runtime_error | timeout
    answer: object = None
    error: str = ""
    duration: float = 0.0

    def __post_init__(self):
        if self.status not in ("success", "runtime_error", "timeout"):
            raise ValueError(f"unknown status: {self.status!r}")


def wire_payload(graph: GraphInstance, args: dict) -> dict:
    """The JSON object the runner reads from stdin."""
    return {
        "edges": [list(e) for e in graph.edges],
        "directed": graph.directed,
        "weighted": graph.weighted,
        "args": dict(args),
    }


def parse_runner_output(stdout: str):
    """Pull the last sentinel line out of a runner's stdout.

    Returns the decoded response dict, or None when no sentinel line is
    present (the candidate crashed before the shim could answer).
    """
    result = None
    for line in stdout.splitlines():
        if line.startswith(SENTINEL):
            try:
                result = json.loads(line[len(SENTINEL):])
            except json.JSONDecodeError:
                result = {"status": "error", "error": "unreadable runner output"}
    return result


def find_shim() -> Path | None:
    """Locate the runner shim: env var first, installed runner second."""
    env = os.environ.get(SHIM_ENV_VAR)
    if env:
        p = Path(env)
        if p.is_file():
            return p
    try:
        import graphdoc_runner
    except ImportError:
        return None
    return Path(graphdoc_runner.shim_path())


class PythonSubprocessExecutor:
    """Runs each candidate in its own interpreter via the runner shim."""

    def __init__(self, shim_path=None, python=None, max_workers: int = 4):
        self.shim_path = Path(shim_path) if shim_path else find_shim()
        self.python = python or sys.executable
        self.max_workers = max_workers
        if self.shim_path is None or not self.shim_path.is_file():
            raise HostError(
                "runner shim not found; install the runner package or set "
                f"${SHIM_ENV_VAR}"
            )
        self._shim_source = self.shim_path.read_text(encoding="utf-8")

    def execute(self, req: ExecutionRequest) -> ExecutionOutcome:
        program = req.code.rstrip() + "\n\n\n" + self._shim_source
        payload = json.dumps(wire_payload(req.graph, req.args))
        with tempfile.TemporaryDirectory(prefix="graphdoc-run-") as tmp:
            script = Path(tmp) / "candidate_job.py"
            script.write_text(program, encoding="utf-8")
            env = {
                k: v
                for k, v in os.environ.items()
                if not k.lower().endswith("_proxy")
            }
            preexec = None
            if req.limits.memory_bytes is not None and os.name == "posix":
                cap = req.limits.memory_bytes

                def preexec():  # pragma: no cover - runs in the child
                    import resource

                    resource.setrlimit(resource.RLIMIT_AS, (cap, cap))

            start = time.monotonic()
            try:
                proc = subprocess.run(
                    [self.python, str(script)],
                    input=payload,
                    capture_output=True,
                    text=True,
                    timeout=req.limits.wall_time,
                    cwd=tmp,
                    env=env,
                    preexec_fn=preexec,
                )
            except subprocess.TimeoutExpired:
                return ExecutionOutcome(
                    status="timeout",
                    error=f"wall time limit of {req.limits.wall_time}s exceeded",
                    duration=time.monotonic() - start,
                )
            except OSError as exc:
                raise HostError(f"could not launch interpreter: {exc}") from exc
            duration = time.monotonic() - start
        result = parse_runner_output(proc.stdout)
        if result is None:
            # keep error text stable across runs: no throwaway temp paths
            raw = (proc.stderr or proc.stdout or "").replace(str(script), "<candidate>")
            tail = raw.replace(tmp, "<workdir>").strip().splitlines()[-8:]
            return ExecutionOutcome(
                status="runtime_error",
                error="candidate died before answering: " + " | ".join(tail),
                duration=duration,
            )
        if result.get("status") == "ok":
            return ExecutionOutcome(
                status="success", answer=result.get("answer"), duration=duration
            )
        return ExecutionOutcome(
            status="runtime_error",
            error=str(result.get("error", "unknown runner error")),
            duration=duration,
        )

    def execute_batch(self, code: str, instances, limits: SandboxLimits | None = None):
        """Run one program against many (graph, args) pairs.

        Instances run isolated from each other; results come back in input
        order regardless of completion order.
        """
        limits = limits or SandboxLimits()
        reqs = [
            ExecutionRequest(code=code, graph=g, args=dict(a), limits=limits)
            for g, a in instances
        ]
        if not reqs:
            return []
        workers = max(1, min(self.max_workers, len(reqs)))
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self.execute, reqs))


class CallableExecutor:
    """Executor backed by a plain function, for tests and offline pipelines.

    The callable receives (code, graph, args) and returns an
    ExecutionOutcome. Exceptions become runtime_error outcomes, so a flaky
    stub cannot take the loop down.
    """

    def __init__(self, fn):
        self.fn = fn

    def execute(self, req: ExecutionRequest) -> ExecutionOutcome:
        try:
            return self.fn(req.code, req.graph, req.args)
        except Exception as exc:
            return ExecutionOutcome(status="runtime_error", error=str(exc))

    def execute_batch(self, code: str, instances, limits: SandboxLimits | None = None):
        limits = limits or SandboxLimits()
        return [
            self.execute(
                ExecutionRequest(code=code, graph=g, args=dict(a), limits=limits)
            )
            for g, a in instances
        ]


MARKER_PREFIX = "# solver:"


def solver_marker(code: str) -> str | None:
    """Extract the task slug from a '# solver: <slug>' line, if present."""
    for line in code.splitlines():
        line = line.strip()
        if line.startswith(MARKER_PREFIX):
            return line[len(MARKER_PREFIX):].strip() or None
    return None


class OracleStubExecutor(CallableExecutor):
    """Stub that answers from task oracles keyed by a marker comment.

    Candidate code carrying '# solver: <task_id>' is treated as a correct
    program for that task; anything else fails as a runtime error. This
    keeps the whole pipeline runnable with no subprocess sandbox at all.
    """

    def __init__(self, oracle_by_task: dict):
        self.oracle_by_task = dict(oracle_by_task)
        super().__init__(self._run)

    def _run(self, code, graph, args):
        marker = solver_marker(code)
        if marker is None or marker not in self.oracle_by_task:
            return ExecutionOutcome(
                status="runtime_error",
                error=f"stub executor: no oracle for marker {marker!r}",
            )
        oracle = self.oracle_by_task[marker]
        try:
            answer = oracle(graph, args)
        except Exception as exc:
            return ExecutionOutcome(status="runtime_error", error=str(exc))
        return ExecutionOutcome(status="success", answer=answer)
