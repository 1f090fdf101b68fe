"""Solver execution under CPU-time, wall-clock, and memory limits.

Each job runs in its own process group (session).  Limits are enforced by
sampling the whole process tree at 100 ms intervals with psutil; on breach
the group gets SIGTERM, a 2 s grace period, then SIGKILL.  CPU time is the
tree aggregate: live samples during the run, combined with the wait4 rusage
of the reaped child (which covers its waited-for descendants).  Memory is
resident-set size summed over the tree, a documented degradation from
kernel-level group accounting, which is not available in unprivileged
containers.

A job's outcome is sat or unsat only when the first non-whitespace token of
standard output is exactly that; anything else, including limit kills, give
ups, and crashes, is unknown.

The journal is a line-delimited record file, one JSON object per completed
job, append-only and written by the coordinating thread only; it is the
interchange format the scoreboard consumes and lets an interrupted matrix
resume without re-running completed jobs.
"""

from __future__ import annotations

import json
import os
import shlex
import signal
import subprocess
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import psutil

POLL_INTERVAL = 0.1
GRACE_SECONDS = 2.0
STDOUT_HEAD_BYTES = 4096

ExitStatus = Union[int, str]


@dataclass(frozen=True, slots=True)
class ResourceLimits:
    wall_seconds: float
    cpu_seconds: Optional[float] = None  # unset: wall-clock regime only
    memory_bytes: Optional[int] = None
    cores: Optional[int] = None

    def __post_init__(self) -> None:
        if self.wall_seconds <= 0:
            raise ValueError("wall_seconds must be positive")
        if self.cpu_seconds is not None and self.cpu_seconds <= 0:
            raise ValueError("cpu_seconds must be positive")
        if self.memory_bytes is not None and self.memory_bytes <= 0:
            raise ValueError("memory_bytes must be positive")
        if self.cores is not None and self.cores <= 0:
            raise ValueError("cores must be positive")


@dataclass(slots=True)
class RunResult:
    solver: str
    benchmark_checksum: str
    outcome: str  # sat | unsat | unknown
    cpu_seconds: float
    wall_seconds: float
    exit_status: ExitStatus
    stdout_head: str = ""
    benchmark_path: str = ""
    limit_hit: Optional[str] = None  # wall | cpu | memory


def _argv(command: str, benchmark_path: str) -> list[str]:
    tokens = shlex.split(command)
    if any("{benchmark}" in t for t in tokens):
        return [t.replace("{benchmark}", benchmark_path) for t in tokens]
    return tokens + [benchmark_path]


def _affinity_preexec(cores: int):
    def fn() -> None:
        try:
            os.sched_setaffinity(0, set(range(min(cores, os.cpu_count() or 1))))
        except OSError:
            pass  # best effort

    return fn


def _signal_group(pid: int, sig: int) -> None:
    try:
        os.killpg(pid, sig)
    except (ProcessLookupError, PermissionError):
        pass


def _sample_tree(pid: int) -> tuple[float, int]:
    """CPU seconds and RSS bytes aggregated over the live process tree.
    Children counters cover descendants already reaped by their parents."""
    cpu = 0.0
    rss = 0
    try:
        root = psutil.Process(pid)
        procs = [root] + root.children(recursive=True)
    except psutil.Error:
        return 0.0, 0
    for p in procs:
        try:
            t = p.cpu_times()
            cpu += t.user + t.system
            cpu += getattr(t, "children_user", 0.0) + getattr(t, "children_system", 0.0)
            rss += p.memory_info().rss
        except psutil.Error:
            continue
    return cpu, rss


def _terminate_group(pid: int) -> tuple[Optional[int], Optional[object]]:
    """SIGTERM the group, grace-wait, SIGKILL; returns the wait status and
    rusage of the direct child."""
    _signal_group(pid, signal.SIGTERM)
    deadline = time.monotonic() + GRACE_SECONDS
    while time.monotonic() < deadline:
        try:
            wpid, status, ru = os.wait4(pid, os.WNOHANG)
        except ChildProcessError:
            _signal_group(pid, signal.SIGKILL)
            return None, None
        if wpid == pid:
            _signal_group(pid, signal.SIGKILL)
            return status, ru
        time.sleep(0.05)
    _signal_group(pid, signal.SIGKILL)
    try:
        _wpid, status, ru = os.wait4(pid, 0)
    except ChildProcessError:
        return None, None
    _signal_group(pid, signal.SIGKILL)
    return status, ru


def _decode_exit(status: Optional[int]) -> ExitStatus:
    if status is None:
        return "unknown-status"
    if os.WIFEXITED(status):
        return os.WEXITSTATUS(status)
    if os.WIFSIGNALED(status):
        return f"signal:{os.WTERMSIG(status)}"
    return f"status:{status}"


def run_job(
    command: str,
    benchmark_path: Union[str, Path],
    limits: ResourceLimits,
    *,
    solver: Optional[str] = None,
    checksum: str = "",
) -> RunResult:
    """Run one solver on one benchmark.  ``command`` is a shell-style
    template; the ``{benchmark}`` placeholder is substituted (or the path is
    appended when no placeholder is present)."""
    solver_name = solver if solver is not None else command
    path_str = str(benchmark_path)
    argv = _argv(command, path_str)
    preexec = _affinity_preexec(limits.cores) if limits.cores else None
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            stdin=subprocess.DEVNULL,
            start_new_session=True,
            preexec_fn=preexec,
        )
    except OSError as e:
        return RunResult(solver_name, checksum, "unknown", 0.0, 0.0, "spawn-error", str(e), path_str)

    head = bytearray()

    def _drain() -> None:
        stream = proc.stdout
        try:
            while True:
                chunk = stream.read(65536)
                if not chunk:
                    return
                if len(head) < STDOUT_HEAD_BYTES:
                    head.extend(chunk[: STDOUT_HEAD_BYTES - len(head)])
        except (OSError, ValueError):
            return

    reader = threading.Thread(target=_drain, daemon=True)
    reader.start()

    start = time.monotonic()
    sampled_cpu = 0.0
    limit_hit: Optional[str] = None
    status: Optional[int] = None
    rusage = None
    while True:
        try:
            wpid, wstatus, ru = os.wait4(proc.pid, os.WNOHANG)
        except ChildProcessError:
            break
        if wpid == proc.pid:
            status, rusage = wstatus, ru
            break
        cpu, rss = _sample_tree(proc.pid)
        sampled_cpu = max(sampled_cpu, cpu)
        wall = time.monotonic() - start
        if wall >= limits.wall_seconds:
            limit_hit = "wall"
        elif limits.cpu_seconds is not None and sampled_cpu >= limits.cpu_seconds:
            limit_hit = "cpu"
        elif limits.memory_bytes is not None and rss >= limits.memory_bytes:
            limit_hit = "memory"
        if limit_hit:
            status, rusage = _terminate_group(proc.pid)
            break
        time.sleep(POLL_INTERVAL)

    wall_seconds = time.monotonic() - start
    _signal_group(proc.pid, signal.SIGKILL)  # no orphans survive the run
    if status is not None:
        # keep Popen from waiting again on the already-reaped pid
        proc.returncode = -os.WTERMSIG(status) if os.WIFSIGNALED(status) else os.WEXITSTATUS(status)
    else:
        proc.returncode = 0
    reader.join(timeout=2.0)

    cpu_seconds = sampled_cpu
    if rusage is not None:
        cpu_seconds = max(cpu_seconds, rusage.ru_utime + rusage.ru_stime)
    text = head.decode("utf-8", errors="replace")
    tokens = text.split()
    if limit_hit is None and tokens and tokens[0] in ("sat", "unsat"):
        outcome = tokens[0]
    else:
        outcome = "unknown"
    return RunResult(
        solver=solver_name,
        benchmark_checksum=checksum,
        outcome=outcome,
        cpu_seconds=cpu_seconds,
        wall_seconds=wall_seconds,
        exit_status=_decode_exit(status),
        stdout_head=text,
        benchmark_path=path_str,
        limit_hit=limit_hit,
    )


# --- journal ---


def journal_record(r: RunResult) -> dict:
    return {
        "solver": r.solver,
        "benchmark": r.benchmark_checksum,
        "path": r.benchmark_path,
        "outcome": r.outcome,
        "cpu_s": round(r.cpu_seconds, 3),
        "wall_s": round(r.wall_seconds, 3),
        "exit": r.exit_status,
    }


def result_from_record(d: dict) -> RunResult:
    return RunResult(
        solver=d["solver"],
        benchmark_checksum=d["benchmark"],
        outcome=d["outcome"],
        cpu_seconds=float(d["cpu_s"]),
        wall_seconds=float(d["wall_s"]),
        exit_status=d["exit"],
        benchmark_path=d.get("path", ""),
    )


def load_journal(path: Union[str, Path]) -> list[RunResult]:
    results = []
    p = Path(path)
    if not p.exists():
        return results
    with p.open() as f:
        for line in f:
            line = line.strip()
            if line:
                results.append(result_from_record(json.loads(line)))
    return results


def run_matrix(
    solvers: Sequence[tuple[str, str]],
    benchmarks: Sequence[tuple[Union[str, Path], str]],
    limits: ResourceLimits,
    parallelism: int = 1,
    journal_path: Optional[Union[str, Path]] = None,
) -> list[RunResult]:
    """Run every (solver, benchmark) pair exactly once under the limits.

    ``solvers`` holds (name, command template) pairs; ``benchmarks`` holds
    (path, checksum) pairs.  Jobs already present in the journal are not
    re-run.  The returned list is sorted by (solver, checksum) and includes
    journaled results."""
    if parallelism < 1:
        raise ValueError("parallelism must be at least 1")
    done: dict[tuple[str, str], RunResult] = {}
    if journal_path is not None:
        for r in load_journal(journal_path):
            done[(r.solver, r.benchmark_checksum)] = r

    jobs = []
    seen = set(done)
    for name, command in solvers:
        for path, digest in benchmarks:
            key = (name, digest)
            if key in seen:
                continue
            seen.add(key)
            jobs.append((name, command, path, digest))

    results = list(done.values())
    journal_file = None
    if journal_path is not None:
        Path(journal_path).parent.mkdir(parents=True, exist_ok=True)
        journal_file = open(journal_path, "a")
    try:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {
                pool.submit(run_job, command, path, limits, solver=name, checksum=digest): (name, digest)
                for name, command, path, digest in jobs
            }
            for fut in as_completed(futures):
                result = fut.result()
                results.append(result)
                if journal_file is not None:
                    journal_file.write(json.dumps(journal_record(result), sort_keys=True) + "\n")
                    journal_file.flush()
    finally:
        if journal_file is not None:
            journal_file.close()
    results.sort(key=lambda r: (r.solver, r.benchmark_checksum, r.benchmark_path))
    return results
