"""Short solving probe against an external FlatZinc solver.

The probe hands the instance to a solver binary with a self-imposed time
cap, supervises the process with a hard kill-after deadline, and scrapes
search statistics from the output.  A probe that fails in any way (missing
binary, crash, forced kill, unparseable output) degrades the first eight
dynamic features to the sentinel -1; the timing features stay real.
"""

from __future__ import annotations

import json
import os
import re
import shlex
import shutil
import signal
import subprocess
import time
from dataclasses import dataclass, field

from .errors import ProbeError, SolverNotFoundError, UnknownDialectError
from .stats import SENTINEL, ratio

PROBE_CAP_S = 2.0
KILL_AFTER_S = 5.0

STAT_KEYS = ("solutions", "propagations", "nodes", "failures", "depth", "memory")


@dataclass(frozen=True)
class SolverAdapter:
    """How to invoke one solver binary.

    ``args`` is a template; the placeholders ``{fzn}``, ``{cap_s}`` and
    ``{cap_ms}`` expand to the instance path and the probe cap.
    """

    executable: str
    args: tuple[str, ...] = ("-s", "-time", "{cap_ms}", "{fzn}")
    dialect: str = "gecode"

    @classmethod
    def from_config(cls, path: str) -> "SolverAdapter":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        args = raw.get("args", list(cls.args))
        if isinstance(args, str):
            args = shlex.split(args)
        return cls(
            executable=raw["executable"],
            args=tuple(args),
            dialect=raw.get("dialect", "gecode"),
        )

    def command(self, fzn_path: str, cap_s: float) -> list[str]:
        fills = {
            "fzn": fzn_path,
            "cap_s": f"{cap_s:g}",
            "cap_ms": str(int(round(cap_s * 1000))),
        }
        return [self.executable] + [a.format(**fills) for a in self.args]


@dataclass
class ProbeResult:
    ok: bool
    killed: bool
    returncode: int | None
    wall_s: float
    stdout: str
    stderr: str


def run_probe(
    fzn_path: str,
    adapter: SolverAdapter,
    cap_s: float = PROBE_CAP_S,
    kill_after_s: float = KILL_AFTER_S,
) -> ProbeResult:
    """Run the solver on one instance under supervision.

    The solver is asked to stop after ``cap_s``; if it is still alive after
    ``kill_after_s`` its whole process group is killed and the probe is
    reported as failed.
    """
    exe = adapter.executable
    if shutil.which(exe) is None and not os.path.isfile(exe):
        raise SolverNotFoundError(f"solver executable not found: {exe!r}")
    cmd = adapter.command(fzn_path, cap_s)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            start_new_session=True,
        )
    except OSError as exc:
        raise ProbeError(f"failed to spawn {exe!r}: {exc}") from exc
    killed = False
    try:
        stdout, stderr = proc.communicate(timeout=kill_after_s)
    except subprocess.TimeoutExpired:
        killed = True
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except (ProcessLookupError, PermissionError):
            proc.kill()
        stdout, stderr = proc.communicate()
    wall = time.monotonic() - start
    ok = not killed and proc.returncode == 0
    return ProbeResult(ok, killed, proc.returncode, wall, stdout or "", stderr or "")


# -- statistics scraping -------------------------------------------------

_GECODE_PATTERNS: tuple[tuple[str, re.Pattern], ...] = tuple(
    (key, re.compile(rf"^\s*(?:%%)?\s*{label}\s*:\s*([0-9]+(?:\.[0-9]+)?)", re.MULTILINE))
    for key, label in (
        ("solutions", r"solutions"),
        ("propagations", r"propagations"),
        ("nodes", r"nodes"),
        ("failures", r"failures"),
        ("depth", r"peak[ _]depth"),
        ("memory", r"peak[ _]memory"),
    )
)


def _parse_gecode(output: str) -> dict[str, float]:
    stats = {key: SENTINEL for key in STAT_KEYS}
    for key, pattern in _GECODE_PATTERNS:
        m = pattern.search(output)
        if m:
            stats[key] = float(m.group(1))
    return stats


_DIALECTS = {"gecode": _parse_gecode}


def register_dialect(name: str, parser) -> None:
    _DIALECTS[name] = parser


def parse_solver_stats(output: str, dialect: str = "gecode") -> dict[str, float]:
    """Extract the six probe counters; missing counters come back as -1."""
    try:
        parse = _DIALECTS[dialect]
    except KeyError:
        raise UnknownDialectError(
            f"unknown solver output dialect {dialect!r}; known: {sorted(_DIALECTS)}"
        ) from None
    return parse(output)


@dataclass(frozen=True)
class DynamicFeatures:
    """The 11 dynamic features, exposed in catalog order by :meth:`values`."""

    solutions: float = SENTINEL
    propagations: float = SENTINEL
    props_per_con: float = SENTINEL
    nodes: float = SENTINEL
    failures: float = SENTINEL
    fails_per_node: float = SENTINEL
    peak_depth: float = SENTINEL
    peak_memory: float = SENTINEL
    t_compile: float = 0.0
    t_static: float = 0.0
    t_total: float = 0.0

    def values(self) -> list[float]:
        return [
            self.solutions,
            self.propagations,
            self.props_per_con,
            self.nodes,
            self.failures,
            self.fails_per_node,
            self.peak_depth,
            self.peak_memory,
            self.t_compile,
            self.t_static,
            self.t_total,
        ]


def dynamic_features(
    fzn_path: str | None,
    n_constraints: int,
    adapter: SolverAdapter | None,
    t_compile: float,
    t_static: float,
    cap_s: float = PROBE_CAP_S,
    kill_after_s: float = KILL_AFTER_S,
    transcript_path: str | None = None,
) -> DynamicFeatures:
    """Probe one instance and assemble the dynamic block.

    With no adapter (or no FlatZinc file) the probe is skipped: the eight
    counter features are -1 and the timings carry no probe component.
    """
    counters = {key: SENTINEL for key in STAT_KEYS}
    wall = 0.0
    if adapter is not None and fzn_path is not None:
        try:
            result = run_probe(fzn_path, adapter, cap_s, kill_after_s)
        except ProbeError:
            result = None
        if result is not None:
            wall = result.wall_s
            if transcript_path is not None:
                _write_transcript(transcript_path, result)
            if result.ok:
                counters = parse_solver_stats(result.stdout, adapter.dialect)
    props = counters["propagations"]
    nodes = counters["nodes"]
    failures = counters["failures"]
    return DynamicFeatures(
        solutions=counters["solutions"],
        propagations=props,
        props_per_con=ratio(props, n_constraints) if props != SENTINEL else SENTINEL,
        nodes=nodes,
        failures=failures,
        fails_per_node=ratio(failures, nodes) if SENTINEL not in (failures, nodes) else SENTINEL,
        peak_depth=counters["depth"],
        peak_memory=counters["memory"],
        t_compile=t_compile,
        t_static=t_static,
        t_total=t_compile + t_static + wall,
    )


def _write_transcript(path: str, result: ProbeResult) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"ok: {result.ok}\nkilled: {result.killed}\n")
        fh.write(f"returncode: {result.returncode}\nwall_s: {result.wall_s:.3f}\n")
        fh.write("--- stdout ---\n")
        fh.write(result.stdout)
        fh.write("\n--- stderr ---\n")
        fh.write(result.stderr)
        fh.write("\n")
