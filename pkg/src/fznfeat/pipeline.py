"""Per-instance extraction: compile if needed, static block, dynamic block."""

from __future__ import annotations

import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import FznFeatError, ModelError
from .features import FeatureVector, assemble_vector, static_features
from .fzn.model import ModelIndex
from .fzn.parser import parse_flatzinc_file
from .graphs import GRAPH_BUDGET_S
from .probe import KILL_AFTER_S, PROBE_CAP_S, SolverAdapter, dynamic_features
from .xcsp.instance import parse_xcsp
from .xcsp.translate import translate_to_minizinc

COMPILE_CAP_S = 900.0


class CompileError(FznFeatError):
    """MiniZinc-to-FlatZinc compilation failed or timed out."""


@dataclass(frozen=True)
class ExtractConfig:
    graph_budget_s: float = GRAPH_BUDGET_S
    probe_cap_s: float = PROBE_CAP_S
    kill_after_s: float = KILL_AFTER_S
    compile_cap_s: float = COMPILE_CAP_S
    compiler: str | None = None  # external FlatZinc compiler executable
    compiler_args: tuple[str, ...] = ("{mzn}", "-o", "{fzn}")
    adapter: SolverAdapter | None = None
    transcript_dir: str | None = None

    def __post_init__(self) -> None:
        for name in ("graph_budget_s", "probe_cap_s", "kill_after_s", "compile_cap_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.probe_cap_s >= self.kill_after_s:
            raise ValueError("probe cap must be below the kill-after limit")


@dataclass(frozen=True)
class ExtractResult:
    instance: str
    vector: FeatureVector
    t_compile: float
    t_static: float


def compile_to_flatzinc(
    compiler: str,
    compiler_args: tuple[str, ...],
    mzn_path: Path,
    fzn_path: Path,
    cap_s: float,
) -> float:
    """Run the external compiler; returns its wall time in seconds."""
    cmd = [compiler] + [
        a.format(mzn=str(mzn_path), fzn=str(fzn_path)) for a in compiler_args
    ]
    start = time.monotonic()
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=cap_s
        )
    except subprocess.TimeoutExpired:
        raise CompileError(
            f"compilation of {mzn_path} exceeded {cap_s:g} s; skipping instance"
        ) from None
    except OSError as exc:
        raise CompileError(f"failed to run compiler {compiler!r}: {exc}") from exc
    wall = time.monotonic() - start
    if proc.returncode != 0:
        detail = (proc.stderr or proc.stdout).strip().splitlines()
        raise CompileError(
            f"compiler exited with status {proc.returncode} on {mzn_path}"
            + (f": {detail[0]}" if detail else "")
        )
    if not fzn_path.exists():
        raise CompileError(f"compiler produced no output file {fzn_path}")
    return wall


def extract_instance(
    path: str | Path, config: ExtractConfig, work_dir: str | Path | None = None
) -> ExtractResult:
    """One input file (.fzn, .mzn, or .xml) to one 155-entry vector."""
    path = Path(path)
    suffix = path.suffix.lower()
    t_compile = 0.0
    if suffix == ".fzn":
        fzn_path = path
    elif suffix in (".mzn", ".xml"):
        if config.compiler is None:
            raise CompileError(
                f"{path.name}: no FlatZinc compiler configured "
                "(pass --compiler or set FZNFEAT_COMPILER)"
            )
        work = Path(work_dir) if work_dir is not None else path.parent
        work.mkdir(parents=True, exist_ok=True)
        if suffix == ".xml":
            start = time.monotonic()
            mzn_text = translate_to_minizinc(parse_xcsp(path.read_text()))
            t_compile += time.monotonic() - start
            mzn_path = work / (path.stem + ".mzn")
            mzn_path.write_text(mzn_text)
        else:
            mzn_path = path
        fzn_path = work / (path.stem + ".fzn")
        t_compile += compile_to_flatzinc(
            config.compiler, config.compiler_args, mzn_path, fzn_path, config.compile_cap_s
        )
    else:
        raise ModelError(f"{path.name}: unsupported input type {suffix!r}")

    start = time.monotonic()
    model = parse_flatzinc_file(fzn_path)
    static = static_features(model, graph_budget_s=config.graph_budget_s)
    t_static = time.monotonic() - start

    transcript = None
    if config.transcript_dir is not None:
        tdir = Path(config.transcript_dir)
        tdir.mkdir(parents=True, exist_ok=True)
        transcript = str(tdir / (path.stem + ".probe.txt"))
    dynamic = dynamic_features(
        str(fzn_path),
        n_constraints=len(ModelIndex.build(model).constraints),
        adapter=config.adapter,
        t_compile=t_compile,
        t_static=t_static,
        cap_s=config.probe_cap_s,
        kill_after_s=config.kill_after_s,
        transcript_path=transcript,
    )
    vector = assemble_vector(static, dynamic.values())
    return ExtractResult(str(path), vector, t_compile, t_static)
