"""Command-line interface: convert, extract, dataset, simulate, catalog."""

from __future__ import annotations

import argparse
import concurrent.futures
import glob
import json
import os
import sys
from pathlib import Path

import numpy as np

from .catalog import catalog_table
from .dataio import (
    RuntimeTable,
    read_feature_csv,
    read_runtime_csv,
    write_feature_csv,
    write_feature_json,
    write_runtime_csv,
)
from .errors import DatasetError, FznFeatError
from .pipeline import (
    COMPILE_CAP_S,
    ExtractConfig,
    extract_instance,
)
from .portfolio import (
    DEFAULT_TIMEOUT_S,
    SimulationConfig,
    run_simulation,
)
from .probe import KILL_AFTER_S, PROBE_CAP_S, SolverAdapter
from .graphs import GRAPH_BUDGET_S
from .report import format_report_text, render_figures, write_report_csv
from .xcsp.instance import parse_xcsp
from .xcsp.translate import translate_to_minizinc

INPUT_SUFFIXES = (".fzn", ".mzn", ".xml")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


# -- convert -------------------------------------------------------------


def _cmd_convert(args) -> int:
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(str(exc))
    try:
        mzn = translate_to_minizinc(parse_xcsp(text))
    except FznFeatError as exc:
        return _fail(f"{args.input}: {exc}")
    if args.output is None:
        sys.stdout.write(mzn)
    else:
        Path(args.output).write_text(mzn, encoding="utf-8")
    return 0


# -- extract -------------------------------------------------------------


def _collect_inputs(paths: list[str]) -> list[Path]:
    found: set[Path] = set()
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            for suffix in INPUT_SUFFIXES:
                found.update(p.rglob(f"*{suffix}"))
        elif p.exists():
            found.add(p)
        else:
            matches = [Path(m) for m in glob.glob(raw, recursive=True)]
            if not matches:
                _warn(f"no input matches {raw!r}")
            found.update(matches)
    return sorted(found)


def _build_extract_config(args) -> ExtractConfig:
    compiler = args.compiler or os.environ.get("FZNFEAT_COMPILER")
    adapter = None
    if args.solver_config:
        adapter = SolverAdapter.from_config(args.solver_config)
    elif os.environ.get("FZNFEAT_SOLVER"):
        adapter = SolverAdapter(executable=os.environ["FZNFEAT_SOLVER"])
    return ExtractConfig(
        graph_budget_s=args.graph_budget,
        probe_cap_s=args.probe_cap,
        kill_after_s=args.kill_after,
        compile_cap_s=args.compile_cap,
        compiler=compiler,
        adapter=adapter,
        transcript_dir=args.transcripts,
    )


def _cmd_extract(args) -> int:
    inputs = _collect_inputs(args.inputs)
    if not inputs:
        return _fail("no input files matched")
    try:
        config = _build_extract_config(args)
    except (ValueError, OSError, KeyError) as exc:
        return _fail(f"bad configuration: {exc}")

    def one(path: Path):
        return extract_instance(path, config, work_dir=args.work_dir)

    rows: dict[str, list[float]] = {}
    skipped = 0
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        futures = {pool.submit(one, p): p for p in inputs}
        for future in concurrent.futures.as_completed(futures):
            path = futures[future]
            try:
                result = future.result()
            except FznFeatError as exc:
                _warn(f"skipping {path}: {exc}")
                skipped += 1
                continue
            rows[str(path)] = list(result.vector.values)
            print(
                f"{path}: compile {result.t_compile:.3f} s, "
                f"static {result.t_static:.3f} s",
                file=sys.stderr,
            )
    names = sorted(rows)
    matrix = np.array([rows[n] for n in names]) if names else np.empty((0, 0))
    if names:
        write_feature_csv(args.output, names, matrix)
        if args.json:
            write_feature_json(args.json, names, matrix)
    print(f"{len(names)} row(s) written, {skipped} skipped", file=sys.stderr)
    return 0


# -- dataset -------------------------------------------------------------


def _cmd_dataset(args) -> int:
    try:
        features = read_feature_csv(args.features)
        runtimes = read_runtime_csv(args.runtimes, timeout=args.timeout)
    except (OSError, DatasetError) as exc:
        return _fail(str(exc))
    fset = set(features.instances)
    rset = set(runtimes.instances)
    only_f = sorted(fset - rset)
    only_r = sorted(rset - fset)
    for name in only_f:
        _warn(f"instance {name!r} has features but no runtimes; dropped")
    for name in only_r:
        _warn(f"instance {name!r} has runtimes but no features; dropped")
    shared = [n for n in features.instances if n in rset]
    if not shared:
        return _fail("feature and runtime tables share no instances")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        idx = [features.instances.index(n) for n in shared]
        write_feature_csv(out / "features.csv", shared, features.matrix[idx])
        rpos = {n: i for i, n in enumerate(runtimes.instances)}
        ridx = [rpos[n] for n in shared]
        joined = RuntimeTable(
            instances=tuple(shared),
            solvers=runtimes.solvers,
            times=runtimes.times[ridx],
            solved=runtimes.solved[ridx],
            feat_times=runtimes.feat_times[ridx],
        )
        write_runtime_csv(out / "runtimes.csv", joined, timeout=args.timeout)
    print(
        f"{len(shared)} shared instance(s), {len(runtimes.solvers)} solver(s), "
        f"{len(only_f) + len(only_r)} dropped",
        file=sys.stderr,
    )
    return 0


# -- simulate ------------------------------------------------------------


def _simulation_config(args) -> SimulationConfig:
    raw: dict = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text())
    def pick(flag, key, default):
        if flag is not None:
            return flag
        return raw.get(key, default)
    seeds = pick(args.seeds, "seeds", "0,1,2,3,4")
    if isinstance(seeds, str):
        seeds = tuple(int(s) for s in seeds.split(","))
    sizes = pick(args.sizes, "portfolio_sizes", "2,3")
    if isinstance(sizes, str):
        sizes = tuple(int(s) for s in sizes.split(","))
    charge = raw.get("charge_feat_time", True)
    if args.no_charge_feat_time:
        charge = False
    return SimulationConfig(
        timeout=float(pick(args.timeout, "timeout", DEFAULT_TIMEOUT_S)),
        k=int(pick(args.k, "k", 10)),
        seeds=tuple(seeds),
        portfolio_sizes=tuple(sizes),
        backup=pick(args.backup, "backup", None),
        charge_feat_time=bool(charge),
    )


def _cmd_simulate(args) -> int:
    try:
        config = _simulation_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail(f"bad configuration: {exc}")
    try:
        features = read_feature_csv(args.features)
        runtimes = read_runtime_csv(args.runtimes, timeout=config.timeout)
    except (OSError, DatasetError) as exc:
        return _fail(str(exc))
    fset = set(features.instances)
    rset = set(runtimes.instances)
    if fset != rset:
        mismatch = sorted(fset.symmetric_difference(rset))
        shown = ", ".join(mismatch[:10]) + (" ..." if len(mismatch) > 10 else "")
        _warn(f"{len(mismatch)} instance id(s) not shared between files: {shown}")
    try:
        report = run_simulation(features, runtimes, config)
    except (DatasetError, ValueError) as exc:
        return _fail(str(exc))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report_csv(out / "report.csv", report)
    text = format_report_text(report)
    (out / "report.txt").write_text(text)
    figures = render_figures(out, report)
    sys.stdout.write(text)
    print(
        "wrote " + ", ".join(str(p) for p in [out / "report.csv", out / "report.txt"] + figures),
        file=sys.stderr,
    )
    return 0


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fznfeat",
        description="Feature extraction and portfolio simulation for FlatZinc models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="translate an XCSP 2.1 XML file to MiniZinc")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output .mzn path (default: stdout)")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("extract", help="extract feature vectors from model files")
    p.add_argument("inputs", nargs="+", help="files, directories, or globs")
    p.add_argument("-o", "--output", required=True, help="features CSV path")
    p.add_argument("--json", help="also write a JSON mirror of the features")
    p.add_argument("--graph-budget", type=float, default=GRAPH_BUDGET_S)
    p.add_argument("--probe-cap", type=float, default=PROBE_CAP_S)
    p.add_argument("--kill-after", type=float, default=KILL_AFTER_S)
    p.add_argument("--compile-cap", type=float, default=COMPILE_CAP_S)
    p.add_argument("--compiler", help="FlatZinc compiler executable (or $FZNFEAT_COMPILER)")
    p.add_argument("--solver-config", help="JSON file describing the probe solver")
    p.add_argument("--transcripts", help="directory for probe transcripts")
    p.add_argument("--work-dir", help="directory for compiled intermediates")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("dataset", help="validate and join feature/runtime tables")
    p.add_argument("--features", required=True)
    p.add_argument("--runtimes", required=True)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT_S)
    p.add_argument("-o", "--out-dir", help="write the joined tables here")
    p.set_defaults(func=_cmd_dataset)

    p = sub.add_parser("simulate", help="replay portfolio selection over a dataset")
    p.add_argument("--features", required=True)
    p.add_argument("--runtimes", required=True)
    p.add_argument("-o", "--out-dir", required=True)
    p.add_argument("--config", help="JSON config (flags take precedence)")
    p.add_argument("--timeout", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--seeds", help="comma-separated repetition seeds")
    p.add_argument("--sizes", help="comma-separated portfolio sizes")
    p.add_argument("--backup", help="backup solver name (default: single best)")
    p.add_argument(
        "--no-charge-feat-time",
        action="store_true",
        help="do not charge feature-extraction time against the budget",
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("catalog", help="print the 155-feature catalog")
    p.set_defaults(func=lambda args: (print(catalog_table()), 0)[1])

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
