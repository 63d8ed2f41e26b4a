"""Reading and writing the delimited datasets the tools exchange.

Two file kinds circulate:

* a feature table: ``instance`` followed by the 155 feature columns in
  catalog order, one row per instance;
* a runtime table: ``instance``, optionally ``feat_time``, then one
  column per solver.  A runtime cell is a number of seconds when the
  solver finished, the token ``timeout`` when it was still running at
  the cutoff, or the token ``failed`` when it aborted early without an
  answer.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalog import FEATURE_NAMES, N_FEATURES
from .errors import DatasetError

TIMEOUT_TOKEN = "timeout"
FAILED_TOKEN = "failed"


@dataclass(frozen=True)
class FeatureTable:
    instances: tuple[str, ...]
    matrix: np.ndarray  # shape (n_instances, N_FEATURES)

    def row(self, instance: str) -> np.ndarray:
        try:
            return self.matrix[self.instances.index(instance)]
        except ValueError:
            raise DatasetError(f"instance {instance!r} not in feature table") from None


@dataclass(frozen=True)
class RuntimeTable:
    instances: tuple[str, ...]
    solvers: tuple[str, ...]
    times: np.ndarray  # seconds actually consumed, shape (n_instances, n_solvers)
    solved: np.ndarray  # bool mask, same shape
    feat_times: np.ndarray  # seconds spent on feature extraction, shape (n_instances,)


def write_feature_csv(path: str | Path, instances, matrix) -> None:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (len(instances), N_FEATURES):
        raise DatasetError(
            f"feature matrix must be {len(instances)}x{N_FEATURES}, got {matrix.shape}"
        )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("instance",) + FEATURE_NAMES)
        for name, row in zip(instances, matrix):
            writer.writerow([name] + [repr(float(v)) for v in row])


def read_feature_csv(path: str | Path) -> FeatureTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty feature file") from None
        expected = ["instance"] + list(FEATURE_NAMES)
        if header != expected:
            raise DatasetError(f"{path}: header does not match the feature catalog")
        instances: list[str] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != N_FEATURES + 1:
                raise DatasetError(f"{path}:{lineno}: expected {N_FEATURES + 1} cells")
            instances.append(row[0])
            try:
                rows.append([float(cell) for cell in row[1:]])
            except ValueError as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from None
    if len(set(instances)) != len(instances):
        raise DatasetError(f"{path}: duplicate instance names")
    matrix = np.array(rows, dtype=float) if rows else np.empty((0, N_FEATURES))
    return FeatureTable(tuple(instances), matrix)


def write_runtime_csv(path: str | Path, table: RuntimeTable, timeout: float) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "feat_time"] + list(table.solvers))
        for i, name in enumerate(table.instances):
            cells: list[str] = [name, repr(float(table.feat_times[i]))]
            for j in range(len(table.solvers)):
                if table.solved[i, j]:
                    cells.append(repr(float(table.times[i, j])))
                elif table.times[i, j] >= timeout:
                    cells.append(TIMEOUT_TOKEN)
                else:
                    cells.append(FAILED_TOKEN)
            writer.writerow(cells)


def read_runtime_csv(path: str | Path, timeout: float) -> RuntimeTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty runtime file") from None
        if not header or header[0] != "instance":
            raise DatasetError(f"{path}: first column must be 'instance'")
        has_feat = len(header) > 1 and header[1] == "feat_time"
        solvers = tuple(header[2:] if has_feat else header[1:])
        if not solvers:
            raise DatasetError(f"{path}: no solver columns")
        if len(set(solvers)) != len(solvers):
            raise DatasetError(f"{path}: duplicate solver names")
        instances: list[str] = []
        times: list[list[float]] = []
        solved: list[list[bool]] = []
        feat_times: list[float] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DatasetError(f"{path}:{lineno}: expected {len(header)} cells")
            instances.append(row[0])
            if has_feat:
                try:
                    feat_times.append(float(row[1]))
                except ValueError:
                    raise DatasetError(f"{path}:{lineno}: bad feat_time cell") from None
            else:
                feat_times.append(0.0)
            trow: list[float] = []
            srow: list[bool] = []
            for cell in row[2:] if has_feat else row[1:]:
                cell = cell.strip()
                if cell == TIMEOUT_TOKEN:
                    trow.append(timeout)
                    srow.append(False)
                elif cell == FAILED_TOKEN:
                    trow.append(0.0)
                    srow.append(False)
                else:
                    try:
                        value = float(cell)
                    except ValueError:
                        raise DatasetError(
                            f"{path}:{lineno}: runtime cell {cell!r} is neither a number, "
                            f"{TIMEOUT_TOKEN!r}, nor {FAILED_TOKEN!r}"
                        ) from None
                    if value < 0:
                        raise DatasetError(f"{path}:{lineno}: negative runtime")
                    trow.append(min(value, timeout))
                    srow.append(value < timeout)
            times.append(trow)
            solved.append(srow)
    if len(set(instances)) != len(instances):
        raise DatasetError(f"{path}: duplicate instance names")
    n = len(instances)
    return RuntimeTable(
        instances=tuple(instances),
        solvers=solvers,
        times=np.array(times) if n else np.empty((0, len(solvers))),
        solved=np.array(solved, dtype=bool) if n else np.empty((0, len(solvers)), dtype=bool),
        feat_times=np.array(feat_times) if n else np.empty(0),
    )


def join_tables(features: FeatureTable, runtimes: RuntimeTable):
    """Restrict both tables to their shared instances, in feature-table order."""
    runtime_pos = {name: i for i, name in enumerate(runtimes.instances)}
    shared = [name for name in features.instances if name in runtime_pos]
    if not shared:
        raise DatasetError("feature and runtime tables share no instances")
    fidx = [features.instances.index(name) for name in shared]
    ridx = [runtime_pos[name] for name in shared]
    joined_features = FeatureTable(tuple(shared), features.matrix[fidx])
    joined_runtimes = RuntimeTable(
        instances=tuple(shared),
        solvers=runtimes.solvers,
        times=runtimes.times[ridx],
        solved=runtimes.solved[ridx],
        feat_times=runtimes.feat_times[ridx],
    )
    return joined_features, joined_runtimes


def write_feature_json(path: str | Path, instances, matrix) -> None:
    matrix = np.asarray(matrix, dtype=float)
    payload = {
        name: dict(zip(FEATURE_NAMES, (float(v) for v in row)))
        for name, row in zip(instances, matrix)
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
