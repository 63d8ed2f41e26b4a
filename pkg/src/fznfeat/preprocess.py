"""Feature scaling for the instance-selection pipeline.

Columns that are constant on the training data carry no information for
nearest-neighbour distances, so the scaler drops them.  The remaining
columns are mapped linearly so the training minimum lands on -1 and the
training maximum on +1; transformed test values are clamped into that
interval so unseen outliers cannot dominate a distance computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DatasetError


@dataclass(frozen=True)
class Scaler:
    kept: tuple[int, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.kept) != len(self.lo) or len(self.kept) != len(self.hi):
            raise DatasetError("scaler arrays disagree in length")

    @classmethod
    def fit(cls, matrix: np.ndarray) -> "Scaler":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] == 0:
            raise DatasetError("scaler needs a non-empty 2-d matrix to fit")
        lo = matrix.min(axis=0)
        hi = matrix.max(axis=0)
        kept = tuple(int(j) for j in range(matrix.shape[1]) if lo[j] < hi[j])
        if not kept:
            raise DatasetError("every column is constant; nothing to scale")
        return cls(
            kept=kept,
            lo=tuple(float(lo[j]) for j in kept),
            hi=tuple(float(hi[j]) for j in kept),
        )

    def transform(self, row: np.ndarray) -> np.ndarray:
        row = np.asarray(row, dtype=float)
        if row.ndim != 1:
            raise DatasetError("transform expects a single feature row")
        cols = np.array(self.kept, dtype=int)
        lo = np.array(self.lo)
        hi = np.array(self.hi)
        scaled = -1.0 + 2.0 * (row[cols] - lo) / (hi - lo)
        return np.clip(scaled, -1.0, 1.0)

    def transform_matrix(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2:
            raise DatasetError("transform_matrix expects a 2-d matrix")
        return np.vstack([self.transform(row) for row in matrix]) if len(matrix) else (
            np.empty((0, len(self.kept)))
        )

    def save(self, path: str | Path) -> None:
        payload = {"kept": list(self.kept), "lo": list(self.lo), "hi": list(self.hi)}
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Scaler":
        payload = json.loads(Path(path).read_text())
        return cls(
            kept=tuple(int(j) for j in payload["kept"]),
            lo=tuple(float(v) for v in payload["lo"]),
            hi=tuple(float(v) for v in payload["hi"]),
        )
