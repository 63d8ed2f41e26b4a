"""Portfolio composition, k-NN solver selection, and replayed simulation.

The harness never launches a solver: it replays a recorded runtime
matrix.  Per-instance accounting follows one convention throughout —
an instance that ends unsolved is charged the full time limit, so
average solving time never exceeds the limit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dataio import FeatureTable, RuntimeTable, join_tables
from .errors import DatasetError
from .preprocess import Scaler

DEFAULT_TIMEOUT_S = 1800.0
MIN_DATASET_SIZE = 10


@dataclass(frozen=True)
class SimulationConfig:
    timeout: float = DEFAULT_TIMEOUT_S
    k: int = 10
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    portfolio_sizes: tuple[int, ...] = (2, 3, 4)
    backup: str | None = None  # None: use the single best solver of the dataset
    charge_feat_time: bool = True
    n_folds: int = 5

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not self.seeds:
            raise ValueError("at least one repetition seed is required")
        if self.n_folds < 2:
            raise ValueError("cross-validation needs at least 2 folds")


@dataclass(frozen=True)
class SimResult:
    solved: bool
    time: float


@dataclass(frozen=True)
class Baselines:
    vbs_psi: float
    vbs_ast: float
    sbs_psi: float
    sbs_ast: float
    sbs_solver: str


@dataclass(frozen=True)
class ReportEntry:
    approach: str
    n: int
    portfolio: tuple[str, ...]
    psi: float
    ast: float
    gap: float | None


@dataclass(frozen=True)
class SimulationReport:
    timeout: float
    k: int
    seeds: tuple[int, ...]
    backup: str
    charge_feat_time: bool
    entries: tuple[ReportEntry, ...]
    eval_counts: dict[str, int] = field(compare=False)
    scaling_delta: dict[int, float] = field(compare=False)

    def entry(self, approach: str, n: int) -> ReportEntry:
        for e in self.entries:
            if e.approach == approach and e.n == n:
                return e
        raise KeyError((approach, n))


def _column_indices(rt: RuntimeTable, ids) -> list[int]:
    pos = {s: j for j, s in enumerate(rt.solvers)}
    missing = [s for s in ids if s not in pos]
    if missing:
        raise DatasetError(f"unknown solver(s): {', '.join(sorted(missing))}")
    return [pos[s] for s in ids]


def _psi_ast(results) -> tuple[float, float]:
    n = len(results)
    psi = 100.0 * sum(1 for r in results if r.solved) / n
    ast = sum(r.time for r in results) / n
    return psi, ast


def compose_portfolio(rt: RuntimeTable, n: int, timeout: float) -> tuple[str, ...]:
    """The size-n solver subset solving the most instances.

    Every subset is scored exhaustively.  A subset solves an instance
    when at least one member does; its average time takes the fastest
    solving member per instance, or the time limit when none solves.
    Ties go to the smaller average time, then to the lexicographically
    first subset of solver names.
    """
    if not 2 <= n <= len(rt.solvers):
        raise ValueError(f"portfolio size {n} outside [2, {len(rt.solvers)}]")
    if len(rt.instances) == 0:
        raise DatasetError("cannot compose a portfolio from an empty runtime table")
    order = sorted(range(len(rt.solvers)), key=lambda j: rt.solvers[j])
    best_key = None
    best: tuple[str, ...] = ()
    for combo in itertools.combinations(order, n):
        cols = list(combo)
        solved_any = rt.solved[:, cols].any(axis=1)
        eff = np.where(rt.solved[:, cols], rt.times[:, cols], timeout)
        key = (int(solved_any.sum()), -float(eff.min(axis=1).mean()))
        if best_key is None or key > best_key:
            best_key = key
            best = tuple(rt.solvers[j] for j in combo)
    return best


def baselines(rt: RuntimeTable, portfolio, timeout: float) -> Baselines:
    """Oracle (per-instance best member) and single-best-member baselines."""
    cols = _column_indices(rt, portfolio)
    eff = np.where(rt.solved[:, cols], rt.times[:, cols], timeout)
    vbs_solved = rt.solved[:, cols].any(axis=1)
    n = len(rt.instances)
    vbs_psi = 100.0 * float(vbs_solved.sum()) / n
    vbs_ast = float(eff.min(axis=1).mean())
    best_key = None
    sbs_pos = 0
    for p in sorted(range(len(cols)), key=lambda p: rt.solvers[cols[p]]):
        key = (int(rt.solved[:, cols[p]].sum()), -float(eff[:, p].mean()))
        if best_key is None or key > best_key:
            best_key = key
            sbs_pos = p
    return Baselines(
        vbs_psi=vbs_psi,
        vbs_ast=vbs_ast,
        sbs_psi=100.0 * float(rt.solved[:, cols[sbs_pos]].sum()) / n,
        sbs_ast=float(eff[:, sbs_pos].mean()),
        sbs_solver=rt.solvers[cols[sbs_pos]],
    )


def select_solver_knn(
    train_features: np.ndarray,
    train_times: np.ndarray,
    train_solved: np.ndarray,
    solver_ids,
    portfolio,
    query: np.ndarray,
    k: int,
    timeout: float,
) -> str:
    """Pick the portfolio member that behaves best on the k nearest rows.

    Neighbours are ranked by Euclidean distance (ties keep training
    order).  Members are compared by instances solved among the k, then
    by total time there (unsolved charged at the limit), then by name.
    """
    if not portfolio:
        raise ValueError("empty portfolio")
    if len(train_features) == 0:
        raise DatasetError("k-NN selection needs at least one training row")
    pos = {s: j for j, s in enumerate(solver_ids)}
    dist = np.sqrt(((train_features - query) ** 2).sum(axis=1))
    nn = np.argsort(dist, kind="stable")[: min(k, len(dist))]
    best_key = None
    best = None
    for s in sorted(portfolio):
        j = pos[s]
        solved = train_solved[nn, j]
        eff = np.where(solved, train_times[nn, j], timeout)
        key = (int(solved.sum()), -float(eff.sum()))
        if best_key is None or key > best_key:
            best_key = key
            best = s
    return best


def simulate_instance(
    rt: RuntimeTable,
    instance: str,
    choice: str,
    backup: str,
    timeout: float,
    charge_feat_time: bool = True,
) -> SimResult:
    """Replay one instance: features, chosen solver, then backup.

    Feature-extraction time is charged first (when enabled).  If the
    chosen solver finishes inside the remaining budget, done; otherwise
    it consumes its recorded time (capped at what remains) and the
    backup gets whatever is left.  An unsolved outcome is reported at
    the full time limit.
    """
    try:
        i = rt.instances.index(instance)
    except ValueError:
        raise DatasetError(f"instance {instance!r} not in runtime table") from None
    (cj,) = _column_indices(rt, [choice])
    (bj,) = _column_indices(rt, [backup])
    spent = float(rt.feat_times[i]) if charge_feat_time else 0.0
    remaining = timeout - spent
    if remaining <= 0:
        return SimResult(False, timeout)
    if rt.solved[i, cj] and rt.times[i, cj] <= remaining:
        return SimResult(True, spent + float(rt.times[i, cj]))
    consumed = min(float(rt.times[i, cj]), remaining)
    spent += consumed
    remaining -= consumed
    if rt.solved[i, bj] and rt.times[i, bj] <= remaining:
        return SimResult(True, spent + float(rt.times[i, bj]))
    return SimResult(False, timeout)


def fold_plan(n_instances: int, seeds, n_folds: int):
    """Shuffled train/test index pairs: one split per fold per seed."""
    if n_instances < MIN_DATASET_SIZE:
        raise DatasetError(
            f"dataset too small to fold: {n_instances} instances, need {MIN_DATASET_SIZE}"
        )
    plan = []
    for seed in seeds:
        perm = np.random.default_rng(seed).permutation(n_instances)
        folds = np.array_split(perm, n_folds)
        for f in range(n_folds):
            test = folds[f]
            train = np.concatenate([folds[g] for g in range(n_folds) if g != f])
            plan.append((train, test))
    return plan


def _cv_knn(
    features: FeatureTable,
    rt: RuntimeTable,
    portfolio,
    backup: str,
    config: SimulationConfig,
    scaled: bool,
):
    plan = fold_plan(len(features.instances), config.seeds, config.n_folds)
    results = []
    counts: dict[str, int] = {name: 0 for name in features.instances}
    for train_idx, test_idx in plan:
        if scaled:
            scaler = Scaler.fit(features.matrix[train_idx])
            train_x = scaler.transform_matrix(features.matrix[train_idx])
        else:
            scaler = None
            train_x = features.matrix[train_idx]
        train_times = rt.times[train_idx]
        train_solved = rt.solved[train_idx]
        for i in test_idx:
            query = (
                scaler.transform(features.matrix[i]) if scaler else features.matrix[i]
            )
            choice = select_solver_knn(
                train_x,
                train_times,
                train_solved,
                rt.solvers,
                portfolio,
                query,
                config.k,
                config.timeout,
            )
            results.append(
                simulate_instance(
                    rt,
                    rt.instances[i],
                    choice,
                    backup,
                    config.timeout,
                    config.charge_feat_time,
                )
            )
            counts[rt.instances[i]] += 1
    return results, counts


def _gap(psi: float, base: Baselines) -> float | None:
    if base.vbs_psi <= base.sbs_psi:
        return None
    return (psi - base.sbs_psi) / (base.vbs_psi - base.sbs_psi)


def run_simulation(
    features: FeatureTable, runtimes: RuntimeTable, config: SimulationConfig
) -> SimulationReport:
    """Full harness: compose, baseline, and cross-validate per size."""
    features, rt = join_tables(features, runtimes)
    for n in config.portfolio_sizes:
        if not 2 <= n <= len(rt.solvers):
            raise ValueError(f"portfolio size {n} outside [2, {len(rt.solvers)}]")
    if config.backup is None:
        backup = baselines(rt, rt.solvers, config.timeout).sbs_solver
    else:
        _column_indices(rt, [config.backup])
        backup = config.backup
    entries: list[ReportEntry] = []
    scaling_delta: dict[int, float] = {}
    eval_counts: dict[str, int] = {}
    for n in config.portfolio_sizes:
        portfolio = compose_portfolio(rt, n, config.timeout)
        base = baselines(rt, portfolio, config.timeout)
        entries.append(
            ReportEntry("vbs", n, portfolio, base.vbs_psi, base.vbs_ast, _gap(base.vbs_psi, base))
        )
        entries.append(
            ReportEntry("sbs", n, portfolio, base.sbs_psi, base.sbs_ast, _gap(base.sbs_psi, base))
        )
        knn_results, counts = _cv_knn(features, rt, portfolio, backup, config, scaled=True)
        raw_results, _ = _cv_knn(features, rt, portfolio, backup, config, scaled=False)
        knn_psi, knn_ast = _psi_ast(knn_results)
        raw_psi, raw_ast = _psi_ast(raw_results)
        entries.append(ReportEntry("knn", n, portfolio, knn_psi, knn_ast, _gap(knn_psi, base)))
        entries.append(
            ReportEntry("knn_raw", n, portfolio, raw_psi, raw_ast, _gap(raw_psi, base))
        )
        scaling_delta[n] = knn_psi - raw_psi
        eval_counts = counts
    return SimulationReport(
        timeout=config.timeout,
        k=config.k,
        seeds=config.seeds,
        backup=backup,
        charge_feat_time=config.charge_feat_time,
        entries=tuple(entries),
        eval_counts=eval_counts,
        scaling_delta=scaling_delta,
    )
