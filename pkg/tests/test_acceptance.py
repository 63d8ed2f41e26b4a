"""Top-level acceptance checks for the extraction and simulation toolkit.

Each test pins one externally visible guarantee: vector shape, oracle
agreement, sentinel conventions, invariance under model rewrites,
translation soundness, scaler geometry, portfolio optimality, simulation
bookkeeping, probe supervision, and the two-sided normalization report.
"""

import itertools
import math
import random
import sys
import textwrap
import time

import numpy as np
import pytest

from conftest import (
    FIXTURE_PATHS,
    generated_model_texts,
    generated_xcsp_texts,
    permute_and_rename,
)
from static_oracle import oracle_static_features

from fznfeat.catalog import CATEGORY_SIZES, N_FEATURES, N_STATIC
from fznfeat.cli import main
from fznfeat.dataio import (
    FeatureTable,
    RuntimeTable,
    write_feature_csv,
    write_runtime_csv,
)
from fznfeat.features import assemble_vector, static_features
from fznfeat.fzn import parse_flatzinc, parse_flatzinc_file
from fznfeat.graphs import graph_features
from fznfeat.portfolio import (
    SimulationConfig,
    compose_portfolio,
    run_simulation,
)
from fznfeat.preprocess import Scaler
from fznfeat.probe import DynamicFeatures, SolverAdapter, dynamic_features, run_probe
from fznfeat.stats import SENTINEL

EXPECTED_CATEGORY_COUNTS = {
    "variables": 27,
    "domains": 18,
    "constraints": 27,
    "global_constraints": 29,
    "graphs": 20,
    "solving": 11,
    "objective": 12,
    "dynamic": 11,
}


def _corpus_models():
    models = [parse_flatzinc_file(p) for p in FIXTURE_PATHS]
    models += [parse_flatzinc(text) for _, text in generated_model_texts(15)]
    return models


def test_every_vector_has_155_features_in_fixed_categories():
    models = _corpus_models()
    assert len(models) >= 20
    start = time.perf_counter()
    for model in models:
        vector = assemble_vector(static_features(model), DynamicFeatures().values())
        assert len(vector.values) == N_FEATURES == 155
        counts = {cat: len(block) for cat, block in vector.by_category().items()}
        assert counts == EXPECTED_CATEGORY_COUNTS
    elapsed = time.perf_counter() - start
    assert CATEGORY_SIZES == EXPECTED_CATEGORY_COUNTS
    assert elapsed < 1.0, f"cardinality sweep took {elapsed:.3f} s"


def test_golden_fixtures_match_independent_oracle():
    assert len(FIXTURE_PATHS) == 5
    for path in FIXTURE_PATHS:
        model = parse_flatzinc_file(path)
        got = static_features(model, graph_budget_s=None)
        want = oracle_static_features(model)
        assert len(got) == len(want) == N_STATIC
        for idx, (g, w) in enumerate(zip(got, want)):
            if float(w).is_integer():
                assert g == w, f"{path.name}[{idx}]: {g} != {w}"
            else:
                assert math.isclose(g, w, rel_tol=1e-9, abs_tol=1e-12), (
                    f"{path.name}[{idx}]: {g} != {w}"
                )


def test_sentinel_conventions():
    # Satisfaction goal: all twelve objective features read -1.
    satisfaction = parse_flatzinc_file(FIXTURE_PATHS[0])
    static = static_features(satisfaction)
    assert static[132:144] == [SENTINEL] * 12

    # Exhausted graph budget: all twenty graph features read -1.
    assert graph_features(satisfaction, budget_s=0.0) == [SENTINEL] * 20

    # Failed probe: the eight search counters read -1 (timings stay real).
    feats = dynamic_features(
        None, n_constraints=3, adapter=None, t_compile=0.1, t_static=0.2
    )
    assert feats.values()[:8] == [SENTINEL] * 8
    assert feats.values()[8:] == [0.1, 0.2, pytest.approx(0.3)]


def test_static_vector_invariant_under_permutation_and_renaming():
    trials = 0
    for fi, path in enumerate(FIXTURE_PATHS):
        model = parse_flatzinc_file(path)
        reference = tuple(static_features(model, graph_budget_s=None))
        for t in range(20):
            rng = random.Random(17_000 + 100 * fi + t)
            twin = permute_and_rename(parse_flatzinc_file(path), rng)
            got = tuple(static_features(twin, graph_budget_s=None))
            assert got == reference, f"{path.name} trial {t} not bit-identical"
            trials += 1
    assert trials == 100


def test_xcsp_translation_preserves_solution_sets():
    from fznfeat.xcsp.instance import parse_xcsp
    from fznfeat.xcsp.verify import solution_sets_match

    fixtures = generated_xcsp_texts(20)
    assert len(fixtures) == 20
    start = time.perf_counter()
    for name, text in fixtures:
        inst = parse_xcsp(text)
        assert len(inst.variables) <= 4
        assert all(len(d.values) <= 4 for d in inst.domains.values())
        assert solution_sets_match(inst), name
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"translation sweep took {elapsed:.3f} s"


def test_scaler_drops_41_constant_columns_and_bounds_output():
    rng = np.random.default_rng(17)
    matrix = rng.normal(size=(12, N_FEATURES))
    constant = rng.choice(N_FEATURES, size=41, replace=False)
    matrix[:, constant] = SENTINEL  # e.g. features never measured on this corpus
    scaler = Scaler.fit(matrix)
    assert len(scaler.kept) == N_FEATURES - 41 == 114
    assert set(scaler.kept) == set(range(N_FEATURES)) - set(int(c) for c in constant)
    transformed = scaler.transform_matrix(rng.normal(scale=50.0, size=(6, N_FEATURES)))
    assert transformed.shape == (6, 114)
    assert np.all(transformed >= -1.0) and np.all(transformed <= 1.0)
    train_back = scaler.transform_matrix(matrix)
    assert np.all(train_back >= -1.0) and np.all(train_back <= 1.0)


def _oracle_portfolio(rt: RuntimeTable, n: int, timeout: float):
    best = None
    for subset in itertools.combinations(sorted(rt.solvers), n):
        cols = [rt.solvers.index(s) for s in subset]
        eff = np.where(rt.solved[:, cols], rt.times[:, cols], timeout)
        key = (
            -int(rt.solved[:, cols].any(axis=1).sum()),
            float(eff.min(axis=1).mean()),
            subset,
        )
        if best is None or key < best:
            best = key
    return best[2]


def test_portfolio_composition_matches_oracle_including_ties():
    rng = np.random.default_rng(2024)
    timeout = 100.0
    solvers = tuple(f"s{j}" for j in range(6))
    for trial in range(200):
        solved = rng.random((15, 6)) < 0.55
        # Small integer times make coverage and time ties common.
        times = rng.integers(1, 5, size=(15, 6)).astype(float)
        rt = RuntimeTable(
            instances=tuple(f"i{k}" for k in range(15)),
            solvers=solvers,
            times=times,
            solved=solved,
            feat_times=np.zeros(15),
        )
        for n in range(2, 7):
            got = compose_portfolio(rt, n, timeout)
            want = _oracle_portfolio(rt, n, timeout)
            assert got == want, f"trial {trial}, n={n}: {got} != {want}"


def _clustered_dataset():
    """30 instances in 3 tight clusters, each owned by one fast solver."""
    n = 30
    matrix = np.zeros((n, N_FEATURES))
    for c in range(3):
        rows = slice(10 * c, 10 * (c + 1))
        matrix[rows, 0] = 10.0 * c
        matrix[rows, 1] = 10.0 * c
    matrix[:, 2] = np.tile(np.linspace(-0.1, 0.1, 10), 3)  # within-cluster jitter
    instances = tuple(f"i{k:02d}" for k in range(n))
    features = FeatureTable(instances, matrix)

    solved = np.zeros((n, 3), dtype=bool)
    times = np.zeros((n, 3))
    solved[0:10, 0] = True  # s1 owns cluster A ...
    times[0:10, 0] = 1.0
    solved[20:30, 0] = True  # ... and also covers cluster C, slowly
    times[20:30, 0] = 500.0
    solved[10:20, 1] = True  # s2 owns cluster B
    times[10:20, 1] = 1.0
    solved[20:30, 2] = True  # s3 owns cluster C
    times[20:30, 2] = 1.0
    rt = RuntimeTable(
        instances=instances,
        solvers=("s1", "s2", "s3"),
        times=times,
        solved=solved,
        feat_times=np.zeros(n),
    )
    return features, rt


def test_simulation_psi_ordering_every_size_and_seed():
    features, rt = _clustered_dataset()
    for seed in range(5):
        config = SimulationConfig(
            timeout=1000.0, k=3, seeds=(seed,), portfolio_sizes=(2, 3)
        )
        report = run_simulation(features, rt, config)
        for n in (2, 3):
            vbs = report.entry("vbs", n).psi
            knn = report.entry("knn", n).psi
            sbs = report.entry("sbs", n).psi
            assert vbs >= knn >= sbs, f"seed {seed}, n={n}: {vbs}, {knn}, {sbs}"


def test_simulation_knn_matches_oracle_on_clusterable_data():
    features, rt = _clustered_dataset()
    config = SimulationConfig(timeout=1000.0, k=3, portfolio_sizes=(2, 3))
    report = run_simulation(features, rt, config)
    for n in (2, 3):
        assert report.entry("knn", n).psi == report.entry("vbs", n).psi == 100.0
    # 5 seeds x 5 folds: every instance is tested exactly 5 times.
    assert len(report.eval_counts) == 30
    assert set(report.eval_counts.values()) == {5}


def test_hung_probe_killed_within_grace(tmp_path):
    script = tmp_path / "sleeper.py"
    script.write_text(textwrap.dedent("""\
        import time
        time.sleep(10)
        print("solutions: 1")
    """))
    fzn = tmp_path / "toy.fzn"
    fzn.write_text("var 1..2: x;\nsolve satisfy;\n")
    adapter = SolverAdapter(executable=sys.executable, args=(str(script), "{fzn}"))
    start = time.monotonic()
    result = run_probe(str(fzn), adapter, cap_s=2.0, kill_after_s=5.0)
    wall = time.monotonic() - start
    assert result.killed and not result.ok
    assert wall < 6.0, f"kill took {wall:.2f} s, over the 5 s + 1 s grace"

    feats = dynamic_features(
        str(fzn), n_constraints=1, adapter=adapter,
        t_compile=0.0, t_static=0.0, cap_s=2.0, kill_after_s=5.0,
    )
    assert feats.values()[:8] == [SENTINEL] * 8  # the run counts as failed
    assert feats.t_total >= 5.0  # the wasted wall time is still accounted


def test_simulate_command_reports_scaled_and_raw_selector(tmp_path, capsys):
    features, rt = _clustered_dataset()
    fpath = tmp_path / "features.csv"
    rpath = tmp_path / "runtimes.csv"
    write_feature_csv(fpath, list(features.instances), features.matrix)
    write_runtime_csv(rpath, rt, timeout=1000.0)
    out = tmp_path / "report"
    code = main(
        ["simulate", "--features", str(fpath), "--runtimes", str(rpath),
         "-o", str(out), "--timeout", "1000", "--k", "3", "--sizes", "2,3"]
    )
    assert code == 0
    csv_text = (out / "report.csv").read_text()
    rows = [line.split(",") for line in csv_text.strip().splitlines()[1:]]
    approaches = {(row[0], row[1]) for row in rows}
    for n in ("2", "3"):
        assert ("knn", n) in approaches and ("knn_raw", n) in approaches
    txt = (out / "report.txt").read_text()
    assert "normalization effect at n=2" in txt
    assert "normalization effect at n=3" in txt
    assert "scaled PSI - raw PSI" in txt
    for figure in ("psi.png", "ast.png", "normalization.png"):
        assert (out / figure).exists(), figure
    assert "k-NN (scaled)" in capsys.readouterr().out
