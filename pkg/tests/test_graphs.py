"""Graph feature unit: construction, statistics oracles, budget handling."""

import math
import random

from static_oracle import eccentricities, triangle_clustering

from fznfeat.fzn import parse_flatzinc
from fznfeat.fzn.model import ModelIndex
from fznfeat.graphs import (
    Deadline,
    GraphTimeout,
    UndirectedGraph,
    build_constraint_graph,
    build_variable_graph,
    clustering_coefficients,
    compute_graph_block,
    graph_features,
    node_diameters,
)


def _random_graph(n: int, p: float, seed: int) -> UndirectedGraph:
    rng = random.Random(seed)
    g = UndirectedGraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def _adj_matrix(g: UndirectedGraph):
    return [[1 if v in g.adj[u] else 0 for v in range(g.n)] for u in range(g.n)]


def test_shared_variable_makes_cg_edge():
    src = """\
var 1..3: x;
var 1..3: y;
var 1..3: z;
constraint int_le(x, y);
constraint int_le(x, z);
constraint int_le(y, 2);
solve satisfy;
"""
    index = ModelIndex.build(parse_flatzinc(src))
    cg = build_constraint_graph(index)
    assert cg.n == 3
    assert cg.adj[0] == {1, 2}  # shares x with c1, y with c2
    assert cg.adj[1] == {0}
    assert cg.adj[2] == {0}


def test_one_constraint_makes_vg_clique():
    src = """\
var 1..3: a;
var 1..3: b;
var 1..3: c;
constraint all_different_int([a, b, c]);
solve satisfy;
"""
    index = ModelIndex.build(parse_flatzinc(src))
    vg, node_of = build_variable_graph(index)
    assert vg.edge_count() == 3
    assert all(vg.degree(i) == 2 for i in node_of.values())


def test_unconstrained_variable_is_isolated():
    src = "var 1..3: a;\nvar 1..3: b;\nconstraint int_le(a, 2);\nsolve satisfy;\n"
    index = ModelIndex.build(parse_flatzinc(src))
    vg, node_of = build_variable_graph(index)
    assert vg.degree(node_of["b"]) == 0


def test_triangle_clustering_is_one():
    g = UndirectedGraph(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    g.add_edge(0, 2)
    assert clustering_coefficients(g) == [1.0, 1.0, 1.0]


def test_path_clustering_is_zero():
    g = UndirectedGraph(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    assert clustering_coefficients(g) == [0.0, 0.0, 0.0]


def test_path_diameters():
    g = UndirectedGraph(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    assert node_diameters(g) == [2.0, 1.0, 2.0]


def test_disconnected_pairs_contribute_zero():
    g = UndirectedGraph(4)
    g.add_edge(0, 1)
    g.add_edge(2, 3)
    assert node_diameters(g) == [1.0, 1.0, 1.0, 1.0]


def test_clustering_matches_triangle_oracle():
    for seed in range(10):
        g = _random_graph(9, 0.4, seed)
        got = clustering_coefficients(g)
        want = triangle_clustering(_adj_matrix(g))
        assert all(math.isclose(a, b) for a, b in zip(got, want))


def test_diameters_match_floyd_warshall_oracle():
    for seed in range(10):
        g = _random_graph(8, 0.3, seed)
        got = node_diameters(g)
        want = eccentricities(_adj_matrix(g))
        assert got == want


def test_degree_sum_even():
    for seed in range(5):
        g = _random_graph(10, 0.5, seed)
        assert sum(g.degrees()) % 2 == 0


MODEL = """\
var 1..3: a;
var 1..3: b;
var 1..3: c;
constraint all_different_int([a, b, c]);
constraint int_le(a, b);
solve satisfy;
"""


def test_zero_budget_all_sentinels():
    values = graph_features(parse_flatzinc(MODEL), budget_s=0.0)
    assert values == [-1.0] * 20


def test_block_success_and_info():
    index = ModelIndex.build(parse_flatzinc(MODEL))
    values, info = compute_graph_block(index, budget_s=30.0)
    assert len(values) == 20
    assert all(math.isfinite(v) for v in values)
    assert info.degree == {"a": 2, "b": 2, "c": 2}
    assert info.eccentricity == {"a": 1.0, "b": 1.0, "c": 1.0}


def test_empty_constraint_set_cg_summaries_sentinel():
    values = graph_features(parse_flatzinc("var 1..3: a;\nsolve satisfy;\n"), budget_s=30.0)
    assert values[:10] == [-1.0] * 10  # CG degree + clustering summaries
    assert values[10:] == [0.0, 0.0, 0.0, -1.0, 0.0] * 2  # single isolated node


def test_deadline_fires_on_large_work():
    deadline = Deadline(1e-4)
    fired = False
    try:
        for _ in range(10_000_000):
            deadline.check()
    except GraphTimeout:
        fired = True
    assert fired


def test_tiny_budget_large_model_degrades_to_sentinels():
    lines = [f"var 1..9: v{i};" for i in range(120)]
    lines += [
        f"constraint all_different_int([{', '.join(f'v{j}' for j in range(i, i + 30))}]);"
        for i in range(0, 90, 3)
    ]
    lines.append("solve satisfy;")
    model = parse_flatzinc("\n".join(lines) + "\n")
    values = graph_features(model, budget_s=1e-6)
    assert values == [-1.0] * 20
