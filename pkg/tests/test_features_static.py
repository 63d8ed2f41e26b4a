"""Static feature unit tests against hand-computed values and the oracle."""

import math

from static_oracle import oracle_static_features

from fznfeat import parse_flatzinc, static_features
from fznfeat.catalog import FEATURE_NAMES, N_STATIC
from fznfeat.features import (
    constraint_features,
    domain_features,
    global_constraint_features,
    objective_features,
    solving_features,
    variable_features,
)

from conftest import generated_model_texts


def _named(model_text: str) -> dict[str, float]:
    values = static_features(parse_flatzinc(model_text), graph_budget_s=30.0)
    return dict(zip(FEATURE_NAMES, values))


SINGLE = """\
var 1..3: x;
constraint int_le(x, 2);
solve satisfy;
"""


def test_single_variable_block():
    d = _named(SINGLE)
    assert d["n_vars"] == 1
    assert d["sum_dom"] == 3
    assert d["sum_deg"] == 1
    assert math.isclose(d["log_prod_dom"], math.log(3))
    assert d["dom_avg"] == 3
    assert d["dom_deg_avg"] == 3


def test_no_constraints_ratio_sentinel():
    d = _named("var 1..3: x;\nsolve satisfy;\n")
    assert d["ratio_vars_cons"] == -1
    assert d["n_cons"] == 0
    assert d["c_dom_min"] == -1  # empty multiset summary


def test_domain_kind_counts():
    src = """\
var bool: p;
var 1..3: x;
var 1..3: y;
var 1..3: z;
constraint bool2int(p, x);
constraint int_le(y, z);
solve satisfy;
"""
    d = _named(src)
    assert d["n_bool_vars"] == 1
    assert d["n_int_vars"] == 3
    assert d["ratio_bool_vars"] == 0.25


def test_constraint_prefix_classification():
    src = """\
var 1..3: x;
var bool: p;
var bool: q;
array [1..2] of var bool: r;
constraint int_le(x, 2);
constraint bool_or(p, q, true);
constraint array_bool_and(r, p);
solve satisfy;
"""
    d = _named(src)
    assert d["n_int_cons"] == 1
    assert d["n_bool_cons"] == 1
    assert d["n_array_cons"] == 1
    assert math.isclose(d["ratio_int_cons"], 1 / 3)


def test_constraint_dom_is_log_of_product():
    src = """\
var 1..3: x;
var 1..4: y;
constraint int_le(x, y);
solve satisfy;
"""
    d = _named(src)
    assert math.isclose(d["c_dom_min"], math.log(12))
    assert d["c_deg_min"] == 2
    assert d["c_log_prod_dom"] == d["c_sum_dom"]


def test_annotation_counts_merge_bounds_variants():
    src = """\
var 1..3: x;
var 1..3: y;
constraint int_le(x, y) :: bounds;
constraint int_lt(x, y) :: boundsZ;
constraint int_ne(x, y) :: boundsR;
constraint int_eq_reif(x, y, true) :: domain;
solve satisfy;
"""
    d = _named(src)
    assert d["ann_bounds_z"] == 2
    assert d["ann_bounds_r"] == 1
    assert d["ann_domain"] == 1
    assert d["ann_priority"] == 0


def test_bool_lin_family_grouped():
    src = """\
var bool: a;
var bool: b;
constraint bool_lin_eq([1, 1], [a, b], 1);
constraint bool_lin_le([1, 1], [a, b], 1);
constraint bool_lin_gt([1, 2], [a, b], 0);
solve satisfy;
"""
    d = _named(src)
    assert d["gc_bool_lin"] == 3
    assert d["n_globals"] == 3
    assert d["ratio_globals"] == 1.0


def test_prefixed_and_reified_global_names():
    src = """\
var 1..3: x;
var 1..3: y;
var bool: p;
constraint gecode_all_different_int([x, y]);
constraint fzn_count_eq([x, y], 2, 1);
constraint int_eq_reif(x, y, p);
solve satisfy;
"""
    d = _named(src)
    assert d["gc_alldifferent"] == 1
    assert d["gc_count"] == 1
    assert d["n_globals"] == 2  # int_eq_reif is not a global


def test_solving_heuristic_buckets():
    src = """\
var 1..3: x;
var 1..3: y;
solve :: int_search([x, y], smallest, indomain_split, complete) satisfy;
"""
    d = _named(src)
    assert d["vc_other"] == 1
    assert d["valc_other"] == 1
    assert d["n_labeled_vars"] == 2
    assert d["goal_code"] == 1


def test_objective_satisfaction_sentinels():
    d = _named(SINGLE)
    obj = [v for k, v in d.items() if k.startswith("obj_")]
    assert obj == [-1.0] * 12


def test_objective_values():
    src = """\
var 1..10: v;
var 1..5: w;
constraint int_le(v, w);
constraint int_lt(w, 5);
solve minimize v;
"""
    d = _named(src)
    assert d["obj_dom"] == 10
    # mean dom = (10 + 5) / 2 = 7.5
    assert math.isclose(d["obj_dom_avg"], 10 / 7.5)
    assert d["obj_deg"] == 1
    assert math.isclose(d["obj_deg_cons"], 0.5)
    assert d["obj_vg_deg"] == 1
    assert d["obj_vg_diam"] == 1


def test_objective_isolated_in_graph():
    src = """\
var 1..10: v;
var 1..5: w;
constraint int_lt(w, 5);
constraint int_le(v, 9);
solve minimize v;
"""
    d = _named(src)
    assert d["obj_vg_deg"] == 0
    assert d["obj_vg_diam"] == 0
    assert d["obj_deg_diam"] == -1
    assert d["obj_diam_deg"] == -1


def test_category_sizes_sum_to_static():
    values = static_features(parse_flatzinc(SINGLE))
    assert len(values) == N_STATIC


def test_per_category_wrappers_agree_with_full_vector():
    model = parse_flatzinc(SINGLE)
    full = static_features(model, graph_budget_s=30.0)
    assert full[:27] == variable_features(model)
    assert full[27:45] == domain_features(model)
    assert full[45:72] == constraint_features(model)
    assert full[72:101] == global_constraint_features(model)
    assert full[121:132] == solving_features(model)
    assert full[132:144] == objective_features(model)


def test_generated_models_match_oracle():
    for name, text in generated_model_texts():
        model = parse_flatzinc(text)
        got = static_features(model, graph_budget_s=30.0)
        want = oracle_static_features(model)
        for i, (g, w) in enumerate(zip(got, want)):
            assert math.isclose(g, w, rel_tol=1e-9, abs_tol=1e-12), (
                name,
                FEATURE_NAMES[i],
                g,
                w,
            )


def test_all_values_finite_on_generated_models():
    for _, text in generated_model_texts():
        for v in static_features(parse_flatzinc(text), graph_budget_s=30.0):
            assert math.isfinite(v)
