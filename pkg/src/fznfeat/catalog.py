"""The feature catalog: 155 named slots in a fixed order.

Categories and cardinalities: variables 27, domains 18, constraints 27,
global_constraints 29, graphs 20, solving 11, objective 12, dynamic 11.
The first 144 are static; the trailing 11 come from the solving probe.
Vectors are plain lists of finite floats in catalog order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .globals_table import GLOBAL_CLASSES

CATEGORY_SIZES: dict[str, int] = {
    "variables": 27,
    "domains": 18,
    "constraints": 27,
    "global_constraints": 29,
    "graphs": 20,
    "solving": 11,
    "objective": 12,
    "dynamic": 11,
}

N_FEATURES = 155
N_STATIC = 144


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    category: str
    formula: str


def _summary(prefix: str, category: str, what: str) -> list[FeatureSpec]:
    return [
        FeatureSpec(f"{prefix}_min", category, f"min of {what}"),
        FeatureSpec(f"{prefix}_max", category, f"max of {what}"),
        FeatureSpec(f"{prefix}_avg", category, f"mean of {what}"),
        FeatureSpec(f"{prefix}_cv", category, f"coefficient of variation of {what}"),
        FeatureSpec(f"{prefix}_ent", category, f"entropy of {what}"),
    ]


def _build_catalog() -> tuple[FeatureSpec, ...]:
    specs: list[FeatureSpec] = []
    c = "variables"
    specs += [
        FeatureSpec("n_vars", c, "|V|: number of unbounded variables"),
        FeatureSpec("n_constants", c, "number of variables bound to a constant"),
        FeatureSpec("n_aliases", c, "number of variables aliasing another variable"),
        FeatureSpec("ratio_bound_vars", c, "(aliases + constants) / |V|"),
        FeatureSpec("ratio_vars_cons", c, "|V| / |C|"),
        FeatureSpec("n_defined_vars", c, "variables annotated as functionally defined"),
        FeatureSpec("n_introduced_vars", c, "variables introduced by the compiler"),
        FeatureSpec("log_prod_dom", c, "sum over V of ln dom(x)"),
        FeatureSpec("log_prod_deg", c, "sum over constrained vars of ln deg(x)"),
        FeatureSpec("sum_dom", c, "sum over V of dom(x)"),
        FeatureSpec("sum_deg", c, "sum over V of deg(x)"),
        FeatureSpec("sum_dom_deg", c, "sum over constrained vars of dom(x)/deg(x)"),
    ]
    specs += _summary("dom", c, "{dom(x) : x in V}")
    specs += _summary("deg", c, "{deg(x) : x in V}")
    specs += _summary("dom_deg", c, "{dom(x)/deg(x) : x in V, deg(x) > 0}")

    c = "domains"
    for kind in ("bool", "float", "int", "set"):
        specs.append(FeatureSpec(f"n_{kind}_vars", c, f"number of {kind} variables in V"))
        specs.append(FeatureSpec(f"ratio_{kind}_vars", c, f"{kind} variables / |V|"))
    for kind in ("array", "bool", "int", "float", "set"):
        specs.append(FeatureSpec(f"n_{kind}_cons", c, f"constraints with builtin prefix {kind}_"))
        specs.append(FeatureSpec(f"ratio_{kind}_cons", c, f"{kind} constraints / |C|"))

    c = "constraints"
    specs += [
        FeatureSpec("n_cons", c, "|C|: constraints constraining at least one variable"),
        FeatureSpec("ratio_cons_vars", c, "|C| / |V|"),
        FeatureSpec("ann_bounds_z", c, "constraints annotated bounds or boundsZ"),
        FeatureSpec("ann_bounds_r", c, "constraints annotated boundsR"),
        FeatureSpec("ann_bounds_d", c, "constraints annotated boundsD"),
        FeatureSpec("ann_domain", c, "constraints annotated domain"),
        FeatureSpec("ann_priority", c, "constraints annotated priority"),
        FeatureSpec("c_log_prod_dom", c, "sum over C of dom(c), dom(c) being log-scale"),
        FeatureSpec("c_log_prod_deg", c, "sum over C of ln deg(c)"),
        FeatureSpec("c_sum_dom", c, "sum over C of dom(c)"),
        FeatureSpec("c_sum_ari", c, "sum over C of ari(c)"),
        FeatureSpec("c_sum_dom_deg", c, "sum over C of dom(c)/deg(c)"),
    ]
    specs += _summary("c_dom", c, "{dom(c) : c in C}")
    specs += _summary("c_deg", c, "{deg(c) : c in C}")
    specs += _summary("c_dom_deg", c, "{dom(c)/deg(c) : c in C}")

    c = "global_constraints"
    specs.append(FeatureSpec("n_globals", c, "global-constraint occurrences in C"))
    specs.append(FeatureSpec("ratio_globals", c, "global occurrences / |C|"))
    for cls in GLOBAL_CLASSES:
        specs.append(FeatureSpec(f"gc_{cls}", c, f"occurrences of class {cls}"))

    c = "graphs"
    specs += _summary("cg_deg", c, "constraint-graph node degrees")
    specs += _summary("cg_cc", c, "constraint-graph clustering coefficients")
    specs += _summary("vg_deg", c, "variable-graph node degrees")
    specs += _summary("vg_diam", c, "variable-graph node diameters")

    c = "solving"
    specs += [
        FeatureSpec("n_labeled_vars", c, "variables listed in search annotations"),
        FeatureSpec("goal_code", c, "1 satisfy, 2 minimize, 3 maximize"),
        FeatureSpec("n_bool_search", c, "bool_search annotations"),
        FeatureSpec("n_int_search", c, "int_search annotations"),
        FeatureSpec("n_set_search", c, "set_search annotations"),
        FeatureSpec("vc_input_order", c, "searches choosing variables by input order"),
        FeatureSpec("vc_first_fail", c, "searches choosing variables by first-fail"),
        FeatureSpec("vc_other", c, "searches with another variable choice"),
        FeatureSpec("valc_indomain_min", c, "searches assigning the domain minimum"),
        FeatureSpec("valc_indomain_max", c, "searches assigning the domain maximum"),
        FeatureSpec("valc_other", c, "searches with another value choice"),
    ]

    c = "objective"
    specs += [
        FeatureSpec("obj_dom", c, "dom(v) of the objective variable"),
        FeatureSpec("obj_dom_avg", c, "dom(v) / mean dom over V"),
        FeatureSpec("obj_dom_std", c, "(dom(v) - mean dom) / std dom"),
        FeatureSpec("obj_dom_deg", c, "dom(v) / deg(v)"),
        FeatureSpec("obj_deg", c, "deg(v) of the objective variable"),
        FeatureSpec("obj_deg_avg", c, "deg(v) / mean deg over V"),
        FeatureSpec("obj_deg_std", c, "(deg(v) - mean deg) / std deg"),
        FeatureSpec("obj_deg_cons", c, "deg(v) / |C|"),
        FeatureSpec("obj_vg_deg", c, "variable-graph degree of v"),
        FeatureSpec("obj_vg_diam", c, "variable-graph diameter of v"),
        FeatureSpec("obj_deg_diam", c, "VG degree / VG diameter of v"),
        FeatureSpec("obj_diam_deg", c, "VG diameter / VG degree of v"),
    ]

    c = "dynamic"
    specs += [
        FeatureSpec("d_solutions", c, "solutions found by the probe"),
        FeatureSpec("d_propagations", c, "propagations performed"),
        FeatureSpec("d_props_per_con", c, "propagations / |C|"),
        FeatureSpec("d_nodes", c, "search nodes explored"),
        FeatureSpec("d_failures", c, "failed nodes"),
        FeatureSpec("d_fails_per_node", c, "failures / nodes"),
        FeatureSpec("d_peak_depth", c, "peak search depth"),
        FeatureSpec("d_peak_memory", c, "peak memory as reported by the solver"),
        FeatureSpec("t_compile", c, "seconds to flatten the source model"),
        FeatureSpec("t_static", c, "seconds to compute the static features"),
        FeatureSpec("t_total", c, "compile + static + probe wall time"),
    ]
    return tuple(specs)


CATALOG: tuple[FeatureSpec, ...] = _build_catalog()
FEATURE_NAMES: tuple[str, ...] = tuple(s.name for s in CATALOG)
FEATURE_INDEX: dict[str, int] = {s.name: i for i, s in enumerate(CATALOG)}

assert len(CATALOG) == N_FEATURES
assert sum(CATEGORY_SIZES.values()) == N_FEATURES
assert len(FEATURE_INDEX) == N_FEATURES  # names are unique


def category_slices() -> dict[str, slice]:
    out: dict[str, slice] = {}
    start = 0
    for cat, size in CATEGORY_SIZES.items():
        out[cat] = slice(start, start + size)
        start += size
    return out


def catalog_table() -> str:
    """The catalog as a readable text table: index, name, category, formula."""
    rows = [f"{i:>3}  {s.name:<20} {s.category:<19} {s.formula}" for i, s in enumerate(CATALOG)]
    header = f"{'idx':>3}  {'name':<20} {'category':<19} formula"
    return "\n".join([header, "-" * len(header)] + rows)
