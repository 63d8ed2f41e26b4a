"""Static feature computation over a parsed model.

Every category function returns plain floats in catalog order.  The
sentinel -1 marks undefined values (empty multisets, zero denominators).
Aggregations use ``math.fsum`` over deterministically ordered inputs, so
reordering constraints or renaming variables cannot change any output bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import CATEGORY_SIZES, FEATURE_NAMES, N_FEATURES, N_STATIC
from .errors import FznFeatError
from .fzn.ast import GoalKind, Model, VarRef
from .fzn.model import ModelIndex, collect_searches, mark_labeled
from .globals_table import GLOBAL_CLASSES, classify_global
from .graphs import GRAPH_BUDGET_S, VariableGraphInfo, compute_graph_block
from .stats import SENTINEL, ratio, stat_summary


def _safe_log(x: float) -> float:
    # Degenerate domains (zero-width float ranges) are excluded from log
    # products; ln would not be finite.
    return math.log(x) if x > 0.0 else 0.0


def variable_features(model: Model) -> list[float]:
    return _variable_features(ModelIndex.build(model))


def _variable_features(index: ModelIndex) -> list[float]:
    m = index.model
    doms = [v.domain.size() for v in index.free_vars]
    logdoms = [v.domain.log_size() if v.domain.size() > 0 else 0.0 for v in index.free_vars]
    degs = [index.deg[v.name] for v in index.free_vars]
    dom_deg = [d / g for d, g in zip(doms, degs) if g > 0]
    n_v = len(index.free_vars)
    n_const = sum(1 for v in m.variables.values() if v.is_constant)
    n_alias = sum(1 for v in m.variables.values() if v.is_alias)
    n_c = index.n_constraints
    out = [
        float(n_v),
        float(n_const),
        float(n_alias),
        ratio(n_alias + n_const, n_v),
        ratio(n_v, n_c),
        float(sum(1 for v in m.variables.values() if v.is_defined)),
        float(sum(1 for v in m.variables.values() if v.is_introduced)),
        math.fsum(sorted(logdoms)),
        math.fsum(sorted(_safe_log(g) for g in degs if g > 0)),
        math.fsum(sorted(doms)),
        float(sum(degs)),
        math.fsum(sorted(dom_deg)),
    ]
    out += stat_summary(doms).values()
    out += stat_summary(float(g) for g in degs).values()
    out += stat_summary(dom_deg).values()
    return out


_CON_PREFIXES = ("array", "bool", "int", "float", "set")


def domain_features(model: Model) -> list[float]:
    return _domain_features(ModelIndex.build(model))


def _domain_features(index: ModelIndex) -> list[float]:
    n_v = len(index.free_vars)
    n_c = index.n_constraints
    out: list[float] = []
    kind_counts = {
        "bool": sum(1 for v in index.free_vars if v.domain.is_bool),
        "float": sum(1 for v in index.free_vars if v.domain.is_float),
        "int": sum(1 for v in index.free_vars if v.domain.is_int),
        "set": sum(1 for v in index.free_vars if v.domain.is_set),
    }
    for kind, count in kind_counts.items():
        out += [float(count), ratio(count, n_v)]
    for prefix in _CON_PREFIXES:
        count = sum(1 for occ in index.constraints if occ.name.startswith(prefix + "_"))
        out += [float(count), ratio(count, n_c)]
    return out


_BOUNDS_Z = frozenset({"bounds", "boundsZ"})


def constraint_features(model: Model) -> list[float]:
    return _constraint_features(ModelIndex.build(model))


def _constraint_features(index: ModelIndex) -> list[float]:
    m = index.model
    n_c = index.n_constraints
    n_v = len(index.free_vars)
    dom_of = {v.name: v.domain for v in index.free_vars}

    def ann_count(match) -> float:
        return float(
            sum(1 for occ in index.constraints if any(match(a.name) for a in occ.constraint.annotations))
        )

    # dom(c) = ln of the product of the domain sizes over Var(c)
    dom_c: list[float] = []
    deg_c: list[int] = []
    ari_c: list[int] = []
    for occ in index.constraints:
        var_doms = [dom_of[name] for name in sorted(occ.var_set)]
        dom_c.append(math.fsum(d.log_size() if d.size() > 0 else 0.0 for d in var_doms))
        deg_c.append(occ.degree)
        ari_c.append(occ.arity)
    dom_deg = [d / g for d, g in zip(dom_c, deg_c)]
    out = [
        float(n_c),
        ratio(n_c, n_v),
        ann_count(lambda n: n in _BOUNDS_Z),
        ann_count(lambda n: n == "boundsR"),
        ann_count(lambda n: n == "boundsD"),
        ann_count(lambda n: n == "domain"),
        ann_count(lambda n: n == "priority"),
        # The per-constraint dom(c) is already a log, so the log-scale
        # product over C is the plain sum of the dom(c).
        math.fsum(sorted(dom_c)),
        math.fsum(sorted(_safe_log(float(g)) for g in deg_c)),
        math.fsum(sorted(dom_c)),
        float(sum(ari_c)),
        math.fsum(sorted(dom_deg)),
    ]
    out += stat_summary(dom_c).values()
    out += stat_summary(float(g) for g in deg_c).values()
    out += stat_summary(dom_deg).values()
    return out


def global_constraint_features(model: Model) -> list[float]:
    return _global_constraint_features(ModelIndex.build(model))


def _global_constraint_features(index: ModelIndex) -> list[float]:
    per_class = {cls: 0 for cls in GLOBAL_CLASSES}
    total = 0
    for occ in index.constraints:
        cls = classify_global(occ.name)
        if cls is not None:
            per_class[cls] += 1
            total += 1
    out = [float(total), ratio(total, index.n_constraints)]
    out += [float(per_class[cls]) for cls in GLOBAL_CLASSES]
    return out


_VAR_CHOICES = ("input_order", "first_fail")
_VAL_CHOICES = ("indomain_min", "indomain_max")


def solving_features(model: Model) -> list[float]:
    if not model.aliases_resolved:
        model = ModelIndex.build(model).model
    mark_labeled(model)
    searches = collect_searches(model.goal)
    labeled = sum(s.labeled_count(model) for s in searches)
    kind_counts = {"bool": 0, "int": 0, "set": 0}
    vc = {"input_order": 0, "first_fail": 0, "other": 0}
    valc = {"indomain_min": 0, "indomain_max": 0, "other": 0}
    for s in searches:
        kind_counts[s.kind] += 1
        if s.var_choice is not None:
            vc[s.var_choice if s.var_choice in _VAR_CHOICES else "other"] += 1
        if s.val_choice is not None:
            valc[s.val_choice if s.val_choice in _VAL_CHOICES else "other"] += 1
    return [
        float(labeled),
        float(model.goal.kind.value),
        float(kind_counts["bool"]),
        float(kind_counts["int"]),
        float(kind_counts["set"]),
        float(vc["input_order"]),
        float(vc["first_fail"]),
        float(vc["other"]),
        float(valc["indomain_min"]),
        float(valc["indomain_max"]),
        float(valc["other"]),
    ]


def objective_features(model: Model, vg: VariableGraphInfo | None = None) -> list[float]:
    index = ModelIndex.build(model)
    if vg is None:
        _, vg = compute_graph_block(index, None)
    return _objective_features(index, vg)


def _objective_features(index: ModelIndex, vg: VariableGraphInfo | None) -> list[float]:
    goal = index.model.goal
    if goal.kind is GoalKind.SATISFY:
        return [SENTINEL] * 12
    name = goal.objective.name if isinstance(goal.objective, VarRef) else None
    free = {v.name: v for v in index.free_vars}
    if name is None or name not in free:
        # Objective collapsed to a constant; nothing to measure.
        return [SENTINEL] * 12
    doms = sorted(v.domain.size() for v in index.free_vars)
    degs = sorted(float(index.deg[v.name]) for v in index.free_vars)
    n = len(doms)
    dom_mean = math.fsum(doms) / n
    dom_std = math.sqrt(math.fsum((d - dom_mean) ** 2 for d in doms) / n)
    deg_mean = math.fsum(degs) / n
    deg_std = math.sqrt(math.fsum((d - deg_mean) ** 2 for d in degs) / n)
    dom_v = free[name].domain.size()
    deg_v = float(index.deg[name])
    out = [
        dom_v,
        ratio(dom_v, dom_mean),
        (dom_v - dom_mean) / dom_std if dom_std else SENTINEL,
        ratio(dom_v, deg_v),
        deg_v,
        ratio(deg_v, deg_mean),
        (deg_v - deg_mean) / deg_std if deg_std else SENTINEL,
        ratio(deg_v, index.n_constraints),
    ]
    if vg is None:
        out += [SENTINEL] * 4
    else:
        de = float(vg.degree[name])
        di = float(vg.eccentricity[name])
        out += [de, di, ratio(de, di), ratio(di, de)]
    return out


@dataclass(frozen=True)
class FeatureVector:
    """All 155 features of one instance, in catalog order."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != N_FEATURES:
            raise FznFeatError(f"feature vector has {len(self.values)} values, expected {N_FEATURES}")
        for name, v in zip(FEATURE_NAMES, self.values):
            if not math.isfinite(v):
                raise FznFeatError(f"feature {name!r} is not finite: {v!r}")

    def static(self) -> tuple[float, ...]:
        return self.values[:N_STATIC]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))

    def by_category(self) -> dict[str, list[float]]:
        out: dict[str, list[float]] = {}
        start = 0
        for cat, size in CATEGORY_SIZES.items():
            out[cat] = list(self.values[start:start + size])
            start += size
        return out


def static_features(model: Model, graph_budget_s: float | None = GRAPH_BUDGET_S) -> list[float]:
    """The 144 static features: variables, domains, constraints, globals,
    graphs, solving and objective, in catalog order."""
    index = ModelIndex.build(model)
    values: list[float] = []
    values += _variable_features(index)
    values += _domain_features(index)
    values += _constraint_features(index)
    values += _global_constraint_features(index)
    graph_vals, vg = compute_graph_block(index, graph_budget_s)
    values += graph_vals
    values += solving_features(index.model)
    values += _objective_features(index, vg)
    assert len(values) == N_STATIC
    return values


def assemble_vector(static: list[float], dynamic: list[float]) -> FeatureVector:
    return FeatureVector(tuple(static) + tuple(dynamic))
