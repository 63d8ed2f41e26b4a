"""Brute-force solution enumeration on both sides of the translation."""

from __future__ import annotations

import itertools

from ..errors import XcspError
from .instance import (
    GlobalAllDifferent,
    GlobalCumulative,
    GlobalElement,
    GlobalLinear,
    PredicateApplication,
    RelationReference,
    XcspConstraint,
    XcspInstance,
)
from .minizinc_subset import constraint_holds, parse_subset
from .predicates import Undefined, evaluate, substitute
from .translate import translate_to_minizinc

MAX_ASSIGNMENTS = 2_000_000


def _term_value(term, env: dict[str, int]) -> int:
    return env[term[1]] if term[0] == "var" else term[1]


def _holds(con: XcspConstraint, inst: XcspInstance, env: dict[str, int]) -> bool:
    payload = con.payload
    if isinstance(payload, RelationReference):
        rel = inst.relations[payload.relation]
        values = tuple(env[name] for name in con.scope)
        return (values in rel.tuples) == (rel.semantics == "supports")
    if isinstance(payload, PredicateApplication):
        pred = inst.predicates[payload.predicate]
        bindings = {
            formal: ("var", t[1]) if t[0] == "var" else ("int", t[1])
            for formal, t in zip(pred.parameters, payload.args)
        }
        try:
            return bool(evaluate(substitute(pred.expression, bindings), env))
        except Undefined:
            return False
    if isinstance(payload, GlobalAllDifferent):
        values = [env[name] for name in payload.variables]
        return len(values) == len(set(values))
    if isinstance(payload, GlobalLinear):
        total = sum(coeff * _term_value(t, env) for coeff, t in payload.terms)
        rhs = _term_value(payload.rhs, env)
        return {
            "eq": total == rhs,
            "ne": total != rhs,
            "lt": total < rhs,
            "le": total <= rhs,
            "gt": total > rhs,
            "ge": total >= rhs,
        }[payload.op]
    if isinstance(payload, GlobalElement):
        idx = _term_value(payload.index, env)
        if not 1 <= idx <= len(payload.table):
            return False
        return _term_value(payload.table[idx - 1], env) == _term_value(payload.value, env)
    if isinstance(payload, GlobalCumulative):
        spans = []
        heights = []
        for origin, duration, height in payload.tasks:
            o = _term_value(origin, env)
            d = _term_value(duration, env)
            spans.append((o, o + d))
            heights.append(_term_value(height, env))
        limit = _term_value(payload.limit, env)
        for t in sorted({t for span in spans for t in span}):
            load = sum(h for (lo, hi), h in zip(spans, heights) if lo <= t < hi)
            if load > limit:
                return False
        return True
    raise XcspError(f"cannot evaluate constraint {con.name!r}")


def _check_size(domains: list[tuple[int, ...]], cap: int) -> None:
    total = 1
    for dom in domains:
        total *= len(dom)
        if total > cap:
            raise XcspError(f"search space exceeds {cap} assignments; refusing to enumerate")


def enumerate_xcsp(inst: XcspInstance, cap: int = MAX_ASSIGNMENTS) -> frozenset[tuple[int, ...]]:
    """All solutions of the instance, as value tuples in variable order."""
    order = inst.variable_order()
    domains = [inst.domain_of(name) for name in order]
    _check_size(domains, cap)
    solutions = set()
    for values in itertools.product(*domains):
        env = dict(zip(order, values))
        if all(_holds(con, inst, env) for con in inst.constraints):
            solutions.add(values)
    return frozenset(solutions)


def enumerate_translated(
    mzn_text: str, order: list[str] | None = None, cap: int = MAX_ASSIGNMENTS
) -> frozenset[tuple[int, ...]]:
    """All solutions of an emitted MiniZinc model, by independent re-parse."""
    model = parse_subset(mzn_text)
    names = order if order is not None else list(model.variables)
    domains = [model.variables[name] for name in names]
    _check_size(domains, cap)
    solutions = set()
    for values in itertools.product(*domains):
        env = dict(zip(names, values))
        if all(constraint_holds(con, env) for con in model.constraints):
            solutions.add(values)
    return frozenset(solutions)


def solution_sets_match(inst: XcspInstance, cap: int = MAX_ASSIGNMENTS) -> bool:
    """Source and translated solution sets, compared exactly."""
    source = enumerate_xcsp(inst, cap)
    translated = enumerate_translated(translate_to_minizinc(inst), inst.variable_order(), cap)
    return source == translated
