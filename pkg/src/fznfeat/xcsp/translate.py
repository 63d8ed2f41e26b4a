"""XCSP to MiniZinc translation.

Supports-relations become table constraints; conflicts-relations become,
per forbidden tuple, a disjunction of inequalities; predicate applications
become fully parenthesized boolean expressions.  Emission is deterministic:
identical input bytes yield identical output bytes.
"""

from __future__ import annotations

from ..errors import XcspError
from .instance import (
    GlobalAllDifferent,
    GlobalCumulative,
    GlobalElement,
    GlobalLinear,
    PredicateApplication,
    RelationReference,
    Term,
    XcspInstance,
)
from .predicates import Expr, OPERATORS, substitute

_MZN_BINOP = {
    "eq": "=",
    "ne": "!=",
    "lt": "<",
    "le": "<=",
    "gt": ">",
    "ge": ">=",
    "add": "+",
    "sub": "-",
    "mul": "*",
    "div": "div",
    "mod": "mod",
    "and": "/\\",
    "or": "\\/",
    "xor": "xor",
    "iff": "<->",
}


def _expr_text(expr: Expr) -> str:
    kind = expr[0]
    if kind == "int":
        return str(expr[1])
    if kind == "var":
        return expr[1]
    op, args = expr[1], expr[2]
    if op in _MZN_BINOP:
        a, b = (_expr_text(x) for x in args)
        return f"({a} {_MZN_BINOP[op]} {b})"
    if op == "abs":
        return f"abs({_expr_text(args[0])})"
    if op in ("min", "max"):
        return f"{op}({_expr_text(args[0])}, {_expr_text(args[1])})"
    if op == "neg":
        return f"(-{_expr_text(args[0])})"
    if op == "not":
        return f"(not {_expr_text(args[0])})"
    raise XcspError(f"cannot render operator {op!r}")


def _term_text(term: Term) -> str:
    return term[1] if term[0] == "var" else str(term[1])


def _domain_text(values: tuple[int, ...]) -> str:
    lo, hi = values[0], values[-1]
    if hi - lo + 1 == len(values):
        return f"{lo}..{hi}"
    return "{" + ", ".join(str(v) for v in values) + "}"


def _table_rows(tuples) -> str:
    rows = " | ".join(", ".join(str(v) for v in row) for row in tuples)
    return f"[| {rows} |]"


def translate_to_minizinc(instance: XcspInstance) -> str:
    """Render an XCSP instance as a MiniZinc satisfaction model.

    Every declared variable appears exactly once; the solution set over the
    declared variables is preserved constraint by constraint.
    """
    lines: list[str] = []
    for var in instance.variables.values():
        dom = instance.domains[var.domain]
        lines.append(f"var {_domain_text(dom.values)}: {var.name};")
    for con in instance.constraints:
        payload = con.payload
        if isinstance(payload, RelationReference):
            rel = instance.relations[payload.relation]
            scope = "[" + ", ".join(con.scope) + "]"
            if rel.semantics == "supports":
                if not rel.tuples:
                    lines.append("constraint false;")
                else:
                    lines.append(f"constraint table({scope}, {_table_rows(rel.tuples)});")
            else:
                if not rel.tuples:
                    lines.append("constraint true;")
                for forbidden in rel.tuples:
                    parts = [
                        f"{var} != {val}" for var, val in zip(con.scope, forbidden)
                    ]
                    lines.append("constraint " + " \\/ ".join(parts) + ";")
        elif isinstance(payload, PredicateApplication):
            pred = instance.predicates[payload.predicate]
            env = {
                formal: ("var", t[1]) if t[0] == "var" else ("int", t[1])
                for formal, t in zip(pred.parameters, payload.args)
            }
            body = substitute(pred.expression, env)
            if _result_kind(body) != "bool":
                raise XcspError(
                    f"predicate {pred.name!r} does not evaluate to a boolean"
                )
            lines.append(f"constraint {_expr_text(body)};")
        elif isinstance(payload, GlobalAllDifferent):
            lines.append("constraint alldifferent([" + ", ".join(payload.variables) + "]);")
        elif isinstance(payload, GlobalLinear):
            parts = [f"({coeff} * {_term_text(t)})" for coeff, t in payload.terms]
            total = parts[0]
            for part in parts[1:]:
                total = f"({total} + {part})"
            op = _MZN_BINOP[payload.op]
            lines.append(f"constraint ({total} {op} {_term_text(payload.rhs)});")
        elif isinstance(payload, GlobalElement):
            table = "[" + ", ".join(_term_text(t) for t in payload.table) + "]"
            lines.append(
                f"constraint ({table}[{_term_text(payload.index)}] = {_term_text(payload.value)});"
            )
        elif isinstance(payload, GlobalCumulative):
            origins = ", ".join(_term_text(t[0]) for t in payload.tasks)
            durations = ", ".join(_term_text(t[1]) for t in payload.tasks)
            heights = ", ".join(_term_text(t[2]) for t in payload.tasks)
            lines.append(
                f"constraint cumulative([{origins}], [{durations}], [{heights}], "
                f"{_term_text(payload.limit)});"
            )
        else:
            raise XcspError(f"cannot translate constraint {con.name!r}")
    lines.append("solve satisfy;")
    return "\n".join(lines) + "\n"


def _result_kind(expr: Expr) -> str:
    if expr[0] == "call":
        return OPERATORS[expr[1]][1] if OPERATORS[expr[1]][1] != "cmp" else "bool"
    return "int"
