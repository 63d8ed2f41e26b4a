"""Shared fixtures and model builders for the test suite."""

from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURE_DIR = TESTS_DIR / "fixtures"
FIXTURE_PATHS = sorted(FIXTURE_DIR.glob("*.fzn"))

sys.path.insert(0, str(TESTS_DIR))

from fznfeat.fzn.ast import (  # noqa: E402
    Ann,
    ArrayLit,
    Constraint,
    Model,
    SolveGoal,
    Term,
    VarRef,
    Variable,
)


@pytest.fixture
def fixture_paths() -> list[Path]:
    return FIXTURE_PATHS


def generated_model_texts(count: int = 15) -> list[tuple[str, str]]:
    """Deterministic family of small FlatZinc models with varied shapes."""
    out: list[tuple[str, str]] = []
    for i in range(count):
        rng = random.Random(1000 + i)
        n_int = rng.randint(2, 5)
        lines: list[str] = []
        names: list[str] = []
        for j in range(n_int):
            lo = rng.randint(0, 3)
            hi = lo + rng.randint(1, 6)
            name = f"iv{j}"
            if rng.random() < 0.25:
                lines.append(f"var {{{lo}, {lo + 2}, {hi + 3}}}: {name};")
            else:
                lines.append(f"var {lo}..{hi}: {name};")
            names.append(name)
        bools: list[str] = []
        for j in range(rng.randint(0, 2)):
            bools.append(f"bv{j}")
            lines.append(f"var bool: bv{j};")
        if rng.random() < 0.4:
            lines.append("var set of 1..4: sv0;")
        pool = ", ".join(names)
        lines.append(f"constraint all_different_int([{pool}]);")
        lines.append(f"constraint int_lt({names[0]}, {names[1]});")
        if len(names) >= 3:
            coeffs = ", ".join(str(rng.randint(-2, 3)) for _ in names)
            lines.append(f"constraint int_lin_le([{coeffs}], [{pool}], {rng.randint(3, 9)});")
        if len(bools) >= 2:
            lines.append(f"constraint bool_or({bools[0]}, {bools[1]}, true);")
        elif bools:
            lines.append(f"constraint bool2int({bools[0]}, {names[0]});")
        goal = rng.choice(["satisfy", "minimize", "maximize"])
        search = ""
        if rng.random() < 0.6:
            vc = rng.choice(["input_order", "first_fail", "smallest"])
            valc = rng.choice(["indomain_min", "indomain_max", "indomain_split"])
            search = f" :: int_search([{pool}], {vc}, {valc}, complete)"
        if goal == "satisfy":
            lines.append(f"solve{search} satisfy;")
        else:
            lines.append(f"solve{search} {goal} {names[-1]};")
        out.append((f"gen{i:02d}", "\n".join(lines) + "\n"))
    return out


_XCSP_KINDS = ("relation", "predicate", "alldiff", "wsum", "element", "cumulative")


def generated_xcsp_texts(count: int = 20) -> list[tuple[str, str]]:
    """Deterministic family of small XCSP 2.1 instances covering all payloads.

    Every instance has at most 4 variables with at most 4 domain values, so
    both sides of the translation can be enumerated exhaustively.
    """
    out: list[tuple[str, str]] = []
    for i in range(count):
        rng = random.Random(7000 + i)
        n_vars = rng.randint(2, 4)
        doms = [sorted(rng.sample(range(-3, 6), rng.randint(2, 4))) for _ in range(n_vars)]
        domain_els = []
        for j, values in enumerate(doms):
            contiguous = values[-1] - values[0] + 1 == len(values)
            if contiguous and rng.random() < 0.5:
                body = f"{values[0]}..{values[-1]}"
            else:
                body = " ".join(str(v) for v in values)
            domain_els.append(f'<domain name="D{j}" nbValues="{len(values)}">{body}</domain>')
        var_els = [f'<variable name="V{j}" domain="D{j}"/>' for j in range(n_vars)]

        relations: list[str] = []
        predicates: list[str] = []
        constraints: list[str] = []
        n_cons = rng.randint(1, 3)
        kinds = [_XCSP_KINDS[i % len(_XCSP_KINDS)]] + [
            rng.choice(_XCSP_KINDS) for _ in range(n_cons - 1)
        ]
        for ci, kind in enumerate(kinds):
            if kind == "relation":
                a, b = rng.sample(range(n_vars), 2)
                prod = [(x, y) for x in doms[a] for y in doms[b]]
                chosen = rng.sample(prod, rng.randint(0, len(prod)))
                semantics = rng.choice(["supports", "conflicts"])
                body = " | ".join(f"{x} {y}" for x, y in chosen)
                relations.append(
                    f'<relation name="R{ci}" arity="2" nbTuples="{len(chosen)}" '
                    f'semantics="{semantics}">{body}</relation>'
                )
                constraints.append(
                    f'<constraint name="C{ci}" arity="2" scope="V{a} V{b}" reference="R{ci}"/>'
                )
            elif kind == "predicate":
                a, b = rng.sample(range(n_vars), 2)
                k = rng.randint(-2, 4)
                expr = rng.choice(
                    [
                        f"eq(add(X0,X1),{k})",
                        "ne(X0,X1)",
                        f"lt(abs(sub(X0,X1)),{max(1, abs(k))})",
                        f"ge(mul(X0,X1),{k})",
                        f"or(eq(X0,{k}),gt(X1,X0))",
                        "eq(mod(X0,X1),0)",
                        f"ne(div(X0,2),{k})",
                        "iff(le(X0,X1),not(gt(X0,4)))",
                    ]
                )
                predicates.append(
                    f'<predicate name="P{ci}"><parameters>int X0 int X1</parameters>'
                    f"<expression><functional>{expr}</functional></expression></predicate>"
                )
                constraints.append(
                    f'<constraint name="C{ci}" arity="2" scope="V{a} V{b}" reference="P{ci}"/>'
                )
            elif kind == "alldiff":
                size = rng.randint(2, n_vars)
                chosen = sorted(rng.sample(range(n_vars), size))
                scope = " ".join(f"V{j}" for j in chosen)
                if rng.random() < 0.5:
                    params = ""
                else:
                    params = f"<parameters>[ {scope} ]</parameters>"
                constraints.append(
                    f'<constraint name="C{ci}" arity="{size}" scope="{scope}" '
                    f'reference="global:allDifferent">{params}</constraint>'
                )
            elif kind == "wsum":
                size = rng.randint(2, n_vars)
                chosen = sorted(rng.sample(range(n_vars), size))
                scope = " ".join(f"V{j}" for j in chosen)
                terms = " ".join(f"{{ {rng.choice([-2, -1, 1, 2])} V{j} }}" for j in chosen)
                op = rng.choice(["eq", "ne", "lt", "le", "gt", "ge"])
                constraints.append(
                    f'<constraint name="C{ci}" arity="{size}" scope="{scope}" '
                    f'reference="global:weightedSum">'
                    f"<parameters>[ {terms} ] <{op}/> {rng.randint(-4, 6)}</parameters>"
                    f"</constraint>"
                )
            elif kind == "element":
                idx, val = rng.sample(range(n_vars), 2)
                used = {idx, val}
                cells = []
                for _ in range(rng.randint(2, 3)):
                    if rng.random() < 0.5:
                        j = rng.randrange(n_vars)
                        used.add(j)
                        cells.append(f"V{j}")
                    else:
                        cells.append(str(rng.randint(-2, 4)))
                scope = " ".join(f"V{j}" for j in sorted(used))
                constraints.append(
                    f'<constraint name="C{ci}" arity="{len(used)}" scope="{scope}" '
                    f'reference="global:element">'
                    f"<parameters>V{idx} [ {' '.join(cells)} ] V{val}</parameters></constraint>"
                )
            else:  # cumulative
                size = min(2, n_vars)
                chosen = sorted(rng.sample(range(n_vars), size))
                scope = " ".join(f"V{j}" for j in chosen)
                tasks = " ".join(
                    f"{{ V{j} {rng.randint(1, 2)} {rng.randint(1, 2)} }}" for j in chosen
                )
                constraints.append(
                    f'<constraint name="C{ci}" arity="{size}" scope="{scope}" '
                    f'reference="global:cumulative">'
                    f"<parameters>[ {tasks} ] {rng.randint(1, 3)}</parameters></constraint>"
                )

        text = (
            '<instance><presentation name="?" format="XCSP 2.1" type="CSP"/>'
            f'<domains nbDomains="{n_vars}">{"".join(domain_els)}</domains>'
            f'<variables nbVariables="{n_vars}">{"".join(var_els)}</variables>'
            + (f'<relations nbRelations="{len(relations)}">{"".join(relations)}</relations>' if relations else "")
            + (f'<predicates nbPredicates="{len(predicates)}">{"".join(predicates)}</predicates>' if predicates else "")
            + f'<constraints nbConstraints="{len(constraints)}">{"".join(constraints)}</constraints>'
            "</instance>"
        )
        out.append((f"xgen{i:02d}", text))
    return out


def _rename_term(term: Term, mapping: dict[str, str]) -> Term:
    if isinstance(term, VarRef):
        return VarRef(mapping.get(term.name, term.name))
    if isinstance(term, ArrayLit):
        return ArrayLit(tuple(_rename_term(t, mapping) for t in term.items))
    if isinstance(term, Ann):
        return Ann(term.name, tuple(_rename_term(t, mapping) for t in term.args))
    return term


def permute_and_rename(model: Model, rng: random.Random) -> Model:
    """Structurally equivalent copy: fresh variable names, shuffled order."""
    old_names = list(model.variables)
    fresh = [f"rn{i}x{rng.randrange(10**6)}" for i in range(len(old_names))]
    rng.shuffle(fresh)
    mapping = dict(zip(old_names, fresh))

    out = Model(source_path=model.source_path, aliases_resolved=model.aliases_resolved)
    items = list(model.variables.items())
    rng.shuffle(items)
    for name, v in items:
        binding = None if v.binding is None else _rename_term(v.binding, mapping)
        out.variables[mapping[name]] = Variable(
            mapping[name], v.domain, binding, v.annotations, None, v.is_labeled
        )
    out.arrays = {
        key: tuple(_rename_term(t, mapping) for t in vals)
        for key, vals in model.arrays.items()
    }
    cons = [
        Constraint(
            c.name,
            tuple(_rename_term(a, mapping) for a in c.args),
            tuple(_rename_term(a, mapping) for a in c.annotations),
        )
        for c in model.constraints
    ]
    rng.shuffle(cons)
    out.constraints = cons
    goal = model.goal
    objective = None if goal.objective is None else _rename_term(goal.objective, mapping)
    out.goal = SolveGoal(
        goal.kind,
        objective,
        tuple(_rename_term(a, mapping) for a in goal.annotations),
    )
    return out
