"""Model normalization and structural analysis.

Alias resolution rewrites every use of an alias to its chain root and every
use of a constant-bound variable to its literal value.  After that, the set
of unbounded variables V, the effective constraint set C (constraints that
constrain at least one variable), per-variable degrees and per-constraint
variable occurrences are all well defined; :class:`ModelIndex` computes them
in a single pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import AliasCycleError, ModelError
from .ast import (
    Ann,
    ArrayLit,
    Constraint,
    Model,
    SolveGoal,
    Term,
    VarRef,
    Variable,
)


def resolve_aliases(model: Model) -> Model:
    """Return an equivalent model with aliases resolved and constants bound.

    Alias variables stay in the model, marked as aliases, but their binding
    points directly at the chain root and no constraint argument mentions
    them any more.  A variable referencing a constant-bound variable is
    still an alias; the constant's literal value is what gets substituted
    into arguments.  Cyclic alias chains raise :class:`AliasCycleError`.
    """
    if model.aliases_resolved:
        return model
    roots: dict[str, str] = {}

    def chase(name: str) -> str:
        if name in roots:
            return roots[name]
        path: list[str] = []
        cur = name
        while True:
            var = model.variables[cur]
            if not var.is_alias:
                break
            if cur in path:
                raise AliasCycleError(path[path.index(cur):])
            path.append(cur)
            cur = var.binding.name
            if cur not in model.variables:
                raise ModelError(f"alias {path[-1]!r} targets undeclared {cur!r}")
        for seen in path:
            roots[seen] = cur
        return cur

    def rewrite(term: Term) -> Term:
        if isinstance(term, VarRef):
            var = model.variables.get(term.name)
            if var is None:
                return term  # annotation atom, not a declared variable
            root = model.variables[chase(term.name)] if var.is_alias else var
            if root.is_constant:
                return root.binding
            if root.name != term.name:
                return VarRef(root.name)
            return term
        if isinstance(term, ArrayLit):
            return ArrayLit(tuple(rewrite(t) for t in term.items))
        if isinstance(term, Ann):
            return Ann(term.name, tuple(rewrite(t) for t in term.args))
        return term

    out = Model(source_path=model.source_path, aliases_resolved=True)
    for name, v in model.variables.items():
        binding = v.binding
        if v.is_alias:
            binding = VarRef(chase(name))
        out.variables[name] = Variable(
            name, v.domain, binding, v.annotations, v.owner_array, v.is_labeled
        )
    out.arrays = {name: tuple(rewrite(t) for t in items) for name, items in model.arrays.items()}
    out.array_decls = list(model.array_decls)
    out.constraints = [
        Constraint(c.name, tuple(rewrite(a) for a in c.args), tuple(rewrite(a) for a in c.annotations))
        for c in model.constraints
    ]
    goal = model.goal
    objective = rewrite(goal.objective) if goal.objective is not None else None
    out.goal = SolveGoal(goal.kind, objective, tuple(rewrite(a) for a in goal.annotations))
    return out


@dataclass(frozen=True)
class ModelCounts:
    n_vars: int
    n_constants: int
    n_aliases: int
    n_constraints: int
    n_defined: int
    n_introduced: int


def model_counts(model: Model) -> ModelCounts:
    """Headline counts: |V|, constants, aliases, |C|, defined, introduced."""
    index = ModelIndex.build(model)
    m = index.model
    return ModelCounts(
        n_vars=len(index.free_vars),
        n_constants=sum(1 for v in m.variables.values() if v.is_constant),
        n_aliases=sum(1 for v in m.variables.values() if v.is_alias),
        n_constraints=len(index.constraints),
        n_defined=sum(1 for v in m.variables.values() if v.is_defined),
        n_introduced=sum(1 for v in m.variables.values() if v.is_introduced),
    )


@dataclass(frozen=True)
class ConstraintOcc:
    """A constraint of C together with its variable occurrences."""

    constraint: Constraint
    occurrences: tuple[str, ...]  # free-variable names, with multiplicity
    var_set: frozenset[str]

    @property
    def name(self) -> str:
        return self.constraint.name

    @property
    def arity(self) -> int:
        return len(self.occurrences)

    @property
    def degree(self) -> int:
        return len(self.var_set)


@dataclass
class ModelIndex:
    """One-pass index over a resolved model.

    ``constraints`` holds only the effective set C; constraints whose
    arguments mention no unbounded variable are dropped here (they remain
    in the underlying model).  ``deg`` counts, per unbounded variable, the
    number of constraints of C it occurs in.
    """

    model: Model
    free_vars: list[Variable] = field(default_factory=list)
    constraints: list[ConstraintOcc] = field(default_factory=list)
    deg: dict[str, int] = field(default_factory=dict)

    @classmethod
    def build(cls, model: Model) -> "ModelIndex":
        model = resolve_aliases(model)
        index = cls(model=model)
        index.free_vars = model.free_variables()
        free_names = {v.name for v in index.free_vars}
        index.deg = {name: 0 for name in free_names}
        for c in model.constraints:
            occ: list[str] = []
            for a in c.args:
                _collect_occurrences(a, free_names, occ)
            if not occ:
                continue
            var_set = frozenset(occ)
            index.constraints.append(ConstraintOcc(c, tuple(occ), var_set))
            for name in var_set:
                index.deg[name] += 1
        return index

    @property
    def n_vars(self) -> int:
        return len(self.free_vars)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)


def _collect_occurrences(term: Term, free_names: set[str], out: list[str]) -> None:
    if isinstance(term, VarRef):
        if term.name in free_names:
            out.append(term.name)
    elif isinstance(term, ArrayLit):
        for t in term.items:
            _collect_occurrences(t, free_names, out)
    # Annotation calls inside argument position carry no variable occurrences.


@dataclass(frozen=True)
class SearchSpec:
    kind: str  # "bool", "int" or "set"
    vars_term: Term | None
    var_choice: str | None
    val_choice: str | None

    def labeled_count(self, model: Model) -> int:
        t = self.vars_term
        if isinstance(t, ArrayLit):
            return len(t.items)
        if isinstance(t, VarRef) and t.name in model.variables:
            return 1
        return 0


_SEARCH_NAMES = {"bool_search": "bool", "int_search": "int", "set_search": "set"}


def collect_searches(goal: SolveGoal) -> list[SearchSpec]:
    """Flatten the goal's search annotations, descending into seq_search."""
    out: list[SearchSpec] = []

    def name_of(term: Term) -> str | None:
        if isinstance(term, VarRef):
            return term.name
        if isinstance(term, Ann):
            return term.name
        return None

    def visit(ann: Ann) -> None:
        if ann.name in _SEARCH_NAMES:
            args = ann.args
            out.append(
                SearchSpec(
                    kind=_SEARCH_NAMES[ann.name],
                    vars_term=args[0] if len(args) > 0 else None,
                    var_choice=name_of(args[1]) if len(args) > 1 else None,
                    val_choice=name_of(args[2]) if len(args) > 2 else None,
                )
            )
        elif ann.name == "seq_search":
            for arg in ann.args:
                items = arg.items if isinstance(arg, ArrayLit) else (arg,)
                for item in items:
                    if isinstance(item, Ann):
                        visit(item)

    for ann in goal.annotations:
        visit(ann)
    return out


def mark_labeled(model: Model) -> None:
    """Set ``is_labeled`` on every variable listed in a search annotation."""
    for spec in collect_searches(model.goal):
        t = spec.vars_term
        items: tuple[Term, ...]
        if isinstance(t, ArrayLit):
            items = t.items
        elif t is not None:
            items = (t,)
        else:
            items = ()
        for item in items:
            if isinstance(item, VarRef) and item.name in model.variables:
                model.variables[item.name].is_labeled = True
