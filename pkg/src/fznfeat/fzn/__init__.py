from .ast import (
    Ann,
    ArrayAccess,
    ArrayDecl,
    ArrayLit,
    BoolLit,
    Constraint,
    Domain,
    DomainKind,
    FloatLit,
    GoalKind,
    IntLit,
    Model,
    RangeLit,
    SetLit,
    SolveGoal,
    StringLit,
    VarRef,
    Variable,
)
from .model import ModelCounts, ModelIndex, model_counts, resolve_aliases
from .parser import model_to_text, parse_flatzinc, parse_flatzinc_file

__all__ = [
    "Ann",
    "ArrayAccess",
    "ArrayDecl",
    "ArrayLit",
    "BoolLit",
    "Constraint",
    "Domain",
    "DomainKind",
    "FloatLit",
    "GoalKind",
    "IntLit",
    "Model",
    "ModelCounts",
    "ModelIndex",
    "RangeLit",
    "SetLit",
    "SolveGoal",
    "StringLit",
    "VarRef",
    "Variable",
    "model_counts",
    "model_to_text",
    "parse_flatzinc",
    "parse_flatzinc_file",
    "resolve_aliases",
]
