"""Typed representation of a FlatZinc model.

Terms are immutable dataclasses so that structural equality works across a
parse / pretty-print / parse round trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from ..errors import FlatZincError

#: Domain size reported for unbounded int / float / set variables.
UNBOUNDED_DOMAIN_SIZE = 2.0**32

# Exponent cap keeping 2**|S| representable as a float.
_MAX_SET_EXPONENT = 1023


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class FloatLit:
    value: float


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class StringLit:
    value: str


@dataclass(frozen=True)
class SetLit:
    values: tuple[int, ...]  # sorted, no duplicates


@dataclass(frozen=True)
class RangeLit:
    lo: Union[int, float]
    hi: Union[int, float]


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class ArrayLit:
    items: tuple["Term", ...]


@dataclass(frozen=True)
class ArrayAccess:
    name: str
    index: int


@dataclass(frozen=True)
class Ann:
    """Annotation atom or call, also used for search specifications."""

    name: str
    args: tuple["Term", ...] = ()


Term = Union[IntLit, FloatLit, BoolLit, StringLit, SetLit, RangeLit, VarRef, ArrayLit, ArrayAccess, Ann]

Literal = (IntLit, FloatLit, BoolLit, StringLit, SetLit, RangeLit)


class DomainKind(Enum):
    BOOL = "bool"
    INT_RANGE = "int_range"
    INT_SET = "int_set"
    INT_UNBOUNDED = "int"
    FLOAT_RANGE = "float_range"
    FLOAT_UNBOUNDED = "float"
    SET_OF_INT = "set_of_int"
    SET_UNBOUNDED = "set_of_int_unbounded"


_INT_KINDS = {DomainKind.INT_RANGE, DomainKind.INT_SET, DomainKind.INT_UNBOUNDED}
_FLOAT_KINDS = {DomainKind.FLOAT_RANGE, DomainKind.FLOAT_UNBOUNDED}
_SET_KINDS = {DomainKind.SET_OF_INT, DomainKind.SET_UNBOUNDED}


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    lo: Union[int, float, None] = None
    hi: Union[int, float, None] = None
    values: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind is DomainKind.INT_RANGE and self.lo > self.hi:
            raise FlatZincError(f"empty int range {self.lo}..{self.hi}")
        if self.kind is DomainKind.FLOAT_RANGE and self.lo > self.hi:
            raise FlatZincError(f"empty float range {self.lo}..{self.hi}")
        if self.kind in (DomainKind.INT_SET, DomainKind.SET_OF_INT) and self.values is not None and not self.values:
            raise FlatZincError("explicit domain value list is empty")

    @property
    def is_int(self) -> bool:
        return self.kind in _INT_KINDS

    @property
    def is_float(self) -> bool:
        return self.kind in _FLOAT_KINDS

    @property
    def is_set(self) -> bool:
        return self.kind in _SET_KINDS

    @property
    def is_bool(self) -> bool:
        return self.kind is DomainKind.BOOL

    def _set_cardinality(self) -> int:
        if self.values is not None:
            return len(self.values)
        return int(self.hi) - int(self.lo) + 1

    def size(self, unbounded: float = UNBOUNDED_DOMAIN_SIZE) -> float:
        """Number of values the domain admits.

        Booleans count 2, int ranges u-l+1, explicit sets their cardinality,
        float ranges the continuous width u-l, and set-of-int domains with
        bound S count 2**|S| (capped at the largest representable float).
        Unbounded domains report the ``unbounded`` sentinel.
        """
        k = self.kind
        if k is DomainKind.BOOL:
            return 2.0
        if k is DomainKind.INT_RANGE:
            return float(self.hi - self.lo + 1)
        if k is DomainKind.INT_SET:
            return float(len(self.values))
        if k is DomainKind.FLOAT_RANGE:
            return float(self.hi) - float(self.lo)
        if k is DomainKind.SET_OF_INT:
            return 2.0 ** min(self._set_cardinality(), _MAX_SET_EXPONENT)
        return float(unbounded)

    def log_size(self, unbounded: float = UNBOUNDED_DOMAIN_SIZE) -> float:
        """Natural log of :meth:`size`, exact for set-of-int domains."""
        if self.kind is DomainKind.SET_OF_INT:
            return self._set_cardinality() * math.log(2.0)
        return math.log(self.size(unbounded))


class GoalKind(Enum):
    SATISFY = 1
    MINIMIZE = 2
    MAXIMIZE = 3


@dataclass
class Variable:
    name: str
    domain: Domain
    binding: Term | None = None  # None: free; literal: constant; VarRef: alias
    annotations: tuple[Ann, ...] = ()
    owner_array: str | None = None  # set for elements of an unassigned var array
    is_labeled: bool = False

    @property
    def is_free(self) -> bool:
        return self.binding is None

    @property
    def is_alias(self) -> bool:
        return isinstance(self.binding, (VarRef, ArrayAccess))

    @property
    def is_constant(self) -> bool:
        return self.binding is not None and not self.is_alias

    @property
    def is_defined(self) -> bool:
        return any(a.name == "is_defined_var" for a in self.annotations)

    @property
    def is_introduced(self) -> bool:
        return any(a.name == "var_is_introduced" for a in self.annotations)


@dataclass
class ArrayDecl:
    name: str
    size: int
    domain: Domain
    annotations: tuple[Ann, ...] = ()
    items: tuple[Term, ...] | None = None  # None: elements were generated


@dataclass
class Constraint:
    name: str
    args: tuple[Term, ...]
    annotations: tuple[Ann, ...] = ()


@dataclass
class SolveGoal:
    kind: GoalKind
    objective: Term | None = None
    annotations: tuple[Ann, ...] = ()


@dataclass
class Model:
    variables: dict[str, Variable] = field(default_factory=dict)
    arrays: dict[str, tuple[Term, ...]] = field(default_factory=dict)
    array_decls: list[ArrayDecl] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    goal: SolveGoal = field(default_factory=lambda: SolveGoal(GoalKind.SATISFY))
    source_path: str = "<string>"
    aliases_resolved: bool = False

    def free_variables(self) -> list[Variable]:
        return [v for v in self.variables.values() if v.is_free]

    def structure(self) -> tuple:
        """Everything that matters for structural equality (not the path)."""
        return (self.variables, self.arrays, self.constraints, self.goal)
