"""XCSP 2.1 reader.

Covers the CSP core of the format: extensional constraints (supports and
conflicts relations), intensional constraints (functional predicates) and
a small table of named global constraints.  Weighted (soft) instances,
quantified instances and abridged tuple notation are rejected with
explicit errors rather than silently mistranslated.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Union

from ..errors import XcspError, XcspUnsupportedError
from .predicates import Expr, free_variables, parse_expression

Term = tuple  # ("var", name) | ("int", value)


@dataclass(frozen=True)
class XcspDomain:
    name: str
    values: tuple[int, ...]  # sorted, distinct


@dataclass(frozen=True)
class XcspVariable:
    name: str
    domain: str


@dataclass(frozen=True)
class XcspRelation:
    name: str
    arity: int
    semantics: str  # "supports" | "conflicts"
    tuples: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class XcspPredicate:
    name: str
    parameters: tuple[str, ...]
    expression: Expr


@dataclass(frozen=True)
class RelationReference:
    relation: str


@dataclass(frozen=True)
class PredicateApplication:
    predicate: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class GlobalAllDifferent:
    variables: tuple[str, ...]


@dataclass(frozen=True)
class GlobalLinear:
    terms: tuple[tuple[int, Term], ...]  # (coefficient, term)
    op: str  # eq ne lt le gt ge
    rhs: Term


@dataclass(frozen=True)
class GlobalElement:
    index: Term
    table: tuple[Term, ...]
    value: Term


@dataclass(frozen=True)
class GlobalCumulative:
    tasks: tuple[tuple[Term, Term, Term], ...]  # (origin, duration, height)
    limit: Term


Payload = Union[
    RelationReference,
    PredicateApplication,
    GlobalAllDifferent,
    GlobalLinear,
    GlobalElement,
    GlobalCumulative,
]


@dataclass(frozen=True)
class XcspConstraint:
    name: str
    scope: tuple[str, ...]
    payload: Payload


@dataclass
class XcspInstance:
    domains: dict[str, XcspDomain]
    variables: dict[str, XcspVariable]
    relations: dict[str, XcspRelation]
    predicates: dict[str, XcspPredicate]
    constraints: list[XcspConstraint]

    def variable_order(self) -> list[str]:
        return list(self.variables)

    def domain_of(self, var: str) -> tuple[int, ...]:
        return self.domains[self.variables[var].domain].values


_VALUE_TOKEN = re.compile(r"-?\d+(?:\.\.-?\d+)?")
_TUPLE_CHARS = re.compile(r"^[-0-9|\s]*$")


def parse_xcsp(text: str) -> XcspInstance:
    """Parse an XCSP 2.1 document from a string."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XcspError(f"malformed XML: {exc}") from exc
    if root.tag != "instance":
        raise XcspError(f"expected <instance> root element, found <{root.tag}>")

    pres = root.find("presentation")
    if pres is not None:
        fmt = pres.get("format")
        if fmt is not None and "2.1" not in fmt:
            raise XcspUnsupportedError(f"unsupported format {fmt!r}, expected XCSP 2.1")
        typ = pres.get("type")
        if typ is not None and typ.upper() not in ("CSP", "COP"):
            raise XcspUnsupportedError(f"unsupported instance type {typ!r}")
    if root.find("quantification") is not None:
        raise XcspUnsupportedError("quantified instances are not supported")

    domains = _parse_domains(root.find("domains"))
    variables = _parse_variables(root.find("variables"), domains)
    relations = _parse_relations(root.find("relations"))
    predicates = _parse_predicates(root.find("predicates"))
    constraints = _parse_constraints(
        root.find("constraints"), variables, relations, predicates
    )
    return XcspInstance(domains, variables, relations, predicates, constraints)


def parse_xcsp_file(path: str) -> XcspInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_xcsp(fh.read())


def _parse_domains(section: ET.Element | None) -> dict[str, XcspDomain]:
    out: dict[str, XcspDomain] = {}
    if section is None:
        return out
    for el in section.findall("domain"):
        name = el.get("name")
        if name is None:
            raise XcspError("domain without a name")
        values: list[int] = []
        text = (el.text or "").strip()
        for token in text.split():
            if not _VALUE_TOKEN.fullmatch(token):
                raise XcspError(f"bad value token {token!r} in domain {name!r}")
            if ".." in token:
                lo, hi = token.split("..")
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(token))
        if not values:
            raise XcspError(f"domain {name!r} is empty")
        nb = el.get("nbValues")
        if nb is not None and int(nb) != len(values):
            raise XcspError(f"domain {name!r} declares {nb} values but lists {len(values)}")
        out[name] = XcspDomain(name, tuple(sorted(set(values))))
    return out


def _parse_variables(
    section: ET.Element | None, domains: dict[str, XcspDomain]
) -> dict[str, XcspVariable]:
    out: dict[str, XcspVariable] = {}
    if section is None:
        return out
    for el in section.findall("variable"):
        name = el.get("name")
        dom = el.get("domain")
        if name is None or dom is None:
            raise XcspError("variable without name or domain")
        if dom not in domains:
            raise XcspError(f"variable {name!r} references unknown domain {dom!r}")
        if name in out:
            raise XcspError(f"duplicate variable {name!r}")
        out[name] = XcspVariable(name, dom)
    return out


def _parse_relations(section: ET.Element | None) -> dict[str, XcspRelation]:
    out: dict[str, XcspRelation] = {}
    if section is None:
        return out
    for el in section.findall("relation"):
        name = el.get("name")
        if name is None:
            raise XcspError("relation without a name")
        semantics = el.get("semantics", "supports")
        if semantics == "soft":
            raise XcspUnsupportedError(
                f"relation {name!r} is soft; weighted instances are not supported"
            )
        if semantics not in ("supports", "conflicts"):
            raise XcspError(f"relation {name!r} has unknown semantics {semantics!r}")
        arity = int(el.get("arity", "0"))
        text = (el.text or "").strip()
        if not _TUPLE_CHARS.match(text):
            raise XcspUnsupportedError(
                f"relation {name!r} uses abridged tuple notation, which is not supported"
            )
        tuples: list[tuple[int, ...]] = []
        if text:
            for chunk in text.split("|"):
                values = tuple(int(v) for v in chunk.split())
                if len(values) != arity:
                    raise XcspError(
                        f"relation {name!r}: tuple {chunk.strip()!r} does not match arity {arity}"
                    )
                tuples.append(values)
        nb = el.get("nbTuples")
        if nb is not None and int(nb) != len(tuples):
            raise XcspError(f"relation {name!r} declares {nb} tuples but lists {len(tuples)}")
        out[name] = XcspRelation(name, arity, semantics, tuple(tuples))
    return out


def _parse_predicates(section: ET.Element | None) -> dict[str, XcspPredicate]:
    out: dict[str, XcspPredicate] = {}
    if section is None:
        return out
    for el in section.findall("predicate"):
        name = el.get("name")
        if name is None:
            raise XcspError("predicate without a name")
        params_el = el.find("parameters")
        if params_el is None:
            raise XcspError(f"predicate {name!r} has no <parameters>")
        tokens = (params_el.text or "").split()
        if len(tokens) % 2 != 0 or any(t != "int" for t in tokens[0::2]):
            raise XcspUnsupportedError(
                f"predicate {name!r}: only int parameters are supported"
            )
        params = tuple(tokens[1::2])
        expr_el = el.find("expression/functional")
        if expr_el is None or not (expr_el.text or "").strip():
            raise XcspUnsupportedError(
                f"predicate {name!r} has no functional expression"
            )
        expr = parse_expression(expr_el.text.strip())
        unknown = free_variables(expr) - set(params)
        if unknown:
            raise XcspError(f"predicate {name!r} uses undeclared parameters {sorted(unknown)}")
        out[name] = XcspPredicate(name, params, expr)
    return out


def _mixed_tokens(el: ET.Element) -> list[tuple[str, str]]:
    """Flatten mixed element content into (kind, value) tokens.

    Text chunks become ("tok", word) entries; child elements such as the
    relational operator of weightedSum become ("op", tag) entries.
    """
    tokens: list[tuple[str, str]] = []

    def push_text(chunk: str | None) -> None:
        if not chunk:
            return
        for br in "[]{}":
            chunk = chunk.replace(br, f" {br} ")
        tokens.extend(("tok", word) for word in chunk.split())

    push_text(el.text)
    for child in el:
        tokens.append(("op", child.tag))
        push_text(child.tail)
    return tokens


def _term(word: str, variables: dict[str, XcspVariable]) -> Term:
    if re.fullmatch(r"-?\d+", word):
        return ("int", int(word))
    if word in variables:
        return ("var", word)
    raise XcspError(f"unknown identifier {word!r} in constraint parameters")


class _TokenCursor:
    def __init__(self, tokens: list[tuple[str, str]], where: str):
        self.tokens = tokens
        self.pos = 0
        self.where = where

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> tuple[str, str] | None:
        return None if self.done() else self.tokens[self.pos]

    def take(self) -> tuple[str, str]:
        if self.done():
            raise XcspError(f"truncated parameters in {self.where}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, word = self.take()
        if kind != "tok" or word != value:
            raise XcspError(f"expected {value!r} in parameters of {self.where}, got {word!r}")


_LINEAR_OPS = frozenset({"eq", "ne", "lt", "le", "gt", "ge"})


def _parse_global(
    name: str,
    norm: str,
    scope: tuple[str, ...],
    params_el: ET.Element | None,
    variables: dict[str, XcspVariable],
) -> Payload:
    cursor = None
    if params_el is not None:
        cursor = _TokenCursor(_mixed_tokens(params_el), f"constraint {name!r}")

    if norm == "alldifferent":
        if cursor is None or cursor.done():
            return GlobalAllDifferent(scope)
        cursor.expect("[")
        vs: list[str] = []
        while True:
            kind, word = cursor.take()
            if kind == "tok" and word == "]":
                break
            if word not in variables:
                _fail_var(word, name)
            vs.append(word)
        return GlobalAllDifferent(tuple(vs))

    if norm == "weightedsum":
        if cursor is None:
            raise XcspError(f"constraint {name!r}: weightedSum needs parameters")
        cursor.expect("[")
        terms: list[tuple[int, Term]] = []
        while True:
            kind, word = cursor.take()
            if kind == "tok" and word == "]":
                break
            if word != "{":
                raise XcspError(f"expected '{{' in weightedSum parameters of {name!r}")
            _, coeff_word = cursor.take()
            coeff = int(coeff_word)
            _, term_word = cursor.take()
            terms.append((coeff, _term(term_word, variables)))
            cursor.expect("}")
        kind, op = cursor.take()
        if kind != "op" or op not in _LINEAR_OPS:
            raise XcspError(f"constraint {name!r}: bad weightedSum operator {op!r}")
        _, rhs_word = cursor.take()
        return GlobalLinear(tuple(terms), op, _term(rhs_word, variables))

    if norm == "element":
        if cursor is None:
            raise XcspError(f"constraint {name!r}: element needs parameters")
        _, index_word = cursor.take()
        index = _term(index_word, variables)
        cursor.expect("[")
        table: list[Term] = []
        while True:
            kind, word = cursor.take()
            if kind == "tok" and word == "]":
                break
            table.append(_term(word, variables))
        _, value_word = cursor.take()
        return GlobalElement(index, tuple(table), _term(value_word, variables))

    if norm == "cumulative":
        if cursor is None:
            raise XcspError(f"constraint {name!r}: cumulative needs parameters")
        cursor.expect("[")
        tasks: list[tuple[Term, Term, Term]] = []
        while True:
            kind, word = cursor.take()
            if kind == "tok" and word == "]":
                break
            if word != "{":
                raise XcspError(f"expected '{{' in cumulative parameters of {name!r}")
            fields: list[str] = []
            while True:
                kind, w = cursor.take()
                if kind == "tok" and w == "}":
                    break
                fields.append(w)
            if len(fields) == 4:
                # {origin duration end height}: the end field is redundant.
                origin, duration, _end, height = fields
            elif len(fields) == 3:
                origin, duration, height = fields
            else:
                raise XcspError(
                    f"constraint {name!r}: cumulative task needs 3 or 4 fields, got {len(fields)}"
                )
            tasks.append(
                (_term(origin, variables), _term(duration, variables), _term(height, variables))
            )
        _, limit_word = cursor.take()
        return GlobalCumulative(tuple(tasks), _term(limit_word, variables))

    raise XcspUnsupportedError(
        f"unsupported global constraint {name!r} (reference {norm!r}); supported: "
        "allDifferent, weightedSum, element, cumulative"
    )


def _fail_var(word: str, cname: str) -> str:
    raise XcspError(f"unknown variable {word!r} in constraint {cname!r}")


def _parse_constraints(
    section: ET.Element | None,
    variables: dict[str, XcspVariable],
    relations: dict[str, XcspRelation],
    predicates: dict[str, XcspPredicate],
) -> list[XcspConstraint]:
    out: list[XcspConstraint] = []
    if section is None:
        return out
    for el in section.findall("constraint"):
        name = el.get("name")
        if name is None:
            raise XcspError("constraint without a name")
        scope = tuple((el.get("scope") or "").split())
        for var in scope:
            if var not in variables:
                raise XcspError(f"constraint {name!r} scopes unknown variable {var!r}")
        reference = el.get("reference")
        if reference is None:
            raise XcspError(f"constraint {name!r} has no reference")
        arity = el.get("arity")
        if arity is not None and int(arity) != len(scope):
            raise XcspError(
                f"constraint {name!r} declares arity {arity} but scopes {len(scope)} variables"
            )
        params_el = el.find("parameters")

        if reference.startswith("global:"):
            norm = reference[len("global:"):].lower()
            payload = _parse_global(name, norm, scope, params_el, variables)
        elif reference in relations:
            rel = relations[reference]
            if rel.arity != len(scope):
                raise XcspError(
                    f"constraint {name!r}: relation arity {rel.arity} != scope size {len(scope)}"
                )
            payload = RelationReference(reference)
        elif reference in predicates:
            pred = predicates[reference]
            if params_el is not None and (params_el.text or "").strip():
                words = (params_el.text or "").split()
            else:
                words = list(scope)
            if len(words) != len(pred.parameters):
                raise XcspError(
                    f"constraint {name!r}: predicate {reference!r} takes "
                    f"{len(pred.parameters)} arguments, got {len(words)}"
                )
            payload = PredicateApplication(reference, tuple(_term(w, variables) for w in words))
        else:
            raise XcspError(f"constraint {name!r} references unknown {reference!r}")
        out.append(XcspConstraint(name, scope, payload))
    return out
