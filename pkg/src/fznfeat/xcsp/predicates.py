"""Functional predicate expressions of XCSP 2.1.

An expression like ``eq(add(X0,X1),4)`` parses into a small tree of
``("call", op, args)``, ``("var", name)`` and ``("int", value)`` nodes.
The operator set is fixed; anything else is rejected up front.

Integer division truncates toward zero and ``mod`` follows the sign of
the dividend, on both the source side and the translated side, so the
two interpretations can never drift apart.
"""

from __future__ import annotations

import re

from ..errors import XcspError, XcspUnsupportedError

#: op -> (arity, kind); kind "cmp" and "bool" produce booleans.
OPERATORS: dict[str, tuple[int, str]] = {
    "eq": (2, "cmp"),
    "ne": (2, "cmp"),
    "lt": (2, "cmp"),
    "le": (2, "cmp"),
    "gt": (2, "cmp"),
    "ge": (2, "cmp"),
    "add": (2, "int"),
    "sub": (2, "int"),
    "mul": (2, "int"),
    "div": (2, "int"),
    "mod": (2, "int"),
    "abs": (1, "int"),
    "min": (2, "int"),
    "max": (2, "int"),
    "neg": (1, "int"),
    "not": (1, "bool"),
    "and": (2, "bool"),
    "or": (2, "bool"),
    "xor": (2, "bool"),
    "iff": (2, "bool"),
}

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),]))")

Expr = tuple  # ("call", op, tuple[Expr, ...]) | ("var", name) | ("int", value)


def parse_expression(text: str) -> Expr:
    tokens = _tokenize(text)
    pos, expr = _parse(tokens, 0)
    if pos != len(tokens):
        raise XcspError(f"trailing tokens in predicate expression: {text!r}")
    return expr


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise XcspError(f"bad token in predicate expression near {rest[:20]!r}")
        tok = m.group("int") or m.group("name") or m.group("punct")
        tokens.append(tok)
        pos = m.end()
    return tokens


def _parse(tokens: list[str], pos: int) -> tuple[int, Expr]:
    if pos >= len(tokens):
        raise XcspError("truncated predicate expression")
    tok = tokens[pos]
    if re.fullmatch(r"-?\d+", tok):
        return pos + 1, ("int", int(tok))
    if tok in "(),":
        raise XcspError(f"unexpected {tok!r} in predicate expression")
    if pos + 1 < len(tokens) and tokens[pos + 1] == "(":
        if tok not in OPERATORS:
            raise XcspUnsupportedError(f"unsupported predicate operator {tok!r}")
        arity = OPERATORS[tok][0]
        pos += 2
        args: list[Expr] = []
        while True:
            pos, arg = _parse(tokens, pos)
            args.append(arg)
            if pos >= len(tokens):
                raise XcspError("unbalanced parentheses in predicate expression")
            if tokens[pos] == ",":
                pos += 1
                continue
            if tokens[pos] == ")":
                pos += 1
                break
            raise XcspError(f"expected ',' or ')' in predicate expression, got {tokens[pos]!r}")
        if len(args) != arity:
            raise XcspError(f"operator {tok!r} takes {arity} arguments, got {len(args)}")
        return pos, ("call", tok, tuple(args))
    return pos + 1, ("var", tok)


def free_variables(expr: Expr) -> set[str]:
    kind = expr[0]
    if kind == "var":
        return {expr[1]}
    if kind == "call":
        out: set[str] = set()
        for arg in expr[2]:
            out |= free_variables(arg)
        return out
    return set()


def substitute(expr: Expr, env: dict[str, Expr]) -> Expr:
    kind = expr[0]
    if kind == "var":
        try:
            return env[expr[1]]
        except KeyError:
            raise XcspError(f"predicate parameter {expr[1]!r} not bound") from None
    if kind == "call":
        return ("call", expr[1], tuple(substitute(a, env) for a in expr[2]))
    return expr


class Undefined(Exception):
    """Raised when evaluation hits a partial-function hole (e.g. div by 0)."""


def trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise Undefined
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def trunc_mod(a: int, b: int) -> int:
    return a - b * trunc_div(a, b)


def evaluate(expr: Expr, env: dict[str, int]):
    kind = expr[0]
    if kind == "int":
        return expr[1]
    if kind == "var":
        return env[expr[1]]
    op = expr[1]
    args = [evaluate(a, env) for a in expr[2]]
    if op == "eq":
        return args[0] == args[1]
    if op == "ne":
        return args[0] != args[1]
    if op == "lt":
        return args[0] < args[1]
    if op == "le":
        return args[0] <= args[1]
    if op == "gt":
        return args[0] > args[1]
    if op == "ge":
        return args[0] >= args[1]
    if op == "add":
        return args[0] + args[1]
    if op == "sub":
        return args[0] - args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "div":
        return trunc_div(args[0], args[1])
    if op == "mod":
        return trunc_mod(args[0], args[1])
    if op == "abs":
        return abs(args[0])
    if op == "min":
        return min(args[0], args[1])
    if op == "max":
        return max(args[0], args[1])
    if op == "neg":
        return -args[0]
    if op == "not":
        return not args[0]
    if op == "and":
        return args[0] and args[1]
    if op == "or":
        return args[0] or args[1]
    if op == "xor":
        return bool(args[0]) != bool(args[1])
    if op == "iff":
        return bool(args[0]) == bool(args[1])
    raise XcspError(f"unknown operator {op!r}")
