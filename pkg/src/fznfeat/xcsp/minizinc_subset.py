"""Reader and evaluator for the MiniZinc subset the translator emits.

This is the verification half of the translation round trip: the emitted
text is parsed back independently and its solutions enumerated by brute
force, so a translation bug shows up as a solution-set mismatch rather
than going unnoticed.  The grammar covers exactly what the translator can
produce: integer variable declarations, boolean constraint expressions,
``table``/``alldifferent``/``cumulative`` calls and ``solve satisfy``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import XcspError
from .predicates import Undefined, trunc_div, trunc_mod

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>%[^\n]*)
    | (?P<int>\d+)
    | (?P<op><->|\\/|/\\|!=|<=|>=|==|\.\.|\[\||\|\]|[=<>+\-*(),;:{}\[\]|])
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_PRECEDENCE = {
    "<->": 1,
    "\\/": 2,
    "xor": 3,
    "/\\": 4,
    "=": 5, "==": 5, "!=": 5, "<": 5, "<=": 5, ">": 5, ">=": 5,
    "+": 6, "-": 6,
    "*": 7, "div": 7, "mod": 7,
}

_CALLS = {"abs": 1, "min": 2, "max": 2, "alldifferent": 1, "table": 2, "cumulative": 4}


@dataclass
class SubsetModel:
    variables: dict[str, tuple[int, ...]]  # name -> domain values
    constraints: list[tuple]


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise XcspError(f"bad character {text[pos]!r} in translated model")
        if m.lastgroup not in ("ws", "comment"):
            tokens.append(m.group())
        pos = m.end()
    tokens.append("<eof>")
    return tokens


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.toks[self.pos]

    def take(self) -> str:
        tok = self.toks[self.pos]
        if tok != "<eof>":
            self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.take()
        if got != tok:
            raise XcspError(f"expected {tok!r} in translated model, got {got!r}")

    # -- items ---------------------------------------------------------

    def model(self) -> SubsetModel:
        out = SubsetModel({}, [])
        while self.peek() != "<eof>":
            tok = self.take()
            if tok == "var":
                self._var_decl(out)
            elif tok == "constraint":
                out.constraints.append(self.expr(0))
                self.expect(";")
            elif tok == "solve":
                self.expect("satisfy")
                self.expect(";")
            else:
                raise XcspError(f"unexpected item {tok!r} in translated model")
        return out

    def _var_decl(self, out: SubsetModel) -> None:
        if self.peek() == "{":
            self.take()
            values: list[int] = []
            while True:
                values.append(self._int())
                if self.peek() == ",":
                    self.take()
                    continue
                self.expect("}")
                break
        else:
            lo = self._int()
            self.expect("..")
            hi = self._int()
            values = list(range(lo, hi + 1))
        self.expect(":")
        name = self.take()
        self.expect(";")
        out.variables[name] = tuple(values)

    def _int(self) -> int:
        neg = False
        if self.peek() == "-":
            self.take()
            neg = True
        tok = self.take()
        if not tok.isdigit():
            raise XcspError(f"expected integer in translated model, got {tok!r}")
        return -int(tok) if neg else int(tok)

    # -- expressions ---------------------------------------------------

    def expr(self, min_prec: int) -> tuple:
        left = self._unary()
        while True:
            op = self.peek()
            prec = _PRECEDENCE.get(op)
            if prec is None or prec < min_prec:
                return left
            self.take()
            right = self.expr(prec + 1)
            left = ("call", op, (left, right))

    def _unary(self) -> tuple:
        tok = self.peek()
        if tok == "-":
            self.take()
            return ("call", "neg", (self._unary(),))
        if tok == "not":
            self.take()
            return ("call", "not", (self._unary(),))
        return self._postfix()

    def _postfix(self) -> tuple:
        node = self._primary()
        while self.peek() == "[":
            self.take()
            idx = self.expr(0)
            self.expect("]")
            node = ("index", node, idx)
        return node

    def _primary(self) -> tuple:
        tok = self.take()
        if tok.isdigit():
            return ("int", int(tok))
        if tok == "true":
            return ("bool", True)
        if tok == "false":
            return ("bool", False)
        if tok == "(":
            inner = self.expr(0)
            self.expect(")")
            return inner
        if tok == "[":
            items: list[tuple] = []
            if self.peek() != "]":
                items.append(self.expr(0))
                while self.peek() == ",":
                    self.take()
                    items.append(self.expr(0))
            self.expect("]")
            return ("array", tuple(items))
        if tok == "[|":
            rows: list[tuple[int, ...]] = []
            row: list[int] = []
            while True:
                nxt = self.peek()
                if nxt in ("|", "|]"):
                    self.take()
                    rows.append(tuple(row))
                    row = []
                    if nxt == "|]":
                        break
                    continue
                row.append(self._int())
                if self.peek() == ",":
                    self.take()
            return ("rows", tuple(rows))
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            if self.peek() == "(" and tok in _CALLS:
                self.take()
                args: list[tuple] = []
                if self.peek() != ")":
                    args.append(self.expr(0))
                    while self.peek() == ",":
                        self.take()
                        args.append(self.expr(0))
                self.expect(")")
                if len(args) != _CALLS[tok]:
                    raise XcspError(f"{tok} takes {_CALLS[tok]} arguments, got {len(args)}")
                return ("call", tok, tuple(args))
            return ("var", tok)
        raise XcspError(f"unexpected token {tok!r} in translated model")


def parse_subset(text: str) -> SubsetModel:
    model = _Reader(text).model()
    for con in model.constraints:
        for name in _vars_of(con):
            if name not in model.variables:
                raise XcspError(f"translated model references undeclared {name!r}")
    return model


def _vars_of(node: tuple) -> set[str]:
    kind = node[0]
    if kind == "var":
        return {node[1]}
    if kind == "call":
        out: set[str] = set()
        for arg in node[2]:
            out |= _vars_of(arg)
        return out
    if kind == "array":
        out = set()
        for item in node[1]:
            out |= _vars_of(item)
        return out
    if kind == "index":
        return _vars_of(node[1]) | _vars_of(node[2])
    return set()


def _eval(node: tuple, env: dict[str, int]):
    kind = node[0]
    if kind == "int":
        return node[1]
    if kind == "bool":
        return node[1]
    if kind == "var":
        return env[node[1]]
    if kind == "array":
        return [_eval(item, env) for item in node[1]]
    if kind == "rows":
        return node[1]
    if kind == "index":
        arr = _eval(node[1], env)
        idx = _eval(node[2], env)
        if not isinstance(arr, list) or not 1 <= idx <= len(arr):
            raise Undefined
        return arr[idx - 1]
    op = node[1]
    if op in ("/\\", "\\/"):
        a = _eval(node[2][0], env)
        b = _eval(node[2][1], env)
        return (a and b) if op == "/\\" else (a or b)
    args = [_eval(a, env) for a in node[2]]
    if op in ("=", "=="):
        return args[0] == args[1]
    if op == "!=":
        return args[0] != args[1]
    if op == "<":
        return args[0] < args[1]
    if op == "<=":
        return args[0] <= args[1]
    if op == ">":
        return args[0] > args[1]
    if op == ">=":
        return args[0] >= args[1]
    if op == "+":
        return args[0] + args[1]
    if op == "-":
        return args[0] - args[1]
    if op == "*":
        return args[0] * args[1]
    if op == "div":
        return trunc_div(args[0], args[1])
    if op == "mod":
        return trunc_mod(args[0], args[1])
    if op == "xor":
        return bool(args[0]) != bool(args[1])
    if op == "<->":
        return bool(args[0]) == bool(args[1])
    if op == "neg":
        return -args[0]
    if op == "not":
        return not args[0]
    if op == "abs":
        return abs(args[0])
    if op == "min":
        return min(args)
    if op == "max":
        return max(args)
    if op == "alldifferent":
        values = args[0]
        return len(values) == len(set(values))
    if op == "table":
        return tuple(args[0]) in args[1]
    if op == "cumulative":
        origins, durations, heights, limit = args
        return _cumulative_ok(origins, durations, heights, limit)
    raise XcspError(f"cannot evaluate operator {op!r}")


def _cumulative_ok(origins, durations, heights, limit) -> bool:
    spans = [(o, o + d) for o, d in zip(origins, durations)]
    ticks = sorted({t for span in spans for t in span})
    for t in ticks:
        load = sum(h for (lo, hi), h in zip(spans, heights) if lo <= t < hi)
        if load > limit:
            return False
    return True


def constraint_holds(node: tuple, env: dict[str, int]) -> bool:
    """Partial-function semantics: an undefined evaluation falsifies."""
    try:
        return bool(_eval(node, env))
    except Undefined:
        return False
