"""Tokenizer for FlatZinc source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FlatZincSyntaxError

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>%[^\n]*)
    | (?P<float>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
    | (?P<int>\d+)
    | (?P<dotdot>\.\.)
    | (?P<dcolon>::)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<punct>[()\[\]{},:;=\-])
    """,
    re.VERBOSE,
)

KEYWORDS = frozenset(
    {
        "predicate",
        "var",
        "array",
        "of",
        "int",
        "bool",
        "float",
        "set",
        "constraint",
        "solve",
        "satisfy",
        "minimize",
        "maximize",
        "true",
        "false",
    }
)


@dataclass(frozen=True)
class Token:
    kind: str  # INT, FLOAT, IDENT, STRING, DOTDOT, DCOLON, one-char punct, EOF
    value: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise FlatZincSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            line += value.count("\n")
            if "\n" in value:
                line_start = pos + value.rindex("\n") + 1
        elif kind == "comment":
            pass
        elif kind == "punct":
            tokens.append(Token(value, value, line, col))
        else:
            tokens.append(Token(kind.upper(), value, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens
