"""Recursive-descent parser and pretty-printer for FlatZinc.

The parser normalizes as it reads: parameters are bound (their literal
values substituted into every later use), declared arrays are inlined at
use sites, and elements of unassigned variable arrays become ordinary
scalar variables.  The resulting :class:`~fznfeat.fzn.ast.Model` therefore
contains only scalar variables, literals and references.  Pretty-printing
that model and parsing the output again reproduces the same model.
"""

from __future__ import annotations

from ..errors import FlatZincError, FlatZincSyntaxError
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
    Term,
    VarRef,
    Variable,
)
from .lexer import Token, tokenize

_PAR_TYPES = ("bool", "int", "float", "set")


def parse_flatzinc(text: str, source_path: str = "<string>") -> Model:
    """Parse FlatZinc source text into a model.

    Raises :class:`FlatZincSyntaxError` on malformed input and
    :class:`FlatZincError` on semantic problems (duplicate identifiers,
    type mismatches, missing solve item, undefined references).
    """
    return _Parser(text, source_path).parse()


def parse_flatzinc_file(path: str) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_flatzinc(fh.read(), source_path=str(path))


class _Parser:
    def __init__(self, text: str, source_path: str):
        self.toks = tokenize(text)
        self.i = 0
        self.model = Model(source_path=source_path)
        self.params: dict[str, Term] = {}
        self.names: set[str] = set()
        self.goal_seen = False

    # -- token plumbing -------------------------------------------------

    def _peek(self) -> Token:
        return self.toks[self.i]

    def _next(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def _accept(self, kind: str) -> Token | None:
        if self._peek().kind == kind:
            return self._next()
        return None

    def _expect(self, kind: str, what: str | None = None) -> Token:
        tok = self._next()
        if tok.kind != kind:
            raise FlatZincSyntaxError(
                f"expected {what or kind}, found {tok.value!r}", tok.line, tok.column
            )
        return tok

    def _expect_keyword(self, word: str) -> Token:
        tok = self._next()
        if tok.kind != "IDENT" or tok.value != word:
            raise FlatZincSyntaxError(f"expected '{word}', found {tok.value!r}", tok.line, tok.column)
        return tok

    def _error(self, message: str, tok: Token | None = None) -> FlatZincSyntaxError:
        tok = tok or self._peek()
        return FlatZincSyntaxError(message, tok.line, tok.column)

    # -- items ----------------------------------------------------------

    def parse(self) -> Model:
        while self._peek().kind != "EOF":
            tok = self._peek()
            if tok.kind != "IDENT":
                raise self._error(f"expected item, found {tok.value!r}")
            word = tok.value
            if word == "predicate":
                self._skip_predicate()
            elif word == "constraint":
                self._parse_constraint()
            elif word == "solve":
                self._parse_solve()
            elif word == "var":
                self._parse_var_decl()
            elif word == "array":
                self._parse_array_decl()
            elif word in _PAR_TYPES:
                self._parse_par_decl()
            else:
                raise self._error(f"expected item, found {word!r}")
        if not self.goal_seen:
            raise FlatZincError(f"missing solve item in {self.model.source_path}")
        self._finalize()
        return self.model

    def _skip_predicate(self) -> None:
        self._next()
        while True:
            tok = self._next()
            if tok.kind == ";":
                return
            if tok.kind == "EOF":
                raise self._error("unterminated predicate item", tok)

    def _register(self, name: str, tok: Token) -> None:
        if name in self.names:
            raise FlatZincError(f"duplicate identifier {name!r}", tok.line, tok.column)
        self.names.add(name)

    def _parse_par_decl(self) -> None:
        base = self._next().value
        if base == "set":
            self._expect_keyword("of")
            self._expect_keyword("int")
        self._expect(":")
        name_tok = self._expect("IDENT", "identifier")
        self._parse_annotations()  # tolerated on parameters, carried nowhere
        self._expect("=", "'=' (parameters must be assigned)")
        value = self._parse_expr()
        self._expect(";")
        self._register(name_tok.value, name_tok)
        self._check_par_value(base, value, name_tok)
        self.params[name_tok.value] = value

    def _check_par_value(self, base: str, value: Term, tok: Token) -> None:
        ok = {
            "bool": (BoolLit,),
            "int": (IntLit,),
            "float": (FloatLit, IntLit),
            "set": (SetLit, RangeLit),
        }[base]
        if not isinstance(value, ok):
            raise FlatZincError(
                f"type mismatch: parameter {tok.value!r} declared {base} but assigned "
                f"{type(value).__name__}", tok.line, tok.column
            )

    def _parse_var_decl(self) -> None:
        self._expect_keyword("var")
        dom = self._parse_domain()
        self._expect(":")
        name_tok = self._expect("IDENT", "identifier")
        anns = self._parse_annotations()
        binding: Term | None = None
        if self._accept("="):
            binding = self._parse_expr()
        self._expect(";")
        self._register(name_tok.value, name_tok)
        self.model.variables[name_tok.value] = Variable(name_tok.value, dom, binding, anns)

    def _parse_array_decl(self) -> None:
        self._expect_keyword("array")
        self._expect("[")
        lo = self._parse_signed_int()
        self._expect("DOTDOT")
        hi = self._parse_signed_int()
        self._expect("]")
        if lo != 1:
            raise self._error(f"array index set must start at 1, got {lo}..{hi}")
        size = hi
        self._expect_keyword("of")
        if self._peek().kind == "IDENT" and self._peek().value == "var":
            self._next()
            dom = self._parse_domain()
            self._expect(":")
            name_tok = self._expect("IDENT", "identifier")
            anns = self._parse_annotations()
            items: tuple[Term, ...] | None = None
            if self._accept("="):
                value = self._parse_expr()
                if not isinstance(value, ArrayLit):
                    raise self._error("variable array must be assigned an array literal")
                items = value.items
                if len(items) != size:
                    raise FlatZincError(
                        f"array {name_tok.value!r} declared with {size} elements "
                        f"but assigned {len(items)}", name_tok.line, name_tok.column
                    )
            self._expect(";")
            self._register(name_tok.value, name_tok)
            self.model.array_decls.append(ArrayDecl(name_tok.value, size, dom, anns, items))
            if items is None:
                refs = []
                for k in range(1, size + 1):
                    elem = f"{name_tok.value}__{k}"
                    while elem in self.names:
                        elem += "_"
                    self.names.add(elem)
                    self.model.variables[elem] = Variable(
                        elem, dom, None, anns, owner_array=name_tok.value
                    )
                    refs.append(VarRef(elem))
                self.model.arrays[name_tok.value] = tuple(refs)
            else:
                self.model.arrays[name_tok.value] = items
        else:
            base_tok = self._expect("IDENT", "element type")
            base = base_tok.value
            if base not in _PAR_TYPES:
                raise self._error(f"unknown array element type {base!r}", base_tok)
            if base == "set":
                self._expect_keyword("of")
                self._expect_keyword("int")
            self._expect(":")
            name_tok = self._expect("IDENT", "identifier")
            self._parse_annotations()
            self._expect("=", "'=' (parameter arrays must be assigned)")
            value = self._parse_expr()
            self._expect(";")
            if not isinstance(value, ArrayLit):
                raise self._error("parameter array must be assigned an array literal")
            if len(value.items) != size:
                raise FlatZincError(
                    f"array {name_tok.value!r} declared with {size} elements "
                    f"but assigned {len(value.items)}", name_tok.line, name_tok.column
                )
            for item in value.items:
                self._check_par_value(base, item, name_tok)
            self._register(name_tok.value, name_tok)
            self.params[name_tok.value] = value

    def _parse_constraint(self) -> None:
        self._expect_keyword("constraint")
        name_tok = self._expect("IDENT", "constraint name")
        self._expect("(")
        args: list[Term] = []
        if self._peek().kind != ")":
            args.append(self._parse_expr())
            while self._accept(","):
                args.append(self._parse_expr())
        self._expect(")")
        anns = self._parse_annotations()
        self._expect(";")
        self.model.constraints.append(Constraint(name_tok.value, tuple(args), anns))

    def _parse_solve(self) -> None:
        tok = self._expect_keyword("solve")
        if self.goal_seen:
            raise FlatZincError("duplicate solve item", tok.line, tok.column)
        anns = self._parse_annotations()
        kind_tok = self._expect("IDENT", "solve kind")
        objective: Term | None = None
        if kind_tok.value == "satisfy":
            kind = GoalKind.SATISFY
        elif kind_tok.value == "minimize":
            kind = GoalKind.MINIMIZE
            objective = self._parse_expr()
        elif kind_tok.value == "maximize":
            kind = GoalKind.MAXIMIZE
            objective = self._parse_expr()
        else:
            raise self._error(f"expected satisfy/minimize/maximize, found {kind_tok.value!r}", kind_tok)
        self._expect(";")
        self.goal_seen = True
        self.model.goal = SolveGoal(kind, objective, anns)

    # -- expressions ----------------------------------------------------

    def _parse_signed_int(self) -> int:
        neg = self._accept("-") is not None
        tok = self._expect("INT", "integer")
        v = int(tok.value)
        return -v if neg else v

    def _parse_number(self) -> int | float:
        neg = self._accept("-") is not None
        tok = self._next()
        if tok.kind == "INT":
            v: int | float = int(tok.value)
        elif tok.kind == "FLOAT":
            v = float(tok.value)
        else:
            raise self._error(f"expected number, found {tok.value!r}", tok)
        return -v if neg else v

    def _parse_expr(self) -> Term:
        tok = self._peek()
        if tok.kind in ("INT", "FLOAT", "-"):
            v1 = self._parse_number()
            if self._accept("DOTDOT"):
                v2 = self._parse_number()
                if isinstance(v1, int) and isinstance(v2, int):
                    return RangeLit(v1, v2)
                return RangeLit(float(v1), float(v2))
            return IntLit(v1) if isinstance(v1, int) else FloatLit(v1)
        if tok.kind == "STRING":
            self._next()
            return StringLit(_unescape(tok.value[1:-1]))
        if tok.kind == "{":
            return self._parse_set_literal()
        if tok.kind == "[":
            self._next()
            items: list[Term] = []
            if self._peek().kind != "]":
                items.append(self._parse_expr())
                while self._accept(","):
                    items.append(self._parse_expr())
            self._expect("]")
            return ArrayLit(tuple(items))
        if tok.kind == "IDENT":
            self._next()
            if tok.value == "true":
                return BoolLit(True)
            if tok.value == "false":
                return BoolLit(False)
            if self._accept("("):
                args: list[Term] = []
                if self._peek().kind != ")":
                    args.append(self._parse_expr())
                    while self._accept(","):
                        args.append(self._parse_expr())
                self._expect(")")
                return Ann(tok.value, tuple(args))
            if self._accept("["):
                idx = self._parse_signed_int()
                self._expect("]")
                return ArrayAccess(tok.value, idx)
            return VarRef(tok.value)
        raise self._error(f"expected expression, found {tok.value!r}")

    def _parse_set_literal(self) -> SetLit:
        self._expect("{")
        values: list[int] = []
        if self._peek().kind != "}":
            values.append(self._parse_signed_int())
            while self._accept(","):
                values.append(self._parse_signed_int())
        self._expect("}")
        return SetLit(tuple(sorted(set(values))))

    def _parse_domain(self) -> Domain:
        tok = self._peek()
        if tok.kind == "IDENT":
            if tok.value == "bool":
                self._next()
                return Domain(DomainKind.BOOL)
            if tok.value == "int":
                self._next()
                return Domain(DomainKind.INT_UNBOUNDED)
            if tok.value == "float":
                self._next()
                return Domain(DomainKind.FLOAT_UNBOUNDED)
            if tok.value == "set":
                self._next()
                self._expect_keyword("of")
                inner = self._peek()
                if inner.kind == "IDENT" and inner.value == "int":
                    self._next()
                    return Domain(DomainKind.SET_UNBOUNDED)
                if inner.kind == "{":
                    lit = self._parse_set_literal()
                    return Domain(DomainKind.SET_OF_INT, values=lit.values)
                lo = self._parse_signed_int()
                self._expect("DOTDOT")
                hi = self._parse_signed_int()
                return Domain(DomainKind.SET_OF_INT, lo=lo, hi=hi)
            raise self._error(f"expected domain, found {tok.value!r}")
        if tok.kind == "{":
            lit = self._parse_set_literal()
            return Domain(DomainKind.INT_SET, values=lit.values)
        lo = self._parse_number()
        self._expect("DOTDOT")
        hi = self._parse_number()
        if isinstance(lo, int) and isinstance(hi, int):
            return Domain(DomainKind.INT_RANGE, lo=lo, hi=hi)
        return Domain(DomainKind.FLOAT_RANGE, lo=float(lo), hi=float(hi))

    def _parse_annotations(self) -> tuple[Ann, ...]:
        anns: list[Ann] = []
        while self._accept("DCOLON"):
            name_tok = self._expect("IDENT", "annotation name")
            args: tuple[Term, ...] = ()
            if self._accept("("):
                items: list[Term] = []
                if self._peek().kind != ")":
                    items.append(self._parse_expr())
                    while self._accept(","):
                        items.append(self._parse_expr())
                self._expect(")")
                args = tuple(items)
            anns.append(Ann(name_tok.value, args))
        return tuple(anns)

    # -- post-parse normalization ---------------------------------------

    def _subst(self, term: Term) -> Term:
        if isinstance(term, VarRef):
            if term.name in self.params:
                return self.params[term.name]
            if term.name in self.model.arrays:
                return ArrayLit(self.model.arrays[term.name])
            return term
        if isinstance(term, ArrayAccess):
            items: tuple[Term, ...] | None = None
            if term.name in self.params:
                p = self.params[term.name]
                if isinstance(p, ArrayLit):
                    items = p.items
            elif term.name in self.model.arrays:
                items = self.model.arrays[term.name]
            if items is None:
                raise FlatZincError(f"index into unknown array {term.name!r}")
            if not 1 <= term.index <= len(items):
                raise FlatZincError(f"index {term.index} out of bounds for array {term.name!r}")
            return items[term.index - 1]
        if isinstance(term, ArrayLit):
            return ArrayLit(tuple(self._subst(t) for t in term.items))
        if isinstance(term, Ann):
            return Ann(term.name, tuple(self._subst(t) for t in term.args))
        return term

    def _check_refs(self, term: Term, where: str) -> None:
        if isinstance(term, VarRef):
            if term.name not in self.model.variables:
                raise FlatZincError(f"undefined identifier {term.name!r} in {where}")
        elif isinstance(term, ArrayLit):
            for t in term.items:
                self._check_refs(t, where)
        elif isinstance(term, Ann):
            for t in term.args:
                self._check_refs(t, where)

    def _finalize(self) -> None:
        m = self.model
        # Arrays assigned at declaration may reference parameters.
        for name, items in list(m.arrays.items()):
            m.arrays[name] = tuple(self._subst(t) for t in items)
        for d in m.array_decls:
            if d.items is not None:
                d.items = m.arrays[d.name]
                for t in d.items:
                    self._check_refs(t, f"array {d.name!r}")
        for v in m.variables.values():
            if v.binding is not None:
                v.binding = self._subst(v.binding)
                self._check_binding(v)
        new_cons = []
        for c in m.constraints:
            args = tuple(self._subst(a) for a in c.args)
            for a in args:
                self._check_refs(a, f"constraint {c.name!r}")
            anns = tuple(self._subst(a) for a in c.annotations)
            new_cons.append(Constraint(c.name, args, anns))
        m.constraints = new_cons
        goal = m.goal
        objective = self._subst(goal.objective) if goal.objective is not None else None
        if objective is not None:
            self._check_refs(objective, "solve item")
        m.goal = SolveGoal(goal.kind, objective, tuple(self._subst(a) for a in goal.annotations))

    def _check_binding(self, v: Variable) -> None:
        b = v.binding
        if isinstance(b, (VarRef, ArrayAccess)):
            if isinstance(b, ArrayAccess):
                raise FlatZincError(f"unresolved array access in binding of {v.name!r}")
            target = self.model.variables.get(b.name)
            if target is None:
                raise FlatZincError(f"undefined identifier {b.name!r} in binding of {v.name!r}")
            if not _same_family(v.domain, target.domain):
                raise FlatZincError(
                    f"type mismatch: {v.name!r} aliases {b.name!r} of a different type"
                )
            return
        if isinstance(b, IntLit) and v.domain.is_float:
            v.binding = b = FloatLit(float(b.value))
        ok = (
            (v.domain.is_bool and isinstance(b, BoolLit))
            or (v.domain.is_int and isinstance(b, IntLit))
            or (v.domain.is_float and isinstance(b, FloatLit))
            or (v.domain.is_set and isinstance(b, (SetLit, RangeLit)))
        )
        if not ok:
            raise FlatZincError(
                f"type mismatch: variable {v.name!r} assigned {type(b).__name__}"
            )


def _same_family(a: Domain, b: Domain) -> bool:
    return (a.is_bool, a.is_int, a.is_float, a.is_set) == (b.is_bool, b.is_int, b.is_float, b.is_set)


def _unescape(s: str) -> str:
    return s.replace('\\"', '"').replace("\\\\", "\\").replace("\\n", "\n")


# -- pretty printer ------------------------------------------------------


def term_to_text(term: Term) -> str:
    if isinstance(term, IntLit):
        return str(term.value)
    if isinstance(term, FloatLit):
        return repr(term.value)
    if isinstance(term, BoolLit):
        return "true" if term.value else "false"
    if isinstance(term, StringLit):
        return '"' + term.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(term, SetLit):
        return "{" + ", ".join(str(v) for v in term.values) + "}"
    if isinstance(term, RangeLit):
        lo, hi = term.lo, term.hi
        if isinstance(lo, float) or isinstance(hi, float):
            return f"{lo!r}..{hi!r}"
        return f"{lo}..{hi}"
    if isinstance(term, VarRef):
        return term.name
    if isinstance(term, ArrayLit):
        return "[" + ", ".join(term_to_text(t) for t in term.items) + "]"
    if isinstance(term, ArrayAccess):
        return f"{term.name}[{term.index}]"
    if isinstance(term, Ann):
        if term.args:
            return term.name + "(" + ", ".join(term_to_text(t) for t in term.args) + ")"
        return term.name
    raise TypeError(f"unknown term {term!r}")


def domain_to_text(dom: Domain) -> str:
    k = dom.kind
    if k is DomainKind.BOOL:
        return "bool"
    if k is DomainKind.INT_UNBOUNDED:
        return "int"
    if k is DomainKind.FLOAT_UNBOUNDED:
        return "float"
    if k is DomainKind.INT_RANGE:
        return f"{dom.lo}..{dom.hi}"
    if k is DomainKind.FLOAT_RANGE:
        return f"{dom.lo!r}..{dom.hi!r}"
    if k is DomainKind.INT_SET:
        return "{" + ", ".join(str(v) for v in dom.values) + "}"
    if k is DomainKind.SET_UNBOUNDED:
        return "set of int"
    if dom.values is not None:
        return "set of {" + ", ".join(str(v) for v in dom.values) + "}"
    return f"set of {dom.lo}..{dom.hi}"


def _anns_text(anns: tuple[Ann, ...]) -> str:
    return "".join(" :: " + term_to_text(a) for a in anns)


def model_to_text(model: Model) -> str:
    """Render a model back to FlatZinc text.

    Parsing the result yields a model structurally equal to the input
    (source path aside): bound parameters were already substituted at
    parse time, so the printed text is self-contained.
    """
    lines: list[str] = []
    for v in model.variables.values():
        if v.owner_array is not None:
            continue
        line = f"var {domain_to_text(v.domain)}: {v.name}" + _anns_text(v.annotations)
        if v.binding is not None:
            line += f" = {term_to_text(v.binding)}"
        lines.append(line + ";")
    for d in model.array_decls:
        line = f"array [1..{d.size}] of var {domain_to_text(d.domain)}: {d.name}" + _anns_text(d.annotations)
        if d.items is not None:
            line += " = [" + ", ".join(term_to_text(t) for t in d.items) + "]"
        lines.append(line + ";")
    for c in model.constraints:
        args = ", ".join(term_to_text(a) for a in c.args)
        lines.append(f"constraint {c.name}({args})" + _anns_text(c.annotations) + ";")
    goal = model.goal
    line = "solve" + _anns_text(goal.annotations)
    if goal.kind is GoalKind.SATISFY:
        line += " satisfy;"
    else:
        word = "minimize" if goal.kind is GoalKind.MINIMIZE else "maximize"
        line += f" {word} {term_to_text(goal.objective)};"
    lines.append(line)
    return "\n".join(lines) + "\n"
