"""FlatZinc parser unit: round trips, normalization, diagnostics."""

import pytest

from fznfeat.errors import FlatZincError, FlatZincSyntaxError
from fznfeat.fzn import model_to_text, parse_flatzinc
from fznfeat.fzn.ast import (
    ArrayLit,
    BoolLit,
    DomainKind,
    GoalKind,
    IntLit,
    RangeLit,
    SetLit,
    VarRef,
)

BASIC = """\
int: k = 3;
var 1..9: a;
var 1..9: b :: output_var = a;
array [1..2] of var 0..1: xs;
constraint int_le(a, k);
constraint int_lin_eq([1, 1], xs, 1);
solve minimize a;
"""


def test_parameters_substituted():
    m = parse_flatzinc(BASIC)
    con = m.constraints[0]
    assert con.args == (VarRef("a"), IntLit(3))
    assert "k" not in m.variables


def test_alias_recorded():
    m = parse_flatzinc(BASIC)
    assert m.variables["b"].is_alias
    assert m.variables["b"].binding == VarRef("a")


def test_var_array_elements_materialized():
    m = parse_flatzinc(BASIC)
    assert {"xs__1", "xs__2"} <= set(m.variables)
    con = m.constraints[1]
    assert con.args[1] == ArrayLit((VarRef("xs__1"), VarRef("xs__2")))


def test_goal_minimize():
    m = parse_flatzinc(BASIC)
    assert m.goal.kind is GoalKind.MINIMIZE
    assert m.goal.objective == VarRef("a")


def test_round_trip_is_fixpoint():
    m1 = parse_flatzinc(BASIC)
    text = model_to_text(m1)
    m2 = parse_flatzinc(text)
    assert m1.structure() == m2.structure()
    assert model_to_text(m2) == text


def test_round_trip_on_set_and_float_domains():
    src = """\
var {1, 3, 5}: s;
var 0.5..1.5: f;
var set of 2..4: t;
var bool: p = true;
constraint set_in(s, {1, 5});
constraint float_le(f, 1.0);
solve satisfy;
"""
    m1 = parse_flatzinc(src)
    m2 = parse_flatzinc(model_to_text(m1))
    assert m1.structure() == m2.structure()


def test_domain_kinds():
    src = "var int: a;\nvar float: b;\nvar set of 1..2: c;\nsolve satisfy;\n"
    m = parse_flatzinc(src)
    assert m.variables["a"].domain.kind is DomainKind.INT_UNBOUNDED
    assert m.variables["b"].domain.kind is DomainKind.FLOAT_UNBOUNDED
    assert m.variables["c"].domain.kind is DomainKind.SET_OF_INT


def test_constant_bool_and_set_literals():
    src = "var bool: p = false;\nvar 1..3: x;\nconstraint set_in(x, {1, 2});\nsolve satisfy;\n"
    m = parse_flatzinc(src)
    assert m.variables["p"].binding == BoolLit(False)
    assert m.constraints[0].args[1] == SetLit((1, 2))


def test_par_array_substitution():
    src = """\
array [1..3] of int: w = [2, 4, 6];
var 0..9: x;
constraint int_lin_le(w, [x, x, x], 10);
solve satisfy;
"""
    m = parse_flatzinc(src)
    assert m.constraints[0].args[0] == ArrayLit((IntLit(2), IntLit(4), IntLit(6)))


def test_annotation_with_range_argument():
    src = "var 1..5: x;\nconstraint int_le(x, 4) :: some_ann(1..3);\nsolve satisfy;\n"
    m = parse_flatzinc(src)
    ann = m.constraints[0].annotations[0]
    assert ann.name == "some_ann"
    assert ann.args == (RangeLit(1, 3),)


def test_missing_solve_is_error():
    with pytest.raises(FlatZincError, match="solve"):
        parse_flatzinc("var 1..2: x;\n")


def test_duplicate_solve_is_error():
    with pytest.raises(FlatZincError, match="solve"):
        parse_flatzinc("var 1..2: x;\nsolve satisfy;\nsolve satisfy;\n")


def test_undefined_identifier_is_error():
    with pytest.raises(FlatZincError, match="nope"):
        parse_flatzinc("var 1..2: x;\nconstraint int_le(x, nope);\nsolve satisfy;\n")


def test_syntax_error_carries_location():
    with pytest.raises(FlatZincSyntaxError) as exc:
        parse_flatzinc("var 1..2: ;\nsolve satisfy;\n")
    assert exc.value.line == 1


def test_empty_range_rejected():
    with pytest.raises(FlatZincError):
        parse_flatzinc("var 5..1: x;\nsolve satisfy;\n")


def test_duplicate_declaration_rejected():
    with pytest.raises(FlatZincError, match="x"):
        parse_flatzinc("var 1..2: x;\nvar 1..2: x;\nsolve satisfy;\n")


def test_array_index_out_of_bounds():
    src = "array [1..2] of var 1..3: a;\nconstraint int_le(a[3], 2);\nsolve satisfy;\n"
    with pytest.raises(FlatZincError, match="bounds"):
        parse_flatzinc(src)


def test_wrong_constant_type_rejected():
    with pytest.raises(FlatZincError):
        parse_flatzinc('var 1..3: x = "text";\nsolve satisfy;\n')


def test_comments_and_whitespace_ignored():
    src = "% header\nvar 1..2: x; % trailing\n\n  solve satisfy;\n"
    m = parse_flatzinc(src)
    assert set(m.variables) == {"x"}
