from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saito_hodge.catalog import builtin
from saito_hodge.errors import DomainError, ParseError
from saito_hodge.expr import BinOp, Name, Neg, Num, Pow, format_value, parse, parse_poly, parse_value, to_text, tree_equal
from saito_hodge.forms import LogDer, LogForm
from saito_hodge.kernel import Poly
from tests.conftest import polys

names = st.sampled_from(["x", "y", "dx", "dy"])
leaves = st.one_of(
    st.builds(Num, st.integers(0, 20).map(Fraction)),
    st.builds(Name, names),
)
trees = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(BinOp, st.sampled_from("+-*/"), kids, kids),
        st.builds(Neg, kids),
        st.builds(Pow, kids, st.integers(-3, 4)),
    ),
    max_leaves=12,
)


@settings(max_examples=400)
@given(trees)
def test_print_parse_round_trip(tree):
    assert tree_equal(parse(to_text(tree)), tree)


def test_precedence_and_associativity():
    t = parse("a - b - c")
    assert tree_equal(t, BinOp("-", BinOp("-", Name("a"), Name("b")), Name("c")))
    assert to_text(parse("a - (b - c)")) == "a - (b - c)"
    with pytest.raises(ParseError):
        parse("2^3^1")
    assert tree_equal(parse("-x^2"), Neg(Pow(Name("x"), 2)))


def test_unicode_operators():
    assert tree_equal(parse("x·y − 1"), parse("x*y - 1"))
    assert tree_equal(parse("x**2"), parse("x^2"))


@pytest.mark.parametrize(
    "text, line, column",
    [("x + ", 1, 5), ("(x + y", 1, 7), ("x $ y", 1, 3), ("x +\n  * y", 2, 3), ("", 1, 1), ("x^y", 1, 3)],
)
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_parse_poly():
    x, y = Poly.gens(2)
    assert parse_poly("(x+y)^2/2", ["x", "y"]) == (x + y) ** 2 * Fraction(1, 2)
    with pytest.raises(DomainError):
        parse_poly("1/x", ["x", "y"])
    with pytest.raises(ParseError):
        parse_poly("z", ["x", "y"])


def test_golden_form_parses(B2):
    w = parse_value("(x^4+y^4)*(dx/x + dy/y)", B2)
    assert isinstance(w, LogForm)
    x, y = B2.ring.var(0), B2.ring.var(1)
    assert w.coeffs == ((x**4 + y**4) / x, (x**4 + y**4) / y)
    assert w.pole_order() == 1


def test_datum_aliases(B2):
    assert parse_value("dP1", B2) == LogForm.differential(B2, B2.invariants[0])
    assert parse_value("theta_E", B2) == LogDer.euler(B2)
    assert parse_value("Q", B2) == B2.ring(B2.Q)
    assert parse_value("∂x + del_y", B2) == LogDer(B2, [1, 1])


def test_mixing_kinds_is_a_domain_error(B2):
    with pytest.raises(DomainError):
        parse_value("dx + ∂x", B2)
    with pytest.raises(DomainError):
        parse_value("dx * dy", B2)
    with pytest.raises(DomainError):
        parse_value("x / dx", B2)


def test_division_by_non_unit_is_rejected(B2):
    from saito_hodge.errors import NotAUnit

    with pytest.raises(NotAUnit):
        parse_value("dx/(x^2+y^2)", B2)


@pytest.mark.parametrize("text", ["(x^4+y^4)*(dx/x + dy/y)", "x/Q * dy - 3*dx", "y^2*∂x", "x^3/(x-y)^2"])
def test_format_value_round_trip(B2, text):
    v = parse_value(text, B2)
    assert parse_value(format_value(v, B2), B2) == v


@settings(max_examples=150)
@given(polys(2, max_degree=5), polys(2, max_degree=5), st.integers(0, 3), st.booleans())
def test_printed_forms_parse_back(p, q, e, derivation):
    d = builtin("B2")
    cls = LogDer if derivation else LogForm
    w = cls(d, [d.ring(p, e), d.ring(q, e)])
    assert parse_value(format_value(w, d), d) == w
