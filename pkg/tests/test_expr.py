import pytest
from hypothesis import given, strategies as st

from cotilt.errors import ExprSemanticError, ExprSyntaxError
from cotilt.expr import evaluate, evaluate_summands, parse, to_text
from cotilt.modules import describe, is_isomorphic, simple


def test_basic_terms(a4_regular):
    A = a4_regular.A
    assert evaluate("P(1)", A).dim == 2
    assert evaluate("R", A).dim == 7
    assert evaluate("0", A).dim == 0
    assert evaluate("I(4)", A).dim == 2
    assert describe(evaluate("S(1)+S(3)", A)) == "[1,0,1,0]{1+3}"


def test_rad_and_quotients(a5):
    A = a5.A
    assert evaluate("rad(P(1))", A).dim_vector() == (0, 0, 1, 1, 0)
    assert evaluate("radq(P(1),2)", A).dim_vector() == (0, 1, 1, 0, 0)
    assert evaluate("radq(P(1),1)", A).dim_vector() == (0, 1, 0, 0, 0)
    assert evaluate("socq(P(1),1)", A).dim_vector() == (0, 1, 1, 0, 0)
    assert is_isomorphic(evaluate("top(P(2))", A), simple(A, 2))


def test_regular_expands_into_summands(diamond):
    assert len(evaluate_summands(parse("R"), diamond.A)) == 4
    assert len(evaluate_summands(parse("R+S(1)"), diamond.A)) == 5


@pytest.mark.parametrize("text,col", [("P(1", 4), ("P(1)+", 6), ("Q(1)", 1), ("radq(P(1))", 10)])
def test_syntax_errors_carry_position(text, col):
    with pytest.raises(ExprSyntaxError) as err:
        parse(text)
    assert err.value.line == 1
    assert err.value.column == col


def test_semantic_errors(a4_regular):
    with pytest.raises(ExprSemanticError):
        evaluate("S(7)", a4_regular.A)
    with pytest.raises(ExprSemanticError):
        evaluate("radq(P(1),0)", a4_regular.A)


atoms = st.sampled_from(["P(1)", "S(2)", "I(3)", "R", "0"])
exprs = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: "%s+%s" % t),
        inner.map(lambda e: "rad(%s)" % e),
        st.tuples(inner, st.integers(1, 3)).map(lambda t: "radq(%s,%d)" % t),
        inner.map(lambda e: "top(%s)" % e),
    ),
    max_leaves=5,
)


@given(exprs)
def test_print_parse_round_trip(text):
    node = parse(text)
    assert parse(to_text(node)) == node
