"""Reader and printer for the parenthesized formula format."""

import pytest
from hypothesis import given, strategies as st

from weakarith.sexpr import (
    ParseError,
    infer_language,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
)
from weakarith.syntax import (
    And,
    App,
    Eq,
    Exists,
    ForAll,
    Implies,
    Not,
    Or,
    Rel,
    TRUE,
    FALSE,
    Var,
)
from weakarith.theories import get_language

LANG = get_language("R")
LANG_EQ = get_language("eq")


def test_parse_simple_atom():
    assert parse_formula("(= 0 0)", LANG) == Eq(App("0"), App("0"))


def test_parse_nested():
    got = parse_formula("(forall x (-> (<= x 0) (= x 0)))", LANG)
    want = ForAll("x", Implies(Rel("<=", (Var("x"), App("0"))),
                               Eq(Var("x"), App("0"))))
    assert got == want


def test_parse_constants():
    assert parse_formula("true", LANG) == TRUE
    assert parse_formula("(and true false)", LANG) == And(TRUE, FALSE)


def test_multiline_whitespace():
    text = "(and true\n\t true)\n"
    assert parse_formula(text, LANG) == And(TRUE, TRUE)


def test_family_symbols_parse():
    lang = get_language("prf")
    phi = parse_formula("(exists x (= (f#0 c#3) x))", lang)
    assert isinstance(phi, Exists)
    assert phi.body == Eq(App("f#0", (App("c#3"),)), Var("x"))


@pytest.mark.parametrize("bad", [
    "",
    "(= 0 0",
    "(= 0 0))",
    "(and true)",
    "(forall 0 true)",
    "(forall x x)",
    "(= 0)",
    "(bogus 0 0)",
    "(<= 0)",
    "(not)",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad, LANG)


def test_parse_error_carries_position():
    try:
        parse_formula("(and true\n  (= 0))", LANG)
    except ParseError as exc:
        assert exc.line == 2
        assert exc.col >= 1
    else:
        pytest.fail("expected ParseError")


def test_reserved_heads_cannot_be_symbols():
    with pytest.raises(ParseError):
        parse_formula("(forall forall true)", LANG)


def test_print_parse_golden():
    text = "(forall x (or (<= x 0) (<= 0 x)))"
    assert print_formula(parse_formula(text, LANG)) == text


def test_print_term_golden():
    assert print_term(App("+", (App("S", (App("0"),)), Var("x")))) == \
        "(+ (S 0) x)"


def test_parse_term_rejects_formula():
    with pytest.raises(ParseError):
        parse_term("(= 0 0)", LANG)


def test_infer_language_collects_symbols():
    lang = infer_language(["(and (E x y) (P 0))"])
    phi = parse_formula("(E 0 0)", lang)
    assert phi == Rel("E", (App("0"), App("0")))


# random formula trees over the arithmetic language, depth-bounded
_terms = st.recursive(
    st.sampled_from([Var("x"), Var("y"), App("0")]),
    lambda kids: st.builds(lambda t: App("S", (t,)), kids) |
    st.builds(lambda a, b: App("+", (a, b)), kids, kids),
    max_leaves=6)

_atoms = (st.builds(Eq, _terms, _terms) |
          st.builds(lambda a, b: Rel("<=", (a, b)), _terms, _terms) |
          st.just(TRUE) | st.just(FALSE))

_formulas = st.recursive(
    _atoms,
    lambda kids: st.builds(Not, kids) |
    st.builds(And, kids, kids) | st.builds(Or, kids, kids) |
    st.builds(Implies, kids, kids) |
    st.builds(ForAll, st.sampled_from(["x", "y"]), kids) |
    st.builds(Exists, st.sampled_from(["x", "y"]), kids),
    max_leaves=8)


@given(_formulas)
def test_roundtrip_property(phi):
    assert parse_formula(print_formula(phi), LANG) == phi
