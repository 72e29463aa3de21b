import cmath

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from entropyseq.errors import BranchPointError, ParseError, PoleError
from entropyseq.expr import (Const, Difference, Exp, Power, Product, Quotient, Sqrt, Var,
                             differentiate, evaluate, expand, parse, to_text)

Z = Var()


# -- parse -------------------------------------------------------------------------

def test_parse_exp():
    assert parse("exp(z)") == Exp(Z)


def test_parse_scherk_eta():
    want = Quotient(Product(Const(1j), Z), Difference(Power(Z, 4), Const(1)))
    assert parse("i*z/(z^4-1)") == want


def test_parse_schwarz_sqrt():
    e = parse("sqrt(z^8 - 14*z^4 + 1)")
    assert isinstance(e, Sqrt)
    assert e.arg == parse("z^8-14*z^4+1")


def test_imaginary_literal_and_negative_exponent():
    assert parse("0.5i") == Const(0.5j)
    assert parse("z^-2") == Power(Z, -2)


def test_unary_minus_binds_looser_than_power():
    assert evaluate(parse("-z^2"), 2.0) == -4


@pytest.mark.parametrize("text,offset", [
    ("z + ", 4),
    ("z * $", 4),
    ("foo(z)", 0),
    ("1.2.3", 0),
    ("3x", 0),
    ("z^z", 2),
    ("(z", 2),
    ("\u00a0z + $", 6),
])
def test_parse_errors_report_byte_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_unknown_identifier_message():
    with pytest.raises(ParseError, match="unknown identifier"):
        parse("sin(z)")


def test_malformed_complex_literal():
    with pytest.raises(ParseError, match="malformed complex literal"):
        parse("2j")


_LEAVES = st.sampled_from(["z", "i", "2", "0.5", "3i", "1.25"])


def _texts():
    return st.recursive(
        _LEAVES,
        lambda inner: st.one_of(
            st.tuples(inner, st.sampled_from("+-*/"), inner).map(lambda t: f"({t[0]}){t[1]}({t[2]})"),
            st.tuples(inner, st.integers(-3, 4)).map(lambda t: f"({t[0]})^{t[1]}"),
            inner.map(lambda s: f"-({s})"),
            inner.map(lambda s: f"exp({s})"),
            inner.map(lambda s: f"sqrt({s})"),
        ),
        max_leaves=12,
    )


@settings(max_examples=300, deadline=None)
@given(_texts())
def test_parse_print_roundtrip(text):
    tree = parse(text)
    assert parse(to_text(tree)) == tree


# -- differentiate ------------------------------------------------------------------

def test_derivative_examples():
    for z0 in (0.3 + 0.1j, -0.2j):
        assert evaluate(differentiate(parse("exp(z)")), z0) == pytest.approx(cmath.exp(z0))
        assert evaluate(differentiate(parse("z^5")), z0) == pytest.approx(5 * z0 ** 4)
        w = cmath.sqrt(z0 ** 8 - 14 * z0 ** 4 + 1)
        want = (8 * z0 ** 7 - 56 * z0 ** 3) / (2 * w)
        got = evaluate(differentiate(parse("sqrt(z^8-14*z^4+1)")), z0)
        assert abs(got - want) < 1e-14


_SYMPY_CASES = ["exp(z)*z^3", "i*z/(z^4-1)", "sqrt(z^8-14*z^4+1)", "exp(-z)/(z+2)^2",
                "z^3/(z^3-1)^2"]


@pytest.mark.parametrize("text", _SYMPY_CASES)
def test_derivative_matches_sympy(text):
    zs = sp.symbols("z")
    f = sp.sympify(text.replace("^", "**").replace("i*", "I*"), locals={"z": zs})
    df = sp.diff(f, zs)
    for z0 in (0.1 + 0.2j, -0.3 + 0.05j):
        want = complex(df.subs(zs, z0).evalf(30))
        assert abs(evaluate(differentiate(parse(text)), z0) - want) < 1e-12 * max(1, abs(want))


# -- evaluate -----------------------------------------------------------------------

def test_evaluate_examples():
    assert evaluate(parse("exp(z)"), 0) == 1
    assert evaluate(parse("sqrt(z^8-14*z^4+1)"), 0) == 1
    with pytest.raises(PoleError):
        evaluate(parse("1/(z^4-1)"), 1)
    with pytest.raises(BranchPointError):
        evaluate(parse("sqrt(z)"), 0)


def test_evaluate_arrays_and_constants():
    z = np.array([0.0, 1.0, 2.0j])
    np.testing.assert_allclose(evaluate(parse("z^2+1"), z), z ** 2 + 1)
    assert evaluate(parse("3"), z).shape == (3,)


def test_sqrt_anchor_on_negative_axis():
    assert evaluate(parse("sqrt(z)"), -4.0) == 2j


# -- expand -------------------------------------------------------------------------

def test_expand_exp():
    s = expand(parse("exp(z)"), 0, 4)
    np.testing.assert_allclose(s.coeffs, [1, 1, 0.5, 1 / 6])


def test_expand_enneper_k_hopf():
    s = expand(parse("-3*z^2"), 0, 3)
    assert s.valuation == 2
    assert s.coeff(2) == -3


def test_expand_geometric():
    s = expand(parse("1/(z^4-1)"), 0, 9)
    want = np.zeros(9)
    want[::4] = -1
    np.testing.assert_allclose(s.padded(0, 9), want, atol=1e-15)


def test_expand_laurent_pole():
    s = expand(parse("exp(z)/z^2"), 0, 5)
    assert s.valuation == -2
    np.testing.assert_allclose(s.coeffs, [1, 1, 0.5, 1 / 6, 1 / 24])


def test_expand_branch_point():
    with pytest.raises(ArithmeticError):
        expand(parse("sqrt(z)"), 0, 4)


# expression, base point, polynomial whose roots are the singularities
_EXPANSION_CASES = [
    ("i*z/(z^4-1)", 0.2 + 0.1j, [1, 0, 0, 0, -1]),
    ("sqrt(z^8-14*z^4+1)", 0.1j, [1, 0, 0, 0, -14, 0, 0, 0, 1]),
    ("exp(-z)*z^3 + 1/(z-2)", 0.5, [1, -2]),
    ("z^3/(z^3-1)^2", -0.3 + 0.2j, [1, 0, 0, -1]),
]


@pytest.mark.parametrize("text,p,sing", _EXPANSION_CASES)
def test_expand_agrees_with_evaluate(text, p, sing):
    e = parse(text)
    s = expand(e, p, 24)
    r = 0.3 * np.min(np.abs(np.roots(sing) - p))
    rng = np.random.default_rng(7)
    u = np.exp(2j * np.pi * rng.random(100))
    exact = evaluate(e, p + r * u)
    approx = s.evaluate(r * u)
    assert np.max(np.abs(exact - approx) / np.maximum(1, np.abs(exact))) < 1e-9


@pytest.mark.parametrize("text,p,_sing", _EXPANSION_CASES)
def test_differentiate_commutes_with_expand(text, p, _sing):
    e = parse(text)
    a = expand(differentiate(e), p, 16)
    b = expand(e, p, 17).derivative()
    lo, hi = min(a.valuation, b.valuation), min(a.prec, b.prec)
    x, y = a.padded(lo, hi), b.padded(lo, hi)
    assert np.max(np.abs(x - y)) <= 1e-12 * max(1.0, np.max(np.abs(x)))
