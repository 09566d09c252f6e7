"""Exact linear forms, polynomials, cones, and piecewise expressions."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropprym.poly import (
    Cone,
    LinearForm,
    MomentExpression,
    PiecewisePolynomial,
    Polynomial,
    parse_linear_form,
    sign_on_cone,
    var_index,
)

X, Y, Z = (LinearForm.variable(n) for n in ("x", "y", "z"))
PX, PY, PZ = (Polynomial.variable(n) for n in ("x", "y", "z"))


# -- linear forms ------------------------------------------------------------

def test_parse_round_trip():
    for text in ("x", "3/2", "2*x + 1/3*y", "x + y + 1", "1/2*x1"):
        form = parse_linear_form(text)
        assert parse_linear_form(str(form)) == form


def test_parse_rejects_garbage():
    for text in ("", "x**2", "x + + y", "-"):
        with pytest.raises(ValueError):
            parse_linear_form(text)


def test_valid_length_requires_nonnegative_combination():
    assert X.is_valid_length()
    assert (X + Y).is_valid_length()
    assert (X - Y).is_valid_length() is False
    assert LinearForm.coerce(Fraction(3, 2)).is_valid_length()
    assert (X + Fraction(-1)).is_valid_length() is False


def test_evaluate():
    env = {var_index("x"): Fraction(3), var_index("y"): Fraction(1, 2)}
    assert (2 * X + Y).evaluate(env) == Fraction(13, 2)


# -- polynomials -------------------------------------------------------------

rationals = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=6
)


def poly_strategy():
    coeffs = st.lists(rationals, min_size=0, max_size=4)
    return coeffs.map(
        lambda cs: sum(
            (Polynomial.coerce(c) * [PX, PY, PZ, PX * PY][i % 4] for i, c in enumerate(cs)),
            Polynomial.coerce(0),
        )
    )


@settings(max_examples=60, deadline=None)
@given(poly_strategy(), poly_strategy(), poly_strategy())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(poly_strategy(), poly_strategy())
def test_substitution_is_ring_homomorphism(p, q):
    sub = {
        var_index("x"): Y + Fraction(1),
        var_index("y"): LinearForm.coerce(2),
        var_index("z"): X + Y,
    }
    assert (p * q).substitute(sub) == p.substitute(sub) * q.substitute(sub)
    assert (p + q).substitute(sub) == p.substitute(sub) + q.substitute(sub)


def test_homogeneous_degree():
    w0_theta = PX * PY + PY * PZ + PZ * PX
    assert w0_theta.homogeneous_degree() == 2
    p2_like = PX * PX * PY
    assert p2_like.homogeneous_degree() == 3
    assert (PX * PX + PX).homogeneous_degree() is None


def test_polynomial_string_round_trip():
    p = 4 * PX * PX + PY * PZ * Fraction(1, 3) - PX
    assert Polynomial.from_json(p.to_json()) == p


# -- cones and signs ---------------------------------------------------------

def test_sign_on_cone_orthant():
    assert sign_on_cone(X + Y, Cone()) == "nonneg"
    assert sign_on_cone(-X, Cone()) == "nonpos"
    assert sign_on_cone(X - Y, Cone()) == "indefinite"


def test_sign_on_parameterized_cone():
    # substitute x = s + t, y = s: x - y = t >= 0 on the image cone
    cone = Cone(param={var_index("x"): X + Y, var_index("y"): X})
    assert sign_on_cone(X - Y, cone) == "nonneg"


def test_cone_feasibility():
    assert Cone([X - Y]).interior_nonempty()
    assert not Cone([X - Y, Y - X - Fraction(1)]).interior_nonempty()
    assert not Cone([-X]).interior_nonempty()
    assert Cone([-X]).is_syntactically_empty()


def test_cone_contains():
    cone = Cone([X - Y])
    assert cone.contains({var_index("x"): 2, var_index("y"): 1})
    assert not cone.contains({var_index("x"): 1, var_index("y"): 2})


# -- piecewise ---------------------------------------------------------------

def test_piecewise_arithmetic_and_evaluate():
    pw = PiecewisePolynomial(
        [(Cone([X - Y]), PX), (Cone([Y - X]), PY)]
    )
    doubled = pw * Polynomial.coerce(2)
    env = {var_index("x"): Fraction(5), var_index("y"): Fraction(2)}
    assert pw.evaluate(env) == 5
    assert doubled.evaluate(env) == 10
    env2 = {var_index("x"): Fraction(1), var_index("y"): Fraction(2)}
    assert pw.evaluate(env2) == 2


def test_piecewise_wall_value_agrees():
    pw = PiecewisePolynomial([(Cone([X - Y]), PX), (Cone([Y - X]), PY)])
    wall = {var_index("x"): Fraction(3), var_index("y"): Fraction(3)}
    assert pw.evaluate(wall) == 3


def test_limit_at_zero_keeps_pieces_meeting_the_face():
    pw = PiecewisePolynomial([(Cone([X - Y]), PX * PX), (Cone([Y - X]), PX * PY)])
    lim = pw.limit_at_zero("y")
    assert [(str(c), str(p)) for c, p in lim.pieces] == [("{orthant}", "x^2")]


def test_moment_expression_numeric():
    expr = MomentExpression(
        numerator=PiecewisePolynomial.single(10 * Polynomial.coerce(1)),
        radicand=Polynomial.coerce(3),
        scale=Fraction(1, 12),
    )
    num, rad = expr.evaluate_exact({})
    assert (num, rad) == (Fraction(10, 12), Fraction(3))
    assert abs(expr.evaluate_numeric({}) - 10 / (12 * 3 ** 0.5)) < 1e-12
