import cmath
import math

import numpy as np
import pytest

from embedlift.errors import (
    BranchCutError,
    ExpressionSyntaxError,
    SingularityOnPathError,
    SingularPointError,
    UnknownIdentifierError,
)
from embedlift.expr import Jet3, eval_jet3, evaluate, integrate_path, parse
from embedlift.surface import HarmonicMapData, lift


def test_parse_precedence():
    assert parse("z^2+1").sexpr() == "add(pow(z,2),1)"
    assert parse("-z^2").sexpr() == "neg(pow(z,2))"
    assert parse("2^3^2").sexpr() == "pow(2,pow(3,2))"
    assert parse("z**2").sexpr() == parse("z^2").sexpr()


def test_parse_errors_carry_offset():
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse("z + * 2")
    assert exc.value.offset == 4

    with pytest.raises(UnknownIdentifierError) as exc:
        parse("4*w")
    assert exc.value.name == "w"
    assert exc.value.offset == 2

    with pytest.raises(ExpressionSyntaxError):
        parse("4z")
    with pytest.raises(ExpressionSyntaxError):
        parse("   ")


def test_multivalued_flag():
    assert parse("log(z)").multivalued
    assert parse("z^0.5").multivalued
    assert parse("sqrt(1-z^2)").multivalued
    assert not parse("z^2").multivalued
    assert not parse("exp(4*z)").multivalued
    assert parse("2*pi").is_constant


def test_eval_jet3_exponential():
    jet = eval_jet3(parse("exp(4*z)"), 0)
    assert jet.d0 == pytest.approx(1)
    assert jet.d1 == pytest.approx(4)
    assert jet.d2 == pytest.approx(16)
    assert jet.d3 == pytest.approx(64)


@pytest.mark.parametrize(
    "text, value, derivative",
    [
        ("z^3", lambda z: z**3, lambda z: 3 * z**2),
        ("1/(1-z)", lambda z: 1 / (1 - z), lambda z: 1 / (1 - z) ** 2),
        ("sin(z)*cosh(z)", lambda z: cmath.sin(z) * cmath.cosh(z), lambda z: cmath.cos(z) * cmath.cosh(z) + cmath.sin(z) * cmath.sinh(z)),
        ("log((1+z)/(1-z))", lambda z: cmath.log((1 + z) / (1 - z)), lambda z: 2 / (1 - z**2)),
    ],
)
def test_eval_jet3_matches_closed_form(text, value, derivative):
    z = 0.3 + 0.2j
    jet = eval_jet3(parse(text), z)
    assert jet.d0 == pytest.approx(value(z))
    assert jet.d1 == pytest.approx(derivative(z))


def test_third_derivative_by_product_rule():
    z = 0.4 - 0.1j
    jet = eval_jet3(parse("z*exp(z)"), z)
    assert jet.d3 == pytest.approx((z + 3) * cmath.exp(z))


def test_evaluate_vectorised_and_masks_singular_points():
    z = np.array([0.5, 0.0, -0.5], dtype=complex)
    jet = evaluate(parse("1/z"), z)
    assert jet.is_finite().tolist() == [True, False, True]
    np.testing.assert_allclose(jet.d0[[0, 2]], [2, -2])

    with pytest.raises(SingularPointError) as exc:
        eval_jet3(parse("1/z"), z)
    assert exc.value.z == 0


def test_jet_arithmetic():
    x = Jet3.variable(2.0)
    jet = (x * x + 1) / x
    # (z^2+1)/z = z + 1/z
    assert complex(jet.d0) == pytest.approx(2.5)
    assert complex(jet.d1) == pytest.approx(1 - 1 / 4)
    assert complex(jet.d2) == pytest.approx(2 / 8)


def test_integrate_path():
    assert integrate_path(parse("1"), [0, 1 + 1j]) == pytest.approx(1 + 1j)
    assert integrate_path(parse("exp(z)"), [0, 1]) == pytest.approx(cmath.e - 1, abs=1e-10)
    # closed loop around a pole
    square = [1, 1j, -1, -1j, 1]
    assert integrate_path(parse("1/z"), square) == pytest.approx(2j * cmath.pi, abs=1e-8)


def test_integrate_path_refuses_branch_cut():
    with pytest.raises(BranchCutError):
        integrate_path(parse("log(z)"), [-1 - 1j, -1 + 1j])


def test_integrate_path_needs_two_vertices():
    with pytest.raises(ValueError):
        integrate_path(parse("z"), [0])


@pytest.mark.parametrize(
    "text, path, pole",
    [
        # odd integrands cancel on paths symmetric about the pole
        ("1/z", [-1, 1], 0),
        ("1/z^2", [-1, 1], 0),
        ("1/(z - 0.3*i)", [-1 + 0.3j, 0.5 + 0.3j, 0.5 - 1j], 0.3j),
        ("1/(z - 1e-7*i)", [-1, 1], 1e-7j),
    ],
)
def test_integrate_path_refuses_pole_on_path(text, path, pole):
    with pytest.raises(SingularityOnPathError) as exc:
        integrate_path(parse(text), path)
    assert exc.value.z == pytest.approx(pole, abs=1e-6)


def test_integrate_path_pole_clearance():
    e = parse("1/(z - 0.1*i)")
    # ∫ dx/(x - iε) over [-1, 1] = 2i atan(1/ε)
    assert integrate_path(e, [-1, 1]) == pytest.approx(2j * math.atan(10), abs=1e-8)
    with pytest.raises(SingularityOnPathError):
        integrate_path(e, [-1, 1], clearance=0.5)


def test_lift_refuses_path_through_pole():
    strip = HarmonicMapData(h_prime="2/(1-z^2)", q="0")
    with pytest.raises(SingularityOnPathError):
        lift(strip, 2.0)
    assert np.all(np.isnan(lift(strip, np.array([2.0]), strict=False)))
