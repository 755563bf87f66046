import math

import numpy as np
import pandas as pd
import pytest

from embedlift.errors import ExtremalPhiError, NormalizationError, SingularPointError, ZeroTangentError
from embedlift.expr import Jet3
from embedlift.schwarzian import (
    AffineMap,
    CurveExpression,
    Inversion,
    SpaceCurve,
    SturmProblem,
    ahlfors_s1,
    chordal_distance,
    classical_schwarzian,
    curvature,
    derivative_bound,
    extremal_phi,
    mobius_r3,
    reparametrized,
    s1_chain_rule,
    s1_frenet,
    sturm_disconjugate,
    to_sphere,
    transform_curve,
)

X = np.linspace(-1.0, 1.0, 201)


@pytest.fixture
def helix():
    return CurveExpression.parse(["cos(x)", "sin(x)", "x"])


def test_helix(helix):
    c = helix.sample(X)
    np.testing.assert_allclose(ahlfors_s1(c), 0.25, atol=1e-12)
    np.testing.assert_allclose(s1_frenet(c), 0.25, atol=1e-12)
    np.testing.assert_allclose(curvature(c), 0.5, atol=1e-12)


def test_real_curve_gives_classical_schwarzian():
    c = CurveExpression.parse(["tan(x)", "0", "0"]).sample(X)
    np.testing.assert_allclose(ahlfors_s1(c), 2.0, atol=1e-9)
    assert np.all(curvature(c) == 0)


def test_chain_rule(helix):
    t = np.linspace(-0.8, 0.8, 41)
    direct = ahlfors_s1(reparametrized(helix, "t^3+t", t))
    np.testing.assert_allclose(s1_chain_rule(helix, "t^3+t", t), direct, atol=1e-10)
    with pytest.raises(ZeroTangentError):
        s1_chain_rule(helix, "t^2", t)


@pytest.mark.parametrize(
    "kind",
    [
        Inversion(center=(2.0, 0.5, 0.0)),
        AffineMap(scale=3.0, shift=(1.0, -2.0, 0.5), rotation=((0.0, -1.0, 0.0), (1.0, 0.0, 0.0), (0.0, 0.0, 1.0))),
    ],
)
def test_moebius_invariance(helix, kind):
    c = helix.sample(X)
    np.testing.assert_allclose(ahlfors_s1(transform_curve(kind, c)), ahlfors_s1(c), atol=1e-9)


def test_from_samples_circle():
    x = np.linspace(0.0, 2.0, 401)
    c = SpaceCurve.from_samples(x, np.stack([np.cos(x), np.sin(x), np.zeros_like(x)], axis=-1))
    np.testing.assert_allclose(ahlfors_s1(c)[50:-50], 0.5, atol=1e-5)


def test_space_curve_must_be_regular():
    with pytest.raises(ZeroTangentError):
        CurveExpression.parse(["x^2", "0", "0"]).sample(X)
    with pytest.raises(ValueError):
        CurveExpression.parse(["x", "x"])


def test_mobius_maps():
    assert mobius_r3(Inversion(), [2.0, 0.0, 0.0]) == pytest.approx([0.5, 0.0, 0.0])
    with pytest.raises(SingularPointError):
        mobius_r3(Inversion(center=(1.0, 0.0, 0.0)), [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        AffineMap(rotation=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, -1.0)))


def test_sphere_and_chordal_distance():
    np.testing.assert_allclose(to_sphere([0.0, 0.0, 0.0]), [0, 0, 0, -1])
    np.testing.assert_allclose(to_sphere([np.inf, 0.0, 0.0]), [0, 0, 0, 1])
    np.testing.assert_allclose(to_sphere([1e9, 0.0, 0.0], infinity_threshold=1e8), [0, 0, 0, 1])
    assert chordal_distance([0.0, 0.0, 0.0], [np.inf, 0.0, 0.0]) == pytest.approx(2.0)
    assert chordal_distance([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(math.sqrt(2))


def test_sturm_disconjugate():
    result = sturm_disconjugate(SturmProblem(p="4"))
    assert not result.disconjugate
    # sin(2(x+1)) vanishes at -1 and -1 + π/2
    assert result.witness_zeros[1] - result.witness_zeros[0] == pytest.approx(math.pi / 2, abs=1e-6)


@pytest.mark.parametrize(
    "p, a, b, disconjugate",
    [
        ("0", -1.0, 1.0, True),
        ("1", -1.0, 1.0, True),
        ("1", 0.0, 0.9 * math.pi, True),
        # zeros of sin(π(x+1)/2) only at the endpoints
        ("pi^2/4", -1.0, 1.0, True),
        ("1", 0.0, math.pi, True),
        ("1", 0.0, 1.01 * math.pi, False),
        ("1", 0.0, 1.5 * math.pi, False),
    ],
)
def test_sturm_disconjugate_against_interval_length(p, a, b, disconjugate):
    result = sturm_disconjugate(SturmProblem(p=p, a=a, b=b))
    assert result.disconjugate is disconjugate
    if disconjugate:
        assert result.witness_zeros == []
    else:
        z1, z2 = result.witness_zeros
        assert a <= z1 < z2 < b
        assert z2 - z1 == pytest.approx(math.pi, abs=1e-6)


def test_sturm_problem_validation():
    with pytest.raises(ValueError):
        SturmProblem(p="1", a=1.0, b=0.0)
    with pytest.raises(ValueError):
        SturmProblem(p="1/x")


def test_extremal_phi():
    phi = extremal_phi(SturmProblem(p="0"))
    assert phi(np.array([-0.5, 0.25])) == pytest.approx([-0.5, 0.25], abs=1e-9)
    assert not phi.endpoint_infinite

    phi = extremal_phi(SturmProblem(p="1", a=-math.pi / 2, b=math.pi / 2))
    assert phi(np.array([0.5, -1.0])) == pytest.approx([math.tan(0.5), -math.tan(1.0)], rel=1e-7)
    assert phi.derivative(np.array([0.3])) == pytest.approx([1 / math.cos(0.3) ** 2], rel=1e-7)
    assert phi.endpoint_infinite

    with pytest.raises(ExtremalPhiError):
        extremal_phi(SturmProblem(p="1", a=-2.0, b=2.0))
    with pytest.raises(ExtremalPhiError):
        extremal_phi(SturmProblem(p="x"))
    with pytest.raises(ExtremalPhiError):
        extremal_phi(SturmProblem(p="1", a=-0.5, b=1.0))


def test_derivative_bound_is_sharp_for_tangent():
    problem = SturmProblem(p="1")
    report = derivative_bound(CurveExpression.parse(["tan(x)", "0", "0"]).sample(X), problem)
    assert report.hypothesis_holds
    assert report.bound_holds
    assert report.max_ratio == pytest.approx(1.0, abs=1e-6)

    line = derivative_bound(CurveExpression.parse(["x", "0", "0"]).sample(X), problem)
    assert line.bound_holds
    assert line.argmax == pytest.approx(0.0, abs=1e-12)


def test_derivative_bound_needs_normalised_curve(helix):
    with pytest.raises(NormalizationError):
        derivative_bound(helix.sample(X), SturmProblem(p="1"))


def test_classical_schwarzian():
    # x(t) = t³ + t at t = 0 and t = 1
    x = Jet3(np.array([0.0, 2.0]), np.array([1.0, 4.0]), np.array([0.0, 6.0]), np.array([6.0, 6.0]))
    np.testing.assert_allclose(classical_schwarzian(x), [6.0, 6 / 4 - 1.5 * (6 / 4) ** 2])
    with pytest.raises(ZeroTangentError):
        classical_schwarzian(Jet3(np.array([0.0]), np.array([0.0]), np.array([2.0]), np.array([0.0])))


def test_extremal_phi_table(run_dir):
    phi = extremal_phi(SturmProblem(p="1", a=-math.pi / 2, b=math.pi / 2))
    frame = pd.read_csv(phi.to_csv(run_dir / "phi.csv", n=11))
    assert list(frame.columns) == ["x", "phi", "dphi"]
    assert frame["phi"].iloc[5] == pytest.approx(0.0, abs=1e-12)
