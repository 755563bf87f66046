import math

import numpy as np
import pytest

from embedlift.catalog import catalog_map
from embedlift.criterion import (
    evaluate_corollary,
    evaluate_main,
    extremal_diagnostics,
    fit_circle,
    geodesic_restriction_check,
    implication_check,
    intrinsic_difference,
    power_rhs,
    s1_along_geodesic,
    verdict_of,
)
from embedlift.grid import PointGrid, PolarGrid
from embedlift.metric import PowerMetric, PullbackMetric, geodesic_ivp

GRID = PolarGrid(n_r=16, n_theta=32)


@pytest.fixture
def catenoid_metric():
    return PullbackMetric(surface=catalog_map("catenoid"), delta=2 * math.pi, domain_radius=None)


def test_verdict_of():
    assert verdict_of(np.array([0.5, 1.0]), 1e-6) == "holds"
    assert verdict_of(np.array([0.5, 1e-9]), 1e-6) == "holds-with-equality-locus"
    assert verdict_of(np.array([0.5, -1e-3]), 1e-6) == "fails"
    assert verdict_of(np.array([0.5]), 1e-6, hypothesis_holds=False) == "hypothesis-fails"
    assert verdict_of(np.array([]), 1e-6) == "holds"


def test_planar_map_satisfies_everything():
    planar = catalog_map("planar")
    report = evaluate_main(planar, PowerMetric(t=1), GRID)
    assert report.verdict == "holds"
    assert report.n_points == 1 + 15 * 32
    for variant in ("pi2", "nehari", "t2", "t2_relaxed", "becker"):
        assert evaluate_corollary(variant, planar, GRID).verdict == "holds"


def test_power_rhs_at_origin():
    assert power_rhs(np.array([0j]), 0.0)[0] == pytest.approx(math.pi**2 / 2)
    assert power_rhs(np.array([0j]), 1.0)[0] == pytest.approx(2.0)


def test_exponential_fails():
    report = evaluate_corollary("pi2", catalog_map("exp4"), GRID)
    assert report.verdict == "fails"
    # the classical Schwarzian of exp(4z) is -8
    assert report.lhs[0] == pytest.approx(8.0)
    assert report.argmin is not None


def test_strip_reaches_equality_on_the_real_axis():
    report = evaluate_corollary("nehari", catalog_map("strip"), GRID)
    assert report.verdict == "holds-with-equality-locus"
    locus = np.array(report.equality_locus)
    np.testing.assert_allclose(locus[:, 1], 0, atol=1e-12)


def test_catenoid_equality_on_the_waist(catenoid_metric):
    catenoid = catalog_map("catenoid")
    z = np.array([0, 0.5j, 0.3, -0.4 + 1j])
    report = evaluate_main(catenoid, catenoid_metric, PointGrid(points=[[p.real, p.imag] for p in z]))
    assert report.verdict == "holds-with-equality-locus"
    assert report.delta_source == "supplied"
    x = z.real
    expected = -0.5 * np.cosh(x) ** 2 * (1 / np.cosh(x) ** 4 - 1)
    np.testing.assert_allclose(report.margin, expected, atol=1e-12)
    np.testing.assert_allclose(intrinsic_difference(catenoid, z, 2 * math.pi), -expected, atol=1e-12)


def test_ahlfors_hypothesis():
    planar = catalog_map("planar")
    assert evaluate_corollary("ahlfors", planar, GRID, c=0.5).verdict == "holds"
    assert evaluate_corollary("ahlfors", planar, GRID, c=3).verdict == "hypothesis-fails"


def test_epstein_hypothesis():
    planar = catalog_map("planar")
    assert evaluate_corollary("epstein", planar, GRID, T="0").verdict == "holds"
    report = evaluate_corollary("epstein", planar, GRID, T="3*z")
    assert report.verdict == "hypothesis-fails"
    assert report.parameters["gradient_sup"] == pytest.approx(1.5)


def test_complete_variant():
    report = evaluate_corollary("complete", catalog_map("planar"), GRID, metric=PowerMetric(t=1))
    assert report.verdict == "holds"
    assert report.delta is None


def test_intrinsic_variant():
    catenoid = catalog_map("catenoid")
    report = evaluate_corollary("intrinsic", catenoid, GRID, delta=2 * math.pi)
    assert report.verdict == "holds-with-equality-locus"
    assert report.rhs[0] == pytest.approx(1.0)


def test_corollary_arguments():
    planar = catalog_map("planar")
    with pytest.raises(ValueError):
        evaluate_corollary("unknown", planar, GRID)
    with pytest.raises(ValueError):
        evaluate_corollary("intrinsic", planar, GRID)
    with pytest.raises(ValueError):
        evaluate_corollary("ahlfors", planar, GRID)
    with pytest.raises(ValueError):
        evaluate_corollary("power", planar, GRID)


def test_relaxed_condition_implies_t2():
    report = implication_check(catalog_map("strip_lift"), GRID)
    assert report.holds
    assert report.n_violations == 0


def test_waist_geodesic_is_extremal(catenoid_metric):
    catenoid = catalog_map("catenoid")
    path = geodesic_ivp(catenoid_metric, 0, math.pi / 2, math.pi)
    formula, direct = s1_along_geodesic(catenoid, path)
    np.testing.assert_allclose(direct, 0.5, atol=1e-6)
    np.testing.assert_allclose(formula, direct, atol=1e-6)

    restriction = geodesic_restriction_check(catenoid, catenoid_metric, path)
    assert restriction.holds
    assert restriction.bound == pytest.approx(0.5)
    assert restriction.methods_agree

    extremal = extremal_diagnostics(catenoid, catenoid_metric, path)
    assert extremal.extremal
    assert extremal.circle_radius == pytest.approx(1.0, abs=1e-6)
    assert extremal.length_ratio == pytest.approx(0.5)


def test_fit_circle():
    theta = np.linspace(0, 3, 50)
    points = np.stack([2 + 3 * np.cos(theta), 3 * np.sin(theta), np.full_like(theta, 1.0)], axis=-1)
    center, radius, normal, rms = fit_circle(points)
    np.testing.assert_allclose(center, [2, 0, 1], atol=1e-9)
    assert radius == pytest.approx(3)
    assert abs(normal[2]) == pytest.approx(1)
    assert rms < 1e-9


@pytest.mark.parametrize("variant", ["main", "complete"])
def test_points_outside_the_metric_disk_are_skipped(variant):
    grid = PointGrid(points=[[0, 0], [0.5, 0], [1.0, 0], [0, -1.5]])
    report = evaluate_corollary(variant, catalog_map("planar"), grid, metric=PowerMetric(t=1))
    assert report.n_points == 4
    assert len(report.margin) == 2
    assert [p.z for p in report.skipped] == [(1.0, 0.0), (0.0, -1.5)]
    assert all(p.reason == "outside the disk of power(t=1)" for p in report.skipped)
