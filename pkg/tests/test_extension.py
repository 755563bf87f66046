import math

import numpy as np
import pytest

from embedlift.catalog import catalog_map
from embedlift.errors import BaseLookupError, UCPError
from embedlift.extension import (
    CanonicalFunction,
    ExtensionMap,
    UcpReport,
    base_of,
    bundle_probe,
    convexity_check,
    extend,
    extension_continuity,
    find_critical_point,
    fibers_to_obj,
    match_fibers,
    model_fiber,
    naturality_check,
    radius_bound_check,
    require_ucp,
    shifted_u,
    surface_fiber,
    ucp_probe,
)
from embedlift.metric import PowerMetric, PullbackMetric, geodesic_ivp
from embedlift.schwarzian import AffineMap, Inversion


@pytest.fixture
def planar():
    return CanonicalFunction(surface=catalog_map("planar"), metric=PowerMetric(t=1))


@pytest.fixture
def waist():
    catenoid = catalog_map("catenoid")
    metric = PullbackMetric(surface=catenoid, delta=2 * math.pi, domain_radius=None)
    return CanonicalFunction(surface=catenoid, metric=metric)


def test_canonical_function_of_the_disk(planar):
    z = np.array([0, 0.5, 0.3 - 0.4j])
    np.testing.assert_allclose(planar(z), 1 / np.sqrt(1 - np.abs(z) ** 2))
    assert planar.diameter == math.inf
    np.testing.assert_allclose(shifted_u(planar, AffineMap(scale=4.0), z), 0.5 * planar(z))


def test_pullback_metric_gives_constant_one(waist):
    z = np.array([0.2 + 0.1j, -1.0 + 2j])
    np.testing.assert_allclose(waist(z), 1.0)
    np.testing.assert_allclose(waist.grad_log(z), 0, atol=1e-12)


def test_model_fiber():
    fiber = model_fiber(0.5)
    assert fiber.radius == pytest.approx(0.75)
    np.testing.assert_allclose(fiber.center, [1.25, 0, 0])
    # the fiber over z passes through 1/z̄
    np.testing.assert_allclose(fiber.point(math.pi), [2, 0, 0], atol=1e-12)
    assert model_fiber(0).is_line
    with pytest.raises(BaseLookupError):
        model_fiber(1.0)


@pytest.mark.parametrize("z", [0.5, 0.2 - 0.6j, -0.9j])
def test_base_of_model_fiber_points(z):
    fiber = model_fiber(z)
    for phi in (0.3, 1.5, -2.0):
        assert base_of(fiber.point(phi)) == pytest.approx(z, abs=1e-12)
    assert base_of([0.0, 0.0, 5.0]) == 0
    with pytest.raises(BaseLookupError):
        base_of([1.0, 0.0, 0.0])


def test_match_fibers_between_circle_and_line():
    circle, line = model_fiber(0.5), model_fiber(0)
    np.testing.assert_allclose(match_fibers(circle, line, math.pi / 2), [0, 0, 1.5], atol=1e-12)
    np.testing.assert_allclose(match_fibers(line, circle, 1.5), [1.25, 0, 0.75], atol=1e-12)
    np.testing.assert_allclose(match_fibers(line, circle, math.inf), [2, 0, 0], atol=1e-12)
    assert np.all(np.isinf(match_fibers(circle, line, math.inf)))


def test_surface_fibers_of_the_disk_are_model_fibers(planar):
    for z in (0.5, -0.3 + 0.2j):
        fiber, model = surface_fiber(planar, z), model_fiber(z)
        assert fiber.radius == pytest.approx(model.radius)
        np.testing.assert_allclose(fiber.center, model.center, atol=1e-12)


def test_extension_of_the_disk_is_the_identity(planar):
    e = ExtensionMap(planar)
    rng = np.random.default_rng(1)
    for p in 2 * (2 * rng.random((20, 3)) - 1):
        np.testing.assert_allclose(extend(e, p), p, atol=1e-9)
    np.testing.assert_allclose(e([0.3, -0.2, 0.0]), [0.3, -0.2, 0.0], atol=1e-12)
    np.testing.assert_allclose(e([2.0, 0.0, 0.0]), [2.0, 0.0, 0.0], atol=1e-9)
    assert np.all(np.isinf(e([np.inf, 0.0, 0.0])))


def test_extension_needs_a_disk_metric(waist):
    with pytest.raises(ValueError):
        ExtensionMap(waist)


def test_critical_point_of_the_disk(planar):
    result = find_critical_point(planar)
    assert result.status == "unique"
    assert abs(result.point) < 1e-8
    shifted = find_critical_point(planar, AffineMap(scale=4.0))
    assert abs(shifted.point) < 1e-8


def test_convexity_along_radius(planar):
    path = geodesic_ivp(planar.metric, 0, 0.0, 1.5)
    report = convexity_check(planar, path)
    # U(s) = cosh s along the radius
    assert report.holds
    assert report.min_value == pytest.approx(1.0, abs=1e-8)
    assert report.pi2_over_delta2 == 0
    assert report.ode_residual < 1e-4


def test_convexity_on_the_waist(waist):
    path = geodesic_ivp(waist.metric, 0, math.pi / 2, 3.0)
    plain = convexity_check(waist, path)
    assert plain.min_value == pytest.approx(0.25, abs=1e-8)
    assert plain.pi2_over_delta2 == pytest.approx(0.25)

    # through (-1, 0, 0) the waist circle is a line and U = 2 cos(s/2)
    saturated = convexity_check(waist, path, shift=Inversion(center=(-1.0, 0.0, 0.0)))
    assert abs(saturated.min_value) < 1e-8
    assert saturated.ode_residual is None


def test_radius_bound(planar):
    report = radius_bound_check(planar, np.array([0.2, 0.3j, -0.4, 0.6 + 0.3j]))
    assert report.applicable
    assert report.critical_point == pytest.approx((0.0, 0.0), abs=1e-8)
    assert report.holds
    assert report.trend_ok


def test_bundle_probe(planar):
    report = bundle_probe(ExtensionMap(planar), n_fibers=12, n_points=100, n_samples=64, seed=3)
    assert report.holds
    assert report.coverage == 1.0
    assert report.orthogonality_defect < 1e-6


@pytest.mark.parametrize("shift", [AffineMap(scale=2.0, shift=(1.0, 0.0, 0.0)), Inversion(center=(0.0, 0.0, 3.0))])
def test_naturality(planar, shift):
    report = naturality_check(planar, shift, np.array([0.3, -0.2 + 0.4j]))
    assert len(report.distances) == 2
    assert report.holds


def test_continuity_at_the_boundary(planar):
    report = extension_continuity(ExtensionMap(planar), 1.0)
    assert report.decreasing
    assert report.oscillation[-1] < 1e-2


def test_ucp_probe_counts(planar):
    report = ucp_probe(planar, n_shifts=2, n_starts=4, seed=5)
    assert report.n_shifts == 2
    assert report.n_unique + report.n_none + report.n_multiple + report.n_failed == 2


def test_require_ucp():
    fine = UcpReport(n_shifts=3, n_unique=3, n_none=0, n_multiple=0, n_failed=0, violations=[])
    require_ucp(fine)
    broken = UcpReport(n_shifts=3, n_unique=2, n_none=0, n_multiple=1, n_failed=0, violations=[(0.0, 0.0, 1.0)])
    with pytest.raises(UCPError):
        require_ucp(broken)


def test_fibers_to_obj(run_dir):
    path = fibers_to_obj([model_fiber(0.5), model_fiber(0)], run_dir / "fibers.obj", n=8)
    lines = path.read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 16
    polylines = [line for line in lines if line.startswith("l ")]
    # the circle is closed, the line is not
    assert len(polylines[0].split()) == 10
    assert len(polylines[1].split()) == 9
