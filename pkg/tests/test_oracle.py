import math

import numpy as np
import pytest

from embedlift.catalog import catalog_map
from embedlift.grid import PointGrid, PolarGrid
from embedlift.metric import PowerMetric, PullbackMetric
from embedlift.oracle import boundary_trace, curve_injectivity, detect_extremal_identifications, surface_collision_scan
from embedlift.schwarzian import CurveExpression


def test_exponential_collides():
    # exp(4z) takes the same value at z and z + iπ/2
    pair = [[0.1, -math.pi / 4], [0.1, math.pi / 4]]
    grid = PointGrid(points=[[0, 0], [0.5, 0], [-0.5, 0], *pair])
    report = surface_collision_scan(catalog_map("exp4"), grid, decorrelation_radius=0.5)
    assert report.collision
    assert report.gap_metric == "euclidean"
    w = report.witness
    z1, z2 = complex(*w.z1), complex(*w.z2)
    assert abs(z1 - z2) == pytest.approx(math.pi / 2, abs=1e-6)
    assert z1.real == pytest.approx(z2.real, abs=1e-6)
    np.testing.assert_allclose(w.p1, w.p2, atol=1e-9)


def test_strip_map_is_injective():
    report = surface_collision_scan(catalog_map("strip"), PolarGrid(n_r=16, n_theta=32))
    assert not report.collision
    assert report.witness is None
    assert report.min_gap > 1e-6
    assert report.n_points == 1 + 15 * 32


def test_catenoid_identifies_two_boundary_points():
    catenoid = catalog_map("catenoid")
    metric = PullbackMetric(surface=catenoid, delta=2 * math.pi, domain_radius=None)
    trace = boundary_trace(catenoid, metric, z0=0, n_dirs=8, s_max=math.pi)
    # both rays along the waist end at (-1, 0, 0)
    points = trace.points()
    np.testing.assert_allclose(points[2], [-1, 0, 0], atol=1e-8)
    np.testing.assert_allclose(points[6], [-1, 0, 0], atol=1e-8)

    found = detect_extremal_identifications(trace)
    assert len(found) == 1
    assert found[0].theta1 == pytest.approx(math.pi / 2)
    assert found[0].theta2 == pytest.approx(3 * math.pi / 2)


def test_boundary_trace_on_the_plane_needs_a_radius():
    catenoid = catalog_map("catenoid")
    with pytest.raises(ValueError):
        boundary_trace(catenoid, PullbackMetric(surface=catenoid, domain_radius=None))


def test_boundary_trace_of_the_disk(run_dir):
    trace = boundary_trace(catalog_map("planar"), PowerMetric(t=1), n_dirs=16)
    assert all(ray.reached_boundary for ray in trace.rays)
    theta = trace.thetas
    expected = np.stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)], axis=-1)
    np.testing.assert_allclose(trace.points(), expected, atol=1e-4)
    assert detect_extremal_identifications(trace) == []

    frame = trace.to_frame()
    assert list(frame.columns) == ["theta", "X", "Y", "Z", "at_infinity"]
    assert trace.to_csv(run_dir / "boundary.csv").exists()


def test_curve_injectivity():
    circle = CurveExpression.parse(["cos(x)", "sin(x)", "0"])
    closed = curve_injectivity(circle.sample(np.linspace(0, 2 * math.pi, 201)))
    assert not closed.injective
    assert closed.witness == pytest.approx((0.0, 2 * math.pi))

    arc = curve_injectivity(circle.sample(np.linspace(0, 6, 201)))
    assert arc.injective
    assert arc.witness is None
