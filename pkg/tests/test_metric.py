import math

import numpy as np
import pandas as pd
import pytest

from embedlift.catalog import catalog_map
from embedlift.errors import GeodesicError
from embedlift.metric import (
    BeckerMetric,
    CustomMetric,
    EpsteinMetric,
    PowerMetric,
    PullbackMetric,
    bpj_probe,
    curvature_residual,
    diameter_estimate,
    diameter_power,
    diameter_power_quad,
    distance,
    geodesic_bvp,
    geodesic_ivp,
    hyperbolic_jets,
    reparametrization_residual,
    resolve_diameter,
    ulp_probe,
)


@pytest.mark.parametrize("t, expected", [(0.0, 2.0), (0.5, math.pi), (1.0, math.inf), (2.0, math.inf)])
def test_diameter_power(t, expected):
    assert diameter_power(t) == pytest.approx(expected)


@pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 0.9])
def test_diameter_power_by_quadrature(t):
    assert diameter_power_quad(t) == pytest.approx(diameter_power(t), rel=1e-10)


def test_diameter_power_rejects_negative_t():
    with pytest.raises(ValueError):
        diameter_power(-0.1)


def test_hyperbolic_jets_against_finite_differences():
    z, h = 0.3 + 0.2j, 1e-6
    jets = hyperbolic_jets(z, t=0.7)
    rho = lambda w: hyperbolic_jets(w, t=0.7).rho  # noqa: E731
    rho_x = (rho(z + h) - rho(z - h)) / (2 * h)
    rho_y = (rho(z + 1j * h) - rho(z - 1j * h)) / (2 * h)
    assert jets.rho_z == pytest.approx(0.5 * (rho_x - 1j * rho_y), rel=1e-7)


def test_epstein_with_zero_potential_is_power_one():
    z = np.array([0.1, 0.5j, -0.3 + 0.3j])
    a, b = EpsteinMetric(T="0").jets(z), PowerMetric(t=1).jets(z)
    np.testing.assert_allclose(a.rho, b.rho)
    np.testing.assert_allclose(a.rho_z, b.rho_z)
    assert EpsteinMetric(T="z").complete


def test_metric_kinds():
    catenoid = catalog_map("catenoid")
    assert not PullbackMetric(surface=catenoid).complete
    assert BeckerMetric(surface=catenoid).complete
    assert PowerMetric(t=0.5).diameter() == pytest.approx(math.pi)
    assert PowerMetric(t=1).diameter() == math.inf
    assert PullbackMetric(surface=catenoid).diameter() is None
    assert PowerMetric(t=1).curvature_violation(np.array([0, 0.5, 0.9j])) == 0.0


def test_resolve_diameter_sources():
    assert resolve_diameter(PowerMetric(t=0.5)) == (pytest.approx(math.pi), "closed-form")
    assert resolve_diameter(PowerMetric(t=1)) == (math.inf, "complete")
    assert resolve_diameter(PowerMetric(t=0.5, delta=3.0)) == (3.0, "supplied")


def test_poincare_radial_geodesic():
    path = geodesic_ivp(PowerMetric(t=1), 0, 0.0, 1.0)
    # artanh r is the distance from the origin
    assert path.endpoints[1] == pytest.approx(math.tanh(1.0), abs=1e-8)
    assert path.termination == "s_max"
    assert np.max(path.speed_defect()) < 1e-8


def test_euclidean_geodesic_reaches_boundary():
    path = geodesic_ivp(PowerMetric(t=0), 0.2j, math.pi / 4, 5.0)
    assert path.termination == "boundary"
    assert abs(path.z[-1]) == pytest.approx(1.0, abs=1e-5)
    np.testing.assert_allclose(path.curvature, 0, atol=1e-8)


def test_geodesic_outside_domain():
    with pytest.raises(GeodesicError):
        geodesic_ivp(PowerMetric(t=1), 1.2, 0.0, 1.0)
    with pytest.raises(ValueError):
        geodesic_ivp(PowerMetric(t=1), 0, 0.0, -1.0)


def test_distance_matches_poincare_formula():
    a, b = 0.3, 0.3j
    expected = math.atanh(abs((a - b) / (1 - np.conj(a) * b)))
    assert distance(PowerMetric(t=1), a, b) == pytest.approx(expected, abs=1e-6)
    assert distance(PowerMetric(t=1), a, a) == 0.0


def test_geodesic_bvp_hits_target():
    path = geodesic_bvp(PowerMetric(t=0.5), -0.4 + 0.1j, 0.5 - 0.2j)
    assert path.endpoints[1] == pytest.approx(0.5 - 0.2j, abs=1e-7)
    assert path.termination == "target"
    with pytest.raises(ValueError):
        geodesic_bvp(PowerMetric(t=0.5), 0.1, 0.1)


def test_geodesic_identities():
    path = geodesic_ivp(PowerMetric(t=1), 0.2, 1.0, 1.0)
    assert curvature_residual(path) < 1e-8
    assert reparametrization_residual(path) < 1e-4


def test_ulp_probe_euclidean():
    report = ulp_probe(PowerMetric(t=0), 0, n_dirs=16, s_max=5.0)
    assert report.all_reach_boundary
    assert report.winding_number == 1
    assert report.full_coverage
    assert report.length_jump == pytest.approx(0, abs=1e-6)
    with pytest.raises(ValueError):
        ulp_probe(PullbackMetric(surface=catalog_map("catenoid"), domain_radius=None), 0)


def test_diameter_estimate_is_a_lower_bound():
    estimate = diameter_estimate(PowerMetric(t=0.5), n_samples=4, radius=0.99)
    # the antipodal pair is joined through the center at distance 2 arcsin r
    assert estimate.n_failed == 0
    assert estimate.n_pairs == 6
    assert estimate.value == pytest.approx(2 * math.asin(0.99), abs=1e-5)
    assert estimate.value <= math.pi
    with pytest.raises(ValueError):
        diameter_estimate(PowerMetric(t=0.5), radius=1.0)


def test_custom_metric():
    metric = CustomMetric(jets_fn=lambda z: hyperbolic_jets(z, 0.5), name="half")
    z = np.array([0.1, -0.4j])
    np.testing.assert_allclose(metric.jets(z).rho, PowerMetric(t=0.5).jets(z).rho)
    assert metric.label == "half"
    assert metric.diameter() is None


def test_bpj_probe_euclidean():
    report = bpj_probe(PowerMetric(t=0), 1, 1j)
    expected = [r * math.sqrt(2) for r in report.radii]
    assert report.distances == pytest.approx(expected, abs=1e-6)
    assert report.converging


def test_geodesic_to_csv(run_dir):
    path = geodesic_ivp(PowerMetric(t=1), 0, 0.5, 1.0).to_csv(run_dir / "geodesic.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["s", "x", "y", "kappa"]
    assert frame["s"].iloc[-1] == pytest.approx(1.0)
