import numpy as np
import pytest

from embedlift.catalog import catalog_map
from embedlift.errors import SingularPointError
from embedlift.surface import (
    HarmonicMapData,
    RealJet2,
    ahlfors_derivative,
    conformal_factor,
    expanded_schwarzian,
    gauss_curvature,
    harmonic_schwarzian,
    lift,
    lift_along_path,
    normal_curvature,
    schwarzian_tensor,
    sigma_jets,
    surface_jet,
    to_complex,
)


@pytest.fixture
def catenoid():
    return catalog_map("catenoid")


def test_to_complex():
    assert to_complex([1, 2]) == 1 + 2j
    assert to_complex("i*pi/2") == pytest.approx(0.5j * np.pi)
    assert to_complex(3) == 3
    with pytest.raises(ValueError):
        to_complex("z+1")


def test_catenoid_lift(catenoid):
    z = np.array([0.3 + 0.4j, -0.5 + 2.0j, 1j * np.pi])
    expected = np.stack([np.cosh(z.real) * np.cos(z.imag), np.cosh(z.real) * np.sin(z.imag), z.real], axis=-1)
    np.testing.assert_allclose(lift(catenoid, z), expected, atol=1e-9)


def test_catenoid_metric_and_curvature(catenoid):
    z = np.array([0.0, 0.7 - 0.2j, -1.2 + 3j])
    np.testing.assert_allclose(conformal_factor(catenoid, z), np.cosh(z.real))
    np.testing.assert_allclose(gauss_curvature(catenoid, z), -1 / np.cosh(z.real) ** 4)
    # 2(σ_zz - σ_z²) with σ = log cosh x
    expected = 0.5 * (1 / np.cosh(z.real) ** 2 - np.tanh(z.real) ** 2)
    np.testing.assert_allclose(harmonic_schwarzian(catenoid, z), expected, atol=1e-12)


def test_planar_lift_is_the_plane():
    m = catalog_map("planar")
    z = np.array([0.1 + 0.2j, -0.4j])
    np.testing.assert_allclose(lift(m, z), [[0.1, 0.2, 0.0], [0.0, -0.4, 0.0]], atol=1e-12)
    assert gauss_curvature(m, 0.3) == 0
    assert harmonic_schwarzian(m, 0.3) == 0


def test_enneper_height():
    m = catalog_map("enneper")
    z = 0.3 + 0.5j
    point = lift(m, z)
    f = z + np.conj(z**3 / 3)
    np.testing.assert_allclose(point, [f.real, f.imag, 2 * 0.3 * 0.5], atol=1e-10)
    assert gauss_curvature(m, 0) == pytest.approx(-4)


@pytest.mark.parametrize("name", ["catenoid", "enneper", "strip_lift"])
def test_expanded_schwarzian_agrees(name):
    m = catalog_map(name)
    z = np.array([0.1 + 0.2j, -0.3 + 0.05j, 0.4j])
    np.testing.assert_allclose(expanded_schwarzian(m, z), harmonic_schwarzian(m, z), atol=1e-10)


def test_schwarzian_tensor_of_sigma():
    m = catalog_map("strip_lift")
    z = np.array([0.2 - 0.1j, 0.35 + 0.3j])
    s = sigma_jets(m, z)
    jet = RealJet2.from_wirtinger(s.sigma, s.sigma_z, s.sigma_zz, s.sigma_zzbar)
    traceless, trace = schwarzian_tensor(jet)
    np.testing.assert_allclose(traceless, harmonic_schwarzian(m, z), atol=1e-10)
    # ½(Δσ - |∇σ|²) = 2σ_zz̄ - 2|σ_z|²
    np.testing.assert_allclose(trace, 2 * s.sigma_zzbar - 2 * np.abs(s.sigma_z) ** 2, atol=1e-10)


def test_surface_jet_is_conformal(catenoid):
    z = np.array([0.2 + 0.1j, -0.6 + 1.1j])
    jet = surface_jet(catenoid, z)
    dot = np.einsum("...i,...i->...", jet.X_x, jet.X_y)
    np.testing.assert_allclose(dot, 0, atol=1e-12)
    np.testing.assert_allclose(jet.metric_factor, np.cosh(z.real) ** 2)
    np.testing.assert_allclose(np.linalg.norm(jet.normal, axis=-1), 1)


def test_normal_curvature_bounded_by_curvature(catenoid):
    z = 0.4 + 0.3j
    theta = np.linspace(0, np.pi, 181)
    kappa = normal_curvature(catenoid, z, theta)
    assert np.max(np.abs(kappa)) == pytest.approx(np.sqrt(-gauss_curvature(catenoid, z)), rel=1e-3)


def test_lift_along_path_matches_finite_difference(catenoid):
    s = np.array([0.0, 1e-4, -1e-4])
    z = 0.1 + 0.2j + (1 + 1j) * s / np.sqrt(2)
    zdot = np.full(3, (1 + 1j) / np.sqrt(2))
    psi, psi1, _, _ = lift_along_path(catenoid, z, zdot, np.zeros(3), np.zeros(3))
    np.testing.assert_allclose((psi[1] - psi[2]) / 2e-4, psi1[0], atol=1e-5)


def test_singular_points():
    m = HarmonicMapData(h_prime="z", q="0", z0=0.5)
    with pytest.raises(SingularPointError):
        sigma_jets(m, 0)
    assert np.isnan(conformal_factor(m, np.array([0.0, 0.5]), strict=False)[0])
    with pytest.raises(ValueError):
        HarmonicMapData(h_prime="1/z", q="0")


def test_map_serializes_expressions(catenoid):
    data = catenoid.model_dump(mode="json")
    assert data["h_prime"] == "exp(z)/2"
    assert data["z0"] == [0.0, 0.0]


def test_ahlfors_derivative(catenoid):
    z = np.array([0.0, 0.8 + 0.3j])
    traceless, trace = ahlfors_derivative(catenoid, z)
    np.testing.assert_allclose(traceless, harmonic_schwarzian(catenoid, z))
    np.testing.assert_allclose(trace, 0.5 / np.cosh(z.real) ** 4)
