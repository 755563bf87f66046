"""Geodesics of conformal metrics: initial and boundary value problems."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from embedlift.errors import EmbedliftError, GeodesicError, ShootingError
from embedlift.logger import get_logger
from embedlift.metric.conformal import ConformalMetric
from embedlift.settings import settings

logger = get_logger(__name__)

N_SAMPLES = 257
BRACKET_STEPS = (0.02, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0, 1.3, 1.55)


@dataclass
class GeodesicPath:
    """Geodesic sampled in metric arclength s.

    Attributes
    ----------
    s, z, zdot, zddot, zdddot : np.ndarray
        Arclength, position and derivatives d/ds, with e^ρ|ż| = 1.
    metric : ConformalMetric
    termination : str
        "s_max", "boundary" or "target".
    solution : OdeSolution | None
        Dense output for evaluation between samples.
    """

    s: np.ndarray
    z: np.ndarray
    zdot: np.ndarray
    zddot: np.ndarray
    zdddot: np.ndarray
    metric: ConformalMetric
    termination: str = "s_max"
    solution: object | None = field(default=None, repr=False)

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    @property
    def endpoints(self) -> tuple[complex, complex]:
        return complex(self.z[0]), complex(self.z[-1])

    @property
    def tangent(self) -> np.ndarray:
        """Euclidean unit tangent t̂."""
        return self.zdot / np.abs(self.zdot)

    @property
    def normal(self) -> np.ndarray:
        """Left unit normal n̂ = i t̂."""
        return 1j * self.tangent

    @property
    def curvature(self) -> np.ndarray:
        """Signed Euclidean curvature Im(conj(ż) z̈)/|ż|³."""
        return np.imag(np.conj(self.zdot) * self.zddot) / np.abs(self.zdot) ** 3

    def at(self, s) -> tuple[np.ndarray, np.ndarray]:
        """Position and velocity from the dense output."""
        if self.solution is None:
            raise GeodesicError("path has no dense output")
        y = self.solution(np.asarray(s, dtype=float))
        return y[0] + 1j * y[1], y[2] + 1j * y[3]

    def speed_defect(self) -> np.ndarray:
        """|e^ρ|ż| - 1| at the samples."""
        return np.abs(np.exp(self.metric.jets(self.z).rho) * np.abs(self.zdot) - 1)

    def geodesic_residual(self, h: float = 1e-3) -> np.ndarray:
        """|z̈ + 2ρ_z ż²| at interior samples, z̈ by five-point differences of the dense velocity."""
        inner = (self.s > self.s[0] + 2 * h) & (self.s < self.s[-1] - 2 * h)
        s = self.s[inner]
        w = [self.at(s + k * h)[1] for k in (-2, -1, 1, 2)]
        acc = (w[0] - 8 * w[1] + 8 * w[2] - w[3]) / (12 * h)
        rho_z = self.metric.jets(self.z[inner]).rho_z
        return np.abs(acc + 2 * rho_z * self.zdot[inner] ** 2)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"s": self.s, "x": self.z.real, "y": self.z.imag, "kappa": self.curvature})

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


def _rhs(metric: ConformalMetric):
    def fun(_s, y):
        z, w = complex(y[0], y[1]), complex(y[2], y[3])
        acc = -2 * metric.jets(z).rho_z * w * w
        return [w.real, w.imag, acc.real, acc.imag]

    return fun


def _boundary_events(metric: ConformalMetric, eps: float) -> list:
    if metric.domain_radius is None:
        return []
    radius = metric.domain_radius

    def event(_s, y):
        return radius * (1 - eps) - np.hypot(y[0], y[1])

    event.terminal = True
    event.direction = -1
    return [event]


def _closest_approach_event(target: complex):
    # d/ds |γ - target|² changes sign from - to +
    def event(_s, y):
        return (y[0] - target.real) * y[2] + (y[1] - target.imag) * y[3]

    event.terminal = True
    event.direction = 1
    return event


def _integrate(metric, z0: complex, zdot0: complex, s_max: float, events):
    try:
        sol = solve_ivp(
            _rhs(metric),
            (0.0, s_max),
            [z0.real, z0.imag, zdot0.real, zdot0.imag],
            method=settings.ode_method,
            rtol=settings.ode_rtol,
            atol=settings.ode_atol,
            dense_output=True,
            events=events,
        )
    except EmbedliftError as exc:
        raise GeodesicError(f"geodesic from z={z0} left the regular set: {exc}") from exc
    if sol.status == -1:
        raise GeodesicError(f"integration failed: {sol.message}", s=float(sol.t[-1]))
    return sol


def _path_from_solution(metric, sol, termination: str, n_samples: int) -> GeodesicPath:
    s = np.linspace(0.0, float(sol.t[-1]), n_samples)
    y = sol.sol(s)
    z, w = y[0] + 1j * y[1], y[2] + 1j * y[3]
    jets = metric.jets(z)
    acc = -2 * jets.rho_z * w**2
    jerk = -2 * (jets.rho_zz * w + jets.rho_zzbar * np.conj(w)) * w**2 - 4 * jets.rho_z * w * acc
    return GeodesicPath(s, z, w, acc, jerk, metric, termination=termination, solution=sol.sol)


def _check_inside(metric: ConformalMetric, z: complex) -> None:
    if metric.domain_radius is not None and abs(z) >= metric.domain_radius:
        raise GeodesicError(f"point {z} is outside the domain |z| < {metric.domain_radius:g}")


def unit_velocity(metric: ConformalMetric, z0: complex, theta: float) -> complex:
    return complex(np.exp(-metric.jets(z0).rho) * np.exp(1j * theta))


def geodesic_ivp(
    metric: ConformalMetric,
    z0: complex,
    theta: float,
    s_max: float,
    n_samples: int = N_SAMPLES,
    boundary_eps: float | None = None,
) -> GeodesicPath:
    """Geodesic from `z0` in direction `theta`, parametrised by metric arclength.

    Solves z̈ + 2ρ_z ż² = 0 with e^ρ|ż| = 1 until `s_max` or until |z| reaches
    (1 - boundary_eps) times the domain radius.

    Parameters
    ----------
    metric : ConformalMetric
    z0 : complex
        Start point inside the domain.
    theta : float
        Initial direction angle.
    s_max : float
        Maximal metric length.
    n_samples : int, optional
        Number of equidistant samples in s, by default 257.
    boundary_eps : float, optional
        Boundary offset, by default settings.boundary_eps.

    Returns
    -------
    GeodesicPath

    Raises
    ------
    GeodesicError
        Step size collapse or a singular point of the metric, with the final s.
    """
    z0 = complex(z0)
    _check_inside(metric, z0)
    if s_max <= 0:
        raise ValueError(f"s_max should be positive, got {s_max}")
    eps = settings.boundary_eps if boundary_eps is None else boundary_eps
    sol = _integrate(metric, z0, unit_velocity(metric, z0, theta), s_max, _boundary_events(metric, eps))
    termination = "boundary" if sol.status == 1 else "s_max"
    return _path_from_solution(metric, sol, termination, n_samples)


def _segment_length(metric: ConformalMetric, z1: complex, z2: complex) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(64)
    z = z1 + (nodes + 1) / 2 * (z2 - z1)
    return float(np.sum(weights / 2 * np.exp(metric.jets(z).rho)) * abs(z2 - z1))


def _shoot(metric, z1: complex, z2: complex, theta: float, s_max: float, eps: float):
    sol = _integrate(
        metric, z1, unit_velocity(metric, z1, theta), s_max, [_closest_approach_event(z2), *_boundary_events(metric, eps)]
    )
    y = sol.y[:, -1]
    z, w = complex(y[0], y[1]), complex(y[2], y[3])
    miss = float(np.imag(np.conj(w) * (z2 - z)) / abs(w))
    return miss, abs(z2 - z), sol


def geodesic_bvp(
    metric: ConformalMetric,
    z1: complex,
    z2: complex,
    n_samples: int = N_SAMPLES,
    tol: float | None = None,
) -> GeodesicPath:
    """Geodesic joining `z1` to `z2`, found by shooting on the initial angle.

    The signed miss distance at the point of closest approach is monotone in
    the angle for non-positively curved metrics; it is bracketed around the
    Euclidean direction and solved with Brent's method.

    Raises
    ------
    ShootingError
        No bracket, or an endpoint error above `tol` (settings.shooting_tol).
    """
    z1, z2 = complex(z1), complex(z2)
    if z1 == z2:
        raise ValueError("geodesic_bvp needs two distinct points")
    for point in (z1, z2):
        _check_inside(metric, point)
    tol = settings.shooting_tol if tol is None else tol
    eps = settings.boundary_eps
    if metric.domain_radius is not None:
        eps = min(eps, (1 - max(abs(z1), abs(z2)) / metric.domain_radius) / 10)
    # a segment is never shorter than the geodesic
    s_max = 1.5 * _segment_length(metric, z1, z2) + 1e-6
    theta0 = float(np.angle(z2 - z1))

    def miss(theta):
        return _shoot(metric, z1, z2, theta, s_max, eps)[0]

    theta_star = None
    f0, gap0, _ = _shoot(metric, z1, z2, theta0, s_max, eps)
    if gap0 <= tol:
        theta_star = theta0
    else:
        for step in BRACKET_STEPS:
            lo, hi = theta0 - step, theta0 + step
            f_lo, f_hi = miss(lo), miss(hi)
            if f_lo * f0 < 0:
                lo, hi = lo, theta0
            elif f_hi * f0 < 0:
                lo, hi = theta0, hi
            else:
                continue
            theta_star = brentq(miss, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            break
    if theta_star is None:
        raise ShootingError(f"no shooting bracket found between {z1} and {z2}")
    _, gap, sol = _shoot(metric, z1, z2, theta_star, s_max, eps)
    if gap > tol:
        raise ShootingError(f"endpoint error {gap:.3g} exceeds {tol:g} between {z1} and {z2}")
    return _path_from_solution(metric, sol, "target", n_samples)


def distance(metric: ConformalMetric, z1: complex, z2: complex) -> float:
    """Geodesic distance; 0 for equal points."""
    if complex(z1) == complex(z2):
        return 0.0
    return geodesic_bvp(metric, z1, z2, n_samples=3).length
