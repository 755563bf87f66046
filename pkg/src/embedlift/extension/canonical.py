"""The canonical function u = e^{(ρ-σ)/2} of a lift in a conformal metric."""

import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel

from embedlift.errors import SingularPointError
from embedlift.logger import get_logger
from embedlift.metric import ConformalMetric, GeodesicPath, resolve_diameter
from embedlift.schwarzian import AffineMap, Inversion, MobiusShift
from embedlift.surface import HarmonicMapData, lift, lift_along_path, sigma_jets, surface_jet

logger = get_logger(__name__)

FD_STEP = 0.02


@dataclass(frozen=True)
class CanonicalFunction:
    """u_f = sqrt(e^{ρ-σ}) for the lift of `surface` and the metric `metric`."""

    surface: HarmonicMapData
    metric: ConformalMetric
    delta: float | None = None

    @property
    def diameter(self) -> float:
        if self.delta is not None:
            return self.delta
        return resolve_diameter(self.metric)[0]

    def log_jets(self, z):
        """L = log u and L_z, L_zz, L_zz̄."""
        s = sigma_jets(self.surface, z, strict=np.ndim(z) == 0)
        r = self.metric.jets(z)
        return (
            0.5 * (r.rho - s.sigma),
            0.5 * (r.rho_z - s.sigma_z),
            0.5 * (r.rho_zz - s.sigma_zz),
            0.5 * (r.rho_zzbar - s.sigma_zzbar),
        )

    def __call__(self, z):
        return np.exp(self.log_jets(z)[0])

    def wirtinger(self, z):
        """u, u_z, u_zz and u_zz̄."""
        L, Lz, Lzz, Lzzbar = self.log_jets(z)
        u = np.exp(L)
        return u, u * Lz, u * (Lzz + Lz**2), u * (Lzzbar + np.abs(Lz) ** 2)

    def gradient(self, z):
        """Euclidean gradient of u as a complex number u_x + i u_y."""
        u, uz, _, _ = self.wirtinger(z)
        return 2 * np.conj(uz)

    def grad_log(self, z):
        """∇ log u as a complex number."""
        return 2 * np.conj(self.log_jets(z)[1])

    def along(self, path: GeodesicPath):
        """U(s) = u(γ(s)) and its first two derivatives along a path."""
        u, uz, uzz, uzzbar = self.wirtinger(path.z)
        w, a = path.zdot, path.zddot
        first = 2 * np.real(uz * w)
        second = 2 * np.real(uzz * w**2 + uz * a) + 2 * uzzbar * np.abs(w) ** 2
        return u, first, second


def log_u_derivatives(c: CanonicalFunction, z, shift: MobiusShift | None = None):
    """log of the (shifted) canonical function with its real gradient and Hessian.

    Returns
    -------
    tuple[np.ndarray, np.ndarray, np.ndarray]
        Values shape z.shape, gradients z.shape + (2,), Hessians z.shape + (2, 2).
    """
    z = np.asarray(z, dtype=complex)
    L, Lz, Lzz, Lzzbar = c.log_jets(z)
    value = np.asarray(L, dtype=float)
    gx, gy = 2 * np.real(Lz), -2 * np.imag(Lz)
    hxx = 2 * np.real(Lzz) + 2 * np.real(Lzzbar)
    hyy = 2 * np.real(Lzzbar) - 2 * np.real(Lzz)
    hxy = -2 * np.imag(Lzz)
    grad = np.stack([gx, gy], axis=-1)
    hess = np.stack([np.stack([hxx, hxy], axis=-1), np.stack([hxy, hyy], axis=-1)], axis=-2)
    if isinstance(shift, AffineMap):
        value = value - 0.5 * math.log(shift.scale)
    elif isinstance(shift, Inversion):
        jet = surface_jet(c.surface, z, with_position=True)
        d = jet.position - np.asarray(shift.center)
        n2 = np.einsum("...i,...i->...", d, d)
        if np.any(n2 == 0):
            raise SingularPointError("inversion center lies on the surface")
        frame = np.stack([jet.X_x, jet.X_y], axis=-2)
        second = np.stack([np.stack([jet.X_xx, jet.X_xy], axis=-2), np.stack([jet.X_xy, jet.X_yy], axis=-2)], axis=-3)
        dx = np.einsum("...ki,...i->...k", frame, d)
        value = value + 0.5 * np.log(n2)
        grad = grad + dx / n2[..., None]
        gram = np.einsum("...ki,...li->...kl", frame, frame)
        hess = hess + (gram + np.einsum("...kli,...i->...kl", second, d)) / n2[..., None, None]
        hess = hess - 2 * dx[..., :, None] * dx[..., None, :] / n2[..., None, None] ** 2
    return value, grad, hess


def shifted_u(c: CanonicalFunction, shift: MobiusShift | None, z):
    """Canonical function of M∘f̃: |f̃ - q| u for an inversion at q, u/sqrt(scale) for a similarity.

    Raises
    ------
    SingularPointError
        The inversion center lies on the surface at `z`.
    """
    u = c(z)
    if shift is None:
        return u
    if isinstance(shift, AffineMap):
        return u / math.sqrt(shift.scale)
    distance = np.linalg.norm(lift(c.surface, z) - np.asarray(shift.center), axis=-1)
    if np.any(distance == 0):
        raise SingularPointError("inversion center lies on the surface", complex(np.ravel(z)[0]))
    return distance * u


def shifted_along(c: CanonicalFunction, path: GeodesicPath, shift: MobiusShift | None = None):
    """U, U', U'' of the shifted canonical function along a path."""
    u, u1, u2 = c.along(path)
    if shift is None:
        return u, u1, u2
    if isinstance(shift, AffineMap):
        k = 1 / math.sqrt(shift.scale)
        return k * u, k * u1, k * u2
    psi, d1, d2, _ = lift_along_path(c.surface, path.z, path.zdot, path.zddot, path.zdddot)
    d = psi - np.asarray(shift.center)
    n = np.linalg.norm(d, axis=-1)
    dot1 = np.einsum("...i,...i->...", d, d1)
    n1 = dot1 / n
    n2 = (np.einsum("...i,...i->...", d1, d1) + np.einsum("...i,...i->...", d, d2)) / n - dot1**2 / n**3
    return n * u, n1 * u + n * u1, n2 * u + 2 * n1 * u1 + n * u2


class ConvexityReport(BaseModel):
    """min of U'' + (π²/δ²) U along a geodesic and the 𝒮τ cross-check."""

    min_value: float
    argmin_s: float
    pi2_over_delta2: float
    holds: bool
    ode_residual: float | None


def _schwarzian_tau(c: CanonicalFunction, path: GeodesicPath, s: np.ndarray, h: float) -> np.ndarray:
    # log τ' = σ - ρ along the path
    values = []
    for k in (-2, -1, 0, 1, 2):
        z, _ = path.at(s + k * h)
        values.append(-2 * np.asarray(c.log_jets(z)[0]))
    m2, m1, c0, p1, p2 = values
    first = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)
    second = (-m2 + 16 * m1 - 30 * c0 + 16 * p1 - p2) / (12 * h * h)
    return second - 0.5 * first**2


def convexity_check(
    c: CanonicalFunction,
    path: GeodesicPath,
    shift: MobiusShift | None = None,
    tol: float = 1e-6,
    h: float = FD_STEP,
) -> ConvexityReport:
    """Check U'' + (π²/δ²) U ≥ 0 along a geodesic.

    Without a shift U = (τ')^{-1/2} for τ' = e^{σ-ρ}, so U'' + ½(𝒮τ) U = 0;
    the residual of this ODE, with 𝒮τ from five-point differences, is reported
    as `ode_residual`.
    """
    delta = c.diameter
    k = 0.0 if math.isinf(delta) else math.pi**2 / delta**2
    u, _, u2 = shifted_along(c, path, shift)
    values = u2 + k * u
    i = int(np.argmin(values))
    residual = None
    if shift is None:
        inner = (path.s >= path.s[0] + 2 * h) & (path.s <= path.s[-1] - 2 * h)
        if inner.any():
            s_tau = _schwarzian_tau(c, path, path.s[inner], h)
            _, _, u2_plain = c.along(path)
            residual = float(np.max(np.abs(u2_plain[inner] + 0.5 * s_tau * u[inner])))
    return ConvexityReport(
        min_value=float(values[i]),
        argmin_s=float(path.s[i]),
        pi2_over_delta2=k,
        holds=bool(values[i] >= -tol),
        ode_residual=residual,
    )
