"""Second-order jets of the lifted surface F = (Re f, Im f, W)."""

from dataclasses import dataclass

import numpy as np

from embedlift.expr import Jet3
from embedlift.surface.harmonic_map import HarmonicMapData, lift, map_jets


def _vec(f, w) -> np.ndarray:
    f = np.asarray(f)
    return np.stack([f.real, f.imag, np.asarray(w, dtype=float)], axis=-1)


@dataclass(frozen=True)
class SurfaceJet:
    """Position, first and second partials and unit normal of the lift.

    All vectors have a trailing axis of length 3. `position` is None when the
    jet was built without integrating the lift.
    """

    X_x: np.ndarray
    X_y: np.ndarray
    X_xx: np.ndarray
    X_xy: np.ndarray
    X_yy: np.ndarray
    normal: np.ndarray
    position: np.ndarray | None = None

    @property
    def metric_factor(self) -> np.ndarray:
        """e^{2σ} = |X_x|² = |X_y|²."""
        return np.einsum("...i,...i->...", self.X_x, self.X_x)

    def second_fundamental_form(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients (L, M) of II; N = -L for a minimal surface."""
        L = np.einsum("...i,...i->...", self.X_xx, self.normal)
        M = np.einsum("...i,...i->...", self.X_xy, self.normal)
        return L, M


def _first_and_second(hp: Jet3, q: Jet3):
    H, H1 = np.asarray(hp.d0), np.asarray(hp.d1)
    Q, Q1 = np.asarray(q.d0), np.asarray(q.d1)
    G = H * Q * Q
    G1 = H1 * Q * Q + 2 * H * Q * Q1
    P = H * Q
    P1 = H1 * Q + H * Q1
    return H, H1, G, G1, P, P1


def surface_jet(m: HarmonicMapData, z, with_position: bool = False, strict: bool = True) -> SurfaceJet:
    """Partial derivatives of the lift at `z`, in the coordinates z = x + iy.

    With P = h'q: f_x = h' + conj(g'), f_y = i(h' - conj(g')), W_x = 2 Im P and
    W_y = 2 Re P. Second derivatives follow by differentiating once more;
    X_yy = -X_xx since every coordinate is harmonic.
    """
    j = map_jets(m, z, strict=strict)
    with np.errstate(all="ignore"):
        H, H1, G, G1, P, P1 = _first_and_second(j.hp, j.q)
        X_x = _vec(H + np.conj(G), 2 * P.imag)
        X_y = _vec(1j * (H - np.conj(G)), 2 * P.real)
        X_xx = _vec(H1 + np.conj(G1), 2 * P1.imag)
        X_xy = _vec(1j * (H1 - np.conj(G1)), 2 * P1.real)
        cross = np.cross(X_x, X_y)
        normal = cross / np.linalg.norm(cross, axis=-1, keepdims=True)
    invalid = ~np.asarray(j.valid)[..., None]
    X_x, X_y, X_xx, X_xy, normal = (np.where(invalid, np.nan, v) for v in (X_x, X_y, X_xx, X_xy, normal))
    position = lift(m, z, strict=strict) if with_position else None
    return SurfaceJet(X_x=X_x, X_y=X_y, X_xx=X_xx, X_xy=X_xy, X_yy=-X_xx, normal=normal, position=position)


def normal_curvature(m: HarmonicMapData, z, theta, strict: bool = True):
    """Normal curvature of the lift in the direction of angle `theta` in the z-plane.

    κ_n(θ) = II(d, d) / e^{2σ} with d = (cos θ, sin θ). For a minimal surface
    |κ_n| ≤ sqrt(|K|) with equality in the principal directions.
    """
    jet = surface_jet(m, z, strict=strict)
    L, M = jet.second_fundamental_form()
    theta = np.asarray(theta, dtype=float)
    value = (L * np.cos(2 * theta) + M * np.sin(2 * theta)) / jet.metric_factor
    return value.item() if np.ndim(value) == 0 else value
