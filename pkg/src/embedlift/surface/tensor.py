"""Schwarzian tensor of a real function on a planar domain."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RealJet2:
    """Value, gradient and Hessian of a real function of (x, y)."""

    value: np.ndarray | float
    dx: np.ndarray | float
    dy: np.ndarray | float
    dxx: np.ndarray | float
    dxy: np.ndarray | float
    dyy: np.ndarray | float

    @classmethod
    def from_wirtinger(cls, value, psi_z, psi_zz, psi_zzbar) -> "RealJet2":
        """Real jet from the Wirtinger derivatives ψ_z, ψ_zz and ψ_zz̄ (real)."""
        psi_z, psi_zz = np.asarray(psi_z), np.asarray(psi_zz)
        psi_zzbar = np.real(psi_zzbar)
        return cls(
            value=np.real(value),
            dx=2 * psi_z.real,
            dy=-2 * psi_z.imag,
            dxx=2 * psi_zz.real + 2 * psi_zzbar,
            dxy=-2 * psi_zz.imag,
            dyy=2 * psi_zzbar - 2 * psi_zz.real,
        )


def schwarzian_tensor(psi: RealJet2):
    """Traceless part and trace scalar of Hess ψ - dψ ⊗ dψ.

    Returns
    -------
    tuple
        (a + bi, ½(Δψ - |∇ψ|²)) with a = ½(ψ_xx - ψ_yy - ψ_x² + ψ_y²) and
        b = -(ψ_xy - ψ_x ψ_y). For ψ = σ of a harmonic map the complex part is
        the harmonic Schwarzian 2(σ_zz - σ_z²).
    """
    a = 0.5 * (psi.dxx - psi.dyy - psi.dx**2 + psi.dy**2)
    b = -(psi.dxy - psi.dx * psi.dy)
    trace = 0.5 * (psi.dxx + psi.dyy - psi.dx**2 - psi.dy**2)
    return a + 1j * b, trace
