"""Derivatives of the lift along a parametrised curve z(s) in the domain."""

import numpy as np

from embedlift.expr import Jet3
from embedlift.surface.harmonic_map import HarmonicMapData, lift, map_jets


def _primitive_along(derivative: Jet3, z1, z2, z3):
    """First three s-derivatives of A(z(s)) where A' is given as a jet."""
    a0, a1, a2 = (np.asarray(d) for d in (derivative.d0, derivative.d1, derivative.d2))
    first = a0 * z1
    second = a1 * z1**2 + a0 * z2
    third = a2 * z1**3 + 3 * a1 * z1 * z2 + a0 * z3
    return first, second, third


def lift_along_path(m: HarmonicMapData, z, z1, z2, z3, with_position: bool = True):
    """The space curve ψ(s) = F(z(s)) and its first three derivatives.

    Parameters
    ----------
    m : HarmonicMapData
    z, z1, z2, z3 : np.ndarray
        Samples of z(s) and its derivatives in s.
    with_position : bool, optional
        Also integrate the lift itself, by default True.

    Returns
    -------
    tuple[np.ndarray | None, np.ndarray, np.ndarray, np.ndarray]
        (ψ, ψ', ψ'', ψ'''), each with a trailing axis of length 3.
    """
    z = np.asarray(z, dtype=complex)
    j = map_jets(m, z)
    derivatives = []
    for h_part, g_part, p_part in zip(
        _primitive_along(j.hp, z1, z2, z3),
        _primitive_along(j.gp, z1, z2, z3),
        _primitive_along(j.height, z1, z2, z3),
    ):
        f = h_part + np.conj(g_part)
        derivatives.append(np.stack([f.real, f.imag, 2 * np.imag(p_part)], axis=-1))
    position = lift(m, z) if with_position else None
    return (position, *derivatives)
