"""Ahlfors' Schwarzian of space curves.

For a regular curve φ: (a, b) → ℝ³

    S₁φ = φ'''·φ'/|φ'|² - 3(φ''·φ')²/|φ'|⁴ + (3/2)|φ''|²/|φ'|²

which reduces to the classical Schwarzian for real-valued φ.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_interp_spline

from embedlift.errors import ZeroTangentError
from embedlift.expr import HoloExpr, Jet3, evaluate_at_jet, parse

ZERO_TANGENT = 1e-12
ZERO_CURVATURE = 1e-12


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", a, b)


@dataclass(frozen=True)
class SpaceCurve:
    """Samples of a curve and its first three derivatives, shape (n, 3) each."""

    x: np.ndarray
    phi: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def __post_init__(self):
        speed = np.linalg.norm(self.d1, axis=-1)
        if np.any(speed < ZERO_TANGENT):
            index = int(np.argmin(speed))
            raise ZeroTangentError(f"curve is not regular at x={float(np.ravel(self.x)[index]):.6g}")

    @classmethod
    def from_jets(cls, x, components: Sequence[Jet3]) -> "SpaceCurve":
        """Curve from (real) jets of its components."""
        x = np.asarray(x, dtype=float)
        stacked = [
            np.stack([np.broadcast_to(np.real(c.derivatives[k]), x.shape) for c in components], axis=-1)
            for k in range(4)
        ]
        return cls(x, *stacked)

    @classmethod
    def from_samples(cls, x, phi) -> "SpaceCurve":
        """Curve from dense samples, derivatives from a quintic interpolating spline."""
        x = np.asarray(x, dtype=float)
        spline = make_interp_spline(x, np.asarray(phi, dtype=float), k=5, axis=0)
        return cls(x, spline(x), spline(x, 1), spline(x, 2), spline(x, 3))


@dataclass(frozen=True)
class CurveExpression:
    """Curve with components given as expressions in the variable x."""

    components: tuple[HoloExpr, HoloExpr, HoloExpr]

    @classmethod
    def parse(cls, texts: Sequence[str]) -> "CurveExpression":
        if len(texts) != 3:
            raise ValueError(f"a space curve needs three components, got {len(texts)}")
        return cls(tuple(parse(text, variable="x") for text in texts))

    def jets(self, x_jet: Jet3) -> list[Jet3]:
        return [evaluate_at_jet(c, x_jet) for c in self.components]

    def sample(self, x) -> SpaceCurve:
        x = np.asarray(x, dtype=float)
        return SpaceCurve.from_jets(x, self.jets(Jet3.variable(x)))


def ahlfors_s1(c: SpaceCurve) -> np.ndarray:
    """S₁φ at the samples of `c` from its supplied derivatives."""
    v2 = _dot(c.d1, c.d1)
    return _dot(c.d3, c.d1) / v2 - 3 * _dot(c.d2, c.d1) ** 2 / v2**2 + 1.5 * _dot(c.d2, c.d2) / v2


def speed_jets(c: SpaceCurve) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """v = |φ'| and its first two derivatives."""
    v = np.linalg.norm(c.d1, axis=-1)
    a = _dot(c.d1, c.d2)
    v1 = a / v
    v2 = (_dot(c.d2, c.d2) + _dot(c.d1, c.d3)) / v - a**2 / v**3
    return v, v1, v2


def curvature(c: SpaceCurve) -> np.ndarray:
    """Curvature k = |φ' × φ''| / |φ'|³, set to 0 at straight points."""
    v = np.linalg.norm(c.d1, axis=-1)
    tangent = c.d1 / v[..., None]
    normal_part = c.d2 - _dot(c.d2, tangent)[..., None] * tangent
    k = np.linalg.norm(normal_part, axis=-1) / v**2
    return np.where(np.linalg.norm(normal_part, axis=-1) < ZERO_CURVATURE, 0.0, k)


def s1_frenet(c: SpaceCurve) -> np.ndarray:
    """S₁φ as 𝒮s + ½ v² k², with s the arclength function and k the curvature."""
    v, v1, v2 = speed_jets(c)
    schwarzian_s = v2 / v - 1.5 * (v1 / v) ** 2
    return schwarzian_s + 0.5 * v**2 * curvature(c) ** 2


def classical_schwarzian(x: Jet3) -> np.ndarray:
    """𝒮x = x'''/x' - (3/2)(x''/x')² of a real jet."""
    d1, d2, d3 = (np.real(np.asarray(d)) for d in (x.d1, x.d2, x.d3))
    if np.any(np.abs(d1) < ZERO_TANGENT):
        raise ZeroTangentError("reparametrisation has a critical point")
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def s1_chain_rule(curve: CurveExpression, x_of_t: HoloExpr | str, t) -> np.ndarray:
    """S₁(φ∘x)(t) through the chain rule S₁φ(x(t)) x'(t)² + 𝒮x(t).

    Raises
    ------
    ZeroTangentError
        x'(t) = 0 at a sample.
    """
    if isinstance(x_of_t, str):
        x_of_t = parse(x_of_t, variable="t")
    t = np.asarray(t, dtype=float)
    x = evaluate_at_jet(x_of_t, Jet3.variable(t))
    x_values = np.broadcast_to(np.real(x.d0), t.shape)
    x_prime = np.broadcast_to(np.real(x.d1), t.shape)
    schwarzian_x = classical_schwarzian(x)
    return ahlfors_s1(curve.sample(x_values)) * x_prime**2 + schwarzian_x


def reparametrized(curve: CurveExpression, x_of_t: HoloExpr | str, t) -> SpaceCurve:
    """The curve t ↦ φ(x(t)) with exact derivatives."""
    if isinstance(x_of_t, str):
        x_of_t = parse(x_of_t, variable="t")
    t = np.asarray(t, dtype=float)
    x = evaluate_at_jet(x_of_t, Jet3.variable(t))
    return SpaceCurve.from_jets(t, curve.jets(x))
