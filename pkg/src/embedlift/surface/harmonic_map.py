"""Harmonic maps f = h + conj(g) with dilatation q**2 and their minimal lifts."""

from dataclasses import dataclass
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from embedlift.errors import EmbedliftError, SingularPointError
from embedlift.expr import HoloExpr, Jet3, evaluate, guarded_integrand, integrate_segments, parse
from embedlift.logger import get_logger

logger = get_logger(__name__)


def to_complex(value: Any) -> complex:
    """Read a complex number from a number, a [re, im] pair or a constant expression."""
    if isinstance(value, str):
        expr = parse(value)
        if not expr.is_constant:
            raise ValueError(f"'{value}' is not a constant")
        return complex(evaluate(expr, 0j).d0)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"expected [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


class HarmonicMapData(BaseModel):
    """Holomorphic data of a harmonic map and its Weierstrass-Enneper lift.

    Parameters
    ----------
    h_prime : HoloExpr | str
        Derivative of the analytic part h.
    q : HoloExpr | str
        Square root of the dilatation, g' = h' q**2.
    z0 : complex, optional
        Base point of the lift, by default 0.
    h, g : HoloExpr | str, optional
        Primitives of h' and g'. Only their values at z0 are used, to anchor
        f(z0) = h(z0) + conj(g(z0)). Without them f(z0) = 0.
    name : str, optional
        Label used in logs and reports.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h_prime: HoloExpr
    q: HoloExpr
    z0: complex = 0j
    h: HoloExpr | None = None
    g: HoloExpr | None = None
    name: str | None = None

    @field_validator("h_prime", "q", "h", "g", mode="before")
    @classmethod
    def parse_expression(cls, v):
        if isinstance(v, str):
            return parse(v)
        return v

    @field_validator("z0", mode="before")
    @classmethod
    def parse_z0(cls, v):
        return to_complex(v)

    @field_serializer("h_prime", "q", "h", "g")
    def serialize_expression(self, v: HoloExpr | None) -> str | None:
        return None if v is None else v.text

    @field_serializer("z0")
    def serialize_z0(self, v: complex) -> list[float]:
        return [v.real, v.imag]

    @model_validator(mode="after")
    def check_primitives(self):
        hp = evaluate(self.h_prime, self.z0)
        q = evaluate(self.q, self.z0)
        if not (hp.is_finite() and q.is_finite()):
            raise ValueError(f"h' or q is singular at the base point z0={self.z0}")
        gp = hp * q * q
        for label, primitive, derivative in (("h", self.h, hp.d0), ("g", self.g, gp.d0)):
            if primitive is None:
                continue
            slope = complex(evaluate(primitive, self.z0).d1)
            if abs(slope - complex(derivative)) > 1e-8 * max(1.0, abs(slope)):
                logger.warning(
                    f"{label}'({self.z0}) = {slope} does not match the given derivative {complex(derivative)}"
                )
        return self

    @property
    def label(self) -> str:
        return self.name or f"h'={self.h_prime.text}, q={self.q.text}"

    def anchor(self) -> complex:
        """f(z0)."""
        value = 0j
        if self.h is not None:
            value += complex(evaluate(self.h, self.z0).d0)
        if self.g is not None:
            value += complex(np.conj(evaluate(self.g, self.z0).d0))
        return value


@dataclass(frozen=True)
class MapJets:
    """Jets of h' and q at a set of points, with a validity mask."""

    hp: Jet3
    q: Jet3
    valid: np.ndarray

    @property
    def gp(self) -> Jet3:
        return self.hp * self.q * self.q

    @property
    def height(self) -> Jet3:
        """Jet of h' q, the derivative of the holomorphic function whose imaginary part is W/2."""
        return self.hp * self.q


def map_jets(m: HarmonicMapData, z, strict: bool = True) -> MapJets:
    """Evaluate h' and q at `z`; invalid where singular or h' = 0."""
    hp = evaluate(m.h_prime, z)
    q = evaluate(m.q, z)
    valid = hp.is_finite() & q.is_finite() & (np.asarray(hp.d0) != 0)
    if strict and not np.all(valid):
        z_arr = np.broadcast_to(np.asarray(z, dtype=complex), valid.shape)
        raise SingularPointError(f"lift of {m.label} is singular", complex(z_arr[~valid].ravel()[0]))
    return MapJets(hp=hp, q=q, valid=valid)


def _masked(value, valid: np.ndarray, scalar: bool):
    value = np.where(valid, value, np.nan)
    return value.item() if scalar else value


@dataclass(frozen=True)
class SigmaJets:
    """σ = log e^σ and its Wirtinger derivatives."""

    sigma: Any
    sigma_z: Any
    sigma_zz: Any
    sigma_zzbar: Any


def _sigma_parts(j: MapJets):
    with np.errstate(all="ignore"):
        H, H1, H2 = (np.asarray(d) for d in (j.hp.d0, j.hp.d1, j.hp.d2))
        Q, Q1, Q2 = (np.asarray(d) for d in (j.q.d0, j.q.d1, j.q.d2))
        n = 1 + np.abs(Q) ** 2
        A = Q1 * np.conj(Q) / n
        sigma = np.log(np.abs(H)) + np.log(n)
        sigma_z = H1 / (2 * H) + A
        sigma_zz = 0.5 * (H2 / H - (H1 / H) ** 2) + Q2 * np.conj(Q) / n - A**2
        sigma_zzbar = np.abs(Q1) ** 2 / n**2
    return sigma, sigma_z, sigma_zz, sigma_zzbar


def sigma_jets(m: HarmonicMapData, z, strict: bool = True) -> SigmaJets:
    """Conformal factor exponent σ = log|h'| + log(1+|q|²) and its Wirtinger derivatives.

    Parameters
    ----------
    m : HarmonicMapData
    z : complex | np.ndarray
    strict : bool, optional
        Raise on singular points (default); otherwise they come out as nan.

    Returns
    -------
    SigmaJets
        (σ, σ_z, σ_zz, σ_zz̄), σ_zz̄ = |q'|²/(1+|q|²)² = -¼ e^{2σ} K.

    Raises
    ------
    SingularPointError
        h' = 0 or h', q singular (strict mode).
    """
    j = map_jets(m, z, strict=strict)
    scalar = np.ndim(z) == 0
    parts = _sigma_parts(j)
    return SigmaJets(*[_masked(p, j.valid, scalar) for p in parts])


def gauss_curvature(m: HarmonicMapData, z, strict: bool = True):
    """K = -4|q'|² / (|h'|² (1+|q|²)⁴)."""
    j = map_jets(m, z, strict=strict)
    with np.errstate(all="ignore"):
        H, Q, Q1 = (np.asarray(d) for d in (j.hp.d0, j.q.d0, j.q.d1))
        K = -4 * np.abs(Q1) ** 2 / (np.abs(H) ** 2 * (1 + np.abs(Q) ** 2) ** 4)
    return _masked(K, j.valid, np.ndim(z) == 0)


def harmonic_schwarzian(m: HarmonicMapData, z, strict: bool = True):
    """Harmonic Schwarzian 2(σ_zz - σ_z²)."""
    j = map_jets(m, z, strict=strict)
    _, sigma_z, sigma_zz, _ = _sigma_parts(j)
    with np.errstate(all="ignore"):
        value = 2 * (sigma_zz - sigma_z**2)
    return _masked(value, j.valid, np.ndim(z) == 0)


def expanded_schwarzian(m: HarmonicMapData, z, strict: bool = True):
    """The harmonic Schwarzian written through h and q:

    Sh + 2 conj(q)/(1+|q|²) (q'' - q' h''/h') - 4 (q' conj(q)/(1+|q|²))².
    """
    j = map_jets(m, z, strict=strict)
    with np.errstate(all="ignore"):
        H, H1, H2 = (np.asarray(d) for d in (j.hp.d0, j.hp.d1, j.hp.d2))
        Q, Q1, Q2 = (np.asarray(d) for d in (j.q.d0, j.q.d1, j.q.d2))
        n = 1 + np.abs(Q) ** 2
        classical = H2 / H - 1.5 * (H1 / H) ** 2
        value = classical + 2 * np.conj(Q) / n * (Q2 - Q1 * H1 / H) - 4 * (Q1 * np.conj(Q) / n) ** 2
    return _masked(value, j.valid, np.ndim(z) == 0)


def ahlfors_derivative(m: HarmonicMapData, z, strict: bool = True):
    """Traceless part 𝒮f and trace scalar ½|K| of the Ahlfors derivative."""
    K = gauss_curvature(m, z, strict=strict)
    return harmonic_schwarzian(m, z, strict=strict), 0.5 * np.abs(K)


def conformal_factor(m: HarmonicMapData, z, strict: bool = True):
    """e^σ = |h'| (1 + |q|²)."""
    j = map_jets(m, z, strict=strict)
    with np.errstate(all="ignore"):
        value = np.abs(np.asarray(j.hp.d0)) * (1 + np.abs(np.asarray(j.q.d0)) ** 2)
    return _masked(value, j.valid, np.ndim(z) == 0)


def _lift_integrals(m: HarmonicMapData, z: np.ndarray, tol: float | None) -> np.ndarray:
    fn = guarded_integrand(
        [m.h_prime, m.q], combine=lambda H, Q: np.stack([H, H * Q * Q, H * Q])
    )
    return integrate_segments(fn, np.full(z.shape, m.z0), z, tol=tol)


def lift(m: HarmonicMapData, z, tol: float | None = None, strict: bool = True) -> np.ndarray:
    """Weierstrass-Enneper lift (U, V, W) along radial paths from z0.

    U + iV = f(z0) + ∫ h' + conj(∫ h' q²) and W = 2 Im ∫ h' q, all integrals
    taken along the segment z0 -> z, so that W(z0) = 0.

    Parameters
    ----------
    m : HarmonicMapData
    z : complex | np.ndarray
        Point(s) to lift.
    tol : float, optional
        Quadrature tolerance, by default settings.quad_tol.
    strict : bool, optional
        Raise when a path fails (default). Otherwise failed points are nan.

    Returns
    -------
    np.ndarray
        Shape z.shape + (3,).

    Raises
    ------
    IntegrationError, SingularityOnPathError, BranchCutError
        In strict mode, when a path integral fails.
    """
    z_arr = np.asarray(z, dtype=complex)
    flat = z_arr.ravel()
    try:
        integrals = _lift_integrals(m, flat, tol)
    except EmbedliftError:
        if strict:
            raise
        integrals = np.full((3, flat.size), np.nan + 0j)
        for k, point in enumerate(flat):
            try:
                integrals[:, k] = _lift_integrals(m, np.array([point]), tol)[:, 0]
            except EmbedliftError as exc:
                logger.debug(f"lift skipped at z={point}: {exc}")
    f = m.anchor() + integrals[0] + np.conj(integrals[1])
    points = np.stack([f.real, f.imag, 2 * integrals[2].imag], axis=-1)
    return points.reshape(z_arr.shape + (3,))
