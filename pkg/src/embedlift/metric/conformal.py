"""Conformal metrics e^{2ρ}|dz|² on the unit disk."""

import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.special import gamma

from embedlift.expr import HoloExpr, evaluate, parse
from embedlift.logger import get_logger
from embedlift.surface import HarmonicMapData, sigma_jets

logger = get_logger(__name__)

CURVATURE_TOL = 1e-9


@dataclass(frozen=True)
class RhoJets:
    """ρ and its Wirtinger derivatives ρ_z, ρ_zz and ρ_zz̄ (real)."""

    rho: Any
    rho_z: Any
    rho_zz: Any
    rho_zzbar: Any

    def __add__(self, other: "RhoJets") -> "RhoJets":
        return RhoJets(
            self.rho + other.rho,
            self.rho_z + other.rho_z,
            self.rho_zz + other.rho_zz,
            self.rho_zzbar + other.rho_zzbar,
        )

    def gradient(self):
        """Euclidean gradient as a complex number, 2 conj(ρ_z)."""
        return 2 * np.conj(self.rho_z)

    def hessian(self, direction):
        """Hess ρ(v, v) for a complex direction v."""
        return 2 * np.real(self.rho_zz * direction**2) + 2 * np.abs(direction) ** 2 * self.rho_zzbar

    def directional(self, direction):
        """∇ρ · v for a complex direction v."""
        return 2 * np.real(self.rho_z * direction)


def hyperbolic_jets(z, t: float = 1.0) -> RhoJets:
    """Jets of -t log(1 - |z|²)."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        d = 1 - np.abs(z) ** 2
        jets = RhoJets(
            rho=-t * np.log(d),
            rho_z=t * np.conj(z) / d,
            rho_zz=t * np.conj(z) ** 2 / d**2,
            rho_zzbar=t / d**2,
        )
    if jets.rho.ndim == 0:
        return RhoJets(*[v.item() for v in (jets.rho, jets.rho_z, jets.rho_zz, jets.rho_zzbar)])
    return jets


def diameter_power(t: float) -> float:
    """Diameter √π Γ(1-t)/Γ(3/2-t) of the disk in e^{-2t log(1-|z|²)}|dz|².

    Returns math.inf for t ≥ 1, where the metric is complete.
    """
    if t < 0:
        raise ValueError(f"t should be non-negative, got {t}")
    if t >= 1:
        return math.inf
    return float(math.sqrt(math.pi) * gamma(1 - t) / gamma(1.5 - t))


class ConformalMetric(BaseModel, ABC):
    """Metric e^{2ρ}|dz|² on the unit disk.

    Subclasses supply `jets`. `delta` overrides the diameter used by the
    criteria; without it a closed form is used when one exists. `domain_radius`
    None means the metric lives on the whole plane.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    delta: float | None = Field(default=None, gt=0)
    domain_radius: float | None = Field(default=1.0, gt=0)

    @abstractmethod
    def jets(self, z) -> RhoJets:
        """ρ, ρ_z, ρ_zz and ρ_zz̄ at `z` (scalar or array)."""

    @property
    def complete(self) -> bool:
        return False

    @property
    def label(self) -> str:
        return self.kind

    def rho(self, z):
        return self.jets(z).rho

    def diameter(self) -> float | None:
        """Known diameter: override, closed form or ∞ for complete metrics; None if unknown."""
        if self.delta is not None:
            return self.delta
        if self.complete:
            return math.inf
        return None

    def curvature_violation(self, z) -> float:
        """Most negative ρ_zz̄ on `z`, 0 when the curvature is non-positive everywhere."""
        rho_zzbar = np.asarray(self.jets(z).rho_zzbar, dtype=float)
        worst = float(np.nanmin(rho_zzbar, initial=0.0))
        if worst < -CURVATURE_TOL:
            logger.warning(f"{self.label}: ρ_zz̄ = {worst:.3g} < 0, metric has positive curvature")
            return worst
        return 0.0


class PowerMetric(ConformalMetric):
    """ρ = -t log(1 - |z|²); t = 0 is Euclidean, t = 1 the Poincaré-type metric."""

    kind: Literal["power"] = "power"
    t: float = Field(default=1.0, ge=0)

    def jets(self, z) -> RhoJets:
        return hyperbolic_jets(z, self.t)

    @property
    def complete(self) -> bool:
        return self.t >= 1

    @property
    def label(self) -> str:
        return f"power(t={self.t:g})"

    def diameter(self) -> float:
        if self.delta is not None:
            return self.delta
        return diameter_power(self.t)


class EpsteinMetric(ConformalMetric):
    """ρ = τ - log(1 - |z|²) with τ = Re T for a holomorphic T."""

    kind: Literal["epstein"] = "epstein"
    T: HoloExpr

    @field_validator("T", mode="before")
    @classmethod
    def parse_expression(cls, v):
        return parse(v) if isinstance(v, str) else v

    @property
    def complete(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return f"epstein(T={self.T.text})"

    def tau_jets(self, z) -> RhoJets:
        T = evaluate(self.T, z)
        d0, d1, d2 = (np.asarray(d) for d in (T.d0, T.d1, T.d2))
        zero = np.zeros(d0.shape)
        jets = RhoJets(d0.real, d1 / 2, d2 / 2, zero)
        if d0.ndim == 0:
            return RhoJets(*[np.asarray(v).item() for v in (jets.rho, jets.rho_z, jets.rho_zz, jets.rho_zzbar)])
        return jets

    def jets(self, z) -> RhoJets:
        return self.tau_jets(z) + hyperbolic_jets(z)


class PullbackMetric(ConformalMetric):
    """Metric induced by the lift, ρ = σ."""

    kind: Literal["pullback"] = "pullback"
    surface: HarmonicMapData

    @property
    def label(self) -> str:
        return f"pullback({self.surface.label})"

    def jets(self, z) -> RhoJets:
        s = sigma_jets(self.surface, z, strict=np.ndim(z) == 0)
        return RhoJets(s.sigma, s.sigma_z, s.sigma_zz, s.sigma_zzbar)


class BeckerMetric(ConformalMetric):
    """ρ = σ - log(1 - |z|²)."""

    kind: Literal["becker"] = "becker"
    surface: HarmonicMapData

    @property
    def complete(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return f"becker({self.surface.label})"

    def jets(self, z) -> RhoJets:
        s = sigma_jets(self.surface, z, strict=np.ndim(z) == 0)
        return RhoJets(s.sigma, s.sigma_z, s.sigma_zz, s.sigma_zzbar) + hyperbolic_jets(z)


class CustomMetric(ConformalMetric):
    """Metric given by a callable returning RhoJets."""

    kind: Literal["custom"] = "custom"
    jets_fn: Callable[[Any], RhoJets]
    is_complete: bool = False
    name: str = "custom"

    @property
    def complete(self) -> bool:
        return self.is_complete

    @property
    def label(self) -> str:
        return self.name

    def jets(self, z) -> RhoJets:
        return self.jets_fn(z)
