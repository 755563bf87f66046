"""Möbius transformations of ℝ³ ∪ {∞} and the spherical (chordal) metric."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from embedlift.errors import SingularPointError
from embedlift.expr import Jet3
from embedlift.schwarzian.curves import SpaceCurve

Vector = tuple[float, float, float]


class Inversion(BaseModel):
    """M_q(p) = (p - q)/|p - q|²."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["inversion"] = "inversion"
    center: Vector = (0.0, 0.0, 0.0)

    def apply(self, p) -> np.ndarray:
        d = np.asarray(p, dtype=float) - np.asarray(self.center)
        n2 = np.einsum("...i,...i->...", d, d)
        if np.any(n2 == 0):
            raise SingularPointError(f"inversion evaluated at its center {self.center}")
        return d / n2[..., None]

    def apply_jets(self, components: list[Jet3]) -> list[Jet3]:
        d = [c - q for c, q in zip(components, self.center)]
        n2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
        return [di / n2 for di in d]


class AffineMap(BaseModel):
    """p ↦ scale · R p + shift with R a rotation matrix."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["affine"] = "affine"
    rotation: tuple[Vector, Vector, Vector] = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    scale: float = Field(default=1.0, gt=0)
    shift: Vector = (0.0, 0.0, 0.0)

    @field_validator("rotation")
    @classmethod
    def check_rotation(cls, v):
        r = np.asarray(v, dtype=float)
        if not np.allclose(r @ r.T, np.eye(3), atol=1e-9) or np.linalg.det(r) < 0:
            raise ValueError("rotation should be an orthogonal matrix with determinant 1")
        return v

    def apply(self, p) -> np.ndarray:
        r = np.asarray(self.rotation)
        return self.scale * np.asarray(p, dtype=float) @ r.T + np.asarray(self.shift)

    def apply_jets(self, components: list[Jet3]) -> list[Jet3]:
        r = self.rotation
        return [
            components[0] * (self.scale * r[i][0])
            + components[1] * (self.scale * r[i][1])
            + components[2] * (self.scale * r[i][2])
            + self.shift[i]
            for i in range(3)
        ]


MobiusShift = Inversion | AffineMap


def mobius_r3(kind: MobiusShift, p) -> np.ndarray:
    """Image of the point(s) `p` under an inversion or a similarity.

    Raises
    ------
    SingularPointError
        Inversion evaluated at its center.
    """
    return kind.apply(p)


def transform_curve(kind: MobiusShift, c: SpaceCurve) -> SpaceCurve:
    """M∘φ with derivatives propagated through jets."""
    components = [Jet3(*(getattr(c, name)[:, i] for name in ("phi", "d1", "d2", "d3"))) for i in range(3)]
    return SpaceCurve.from_jets(c.x, kind.apply_jets(components))


def to_sphere(p, infinity_threshold: float = np.inf) -> np.ndarray:
    """Inverse stereographic projection ℝ³ ∪ {∞} → S³ ⊂ ℝ⁴.

    Points with a non-finite coordinate or norm above `infinity_threshold` map
    to the north pole (0, 0, 0, 1).
    """
    p = np.asarray(p, dtype=float)
    with np.errstate(all="ignore"):
        n2 = np.einsum("...i,...i->...", p, p)
        image = np.concatenate([2 * p, (n2 - 1)[..., None]], axis=-1) / (n2 + 1)[..., None]
    far = ~np.all(np.isfinite(p), axis=-1) | ~np.isfinite(n2) | (np.sqrt(n2) > infinity_threshold)
    return np.where(far[..., None], np.array([0.0, 0.0, 0.0, 1.0]), image)


def chordal_distance(p1, p2) -> np.ndarray:
    """Euclidean distance of the images on S³; at most 2."""
    return np.linalg.norm(to_sphere(p1) - to_sphere(p2), axis=-1)
