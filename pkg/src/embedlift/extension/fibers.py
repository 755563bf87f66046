"""Circle fibers of the model bundle over the disk and of the surface bundle over Σ."""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from embedlift.errors import BaseLookupError, SingularPointError
from embedlift.extension.canonical import CanonicalFunction, log_u_derivatives
from embedlift.schwarzian import AffineMap, Inversion, MobiusShift
from embedlift.surface import surface_jet

LINE_TOL = 1e-12
E1, E2, E3 = np.eye(3)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class CircleFiber:
    """A circle orthogonal to Σ at `base`, or a line along the normal.

    The circle is P(φ) = base + r m̂ (1 - cos φ) + r N sin φ, so φ = 0 is the
    base, the tangent there is r N and the center is base + r m̂. A line fiber
    is P(λ) = base + λ N.
    """

    base: np.ndarray
    normal: np.ndarray
    direction: np.ndarray | None
    radius: float

    @property
    def is_line(self) -> bool:
        return self.direction is None

    @property
    def center(self) -> np.ndarray | None:
        return None if self.is_line else self.base + self.radius * self.direction

    @property
    def plane_normal(self) -> np.ndarray:
        """Unit normal of the plane containing the fiber."""
        if self.is_line:
            other = E1 if abs(self.normal[0]) < 0.9 else E2
            return _unit(np.cross(self.normal, other))
        return np.cross(self.direction, self.normal)

    def point(self, t) -> np.ndarray:
        """Points at angle φ (circle) or signed length λ (line), shape t.shape + (3,)."""
        t = np.asarray(t, dtype=float)[..., None]
        if self.is_line:
            return self.base + t * self.normal
        r = self.radius
        return self.base + r * (1 - np.cos(t)) * self.direction + r * np.sin(t) * self.normal

    def parameter_of(self, p) -> np.ndarray:
        """φ in (-π, π] (circle) or λ (line) of the point of the fiber nearest to `p`."""
        w = np.asarray(p, dtype=float) - self.base
        along = w @ self.normal
        if self.is_line:
            return along
        return np.arctan2(along, self.radius - w @ self.direction)

    def distance(self, p) -> np.ndarray:
        """Euclidean distance from `p` to the fiber."""
        p = np.asarray(p, dtype=float)
        return np.linalg.norm(p - self.point(self.parameter_of(p)), axis=-1)

    def sample(self, n: int = 128) -> np.ndarray:
        """n points; for a line, n points with |λ| ≤ 10."""
        if self.is_line:
            return self.point(np.linspace(-10, 10, n))
        return self.point(2 * np.pi * np.arange(n) / n)

    def to_frame(self, n: int = 128) -> pd.DataFrame:
        p = self.sample(n)
        return pd.DataFrame({"x": p[:, 0], "y": p[:, 1], "z": p[:, 2]})


def fiber_from_frame(base, X_x, X_y, normal, grad_log_u, line_tol: float = LINE_TOL) -> CircleFiber:
    """Fiber at a point with tangent frame (X_x, X_y), unit normal and ∇ log u = (a, b).

    The radius is e^σ / (2 |∇ log u|) with e^σ = |X_x| and the center lies on
    the push-forward of ∇ log u.
    """
    base, X_x, X_y, normal = (np.asarray(v, dtype=float) for v in (base, X_x, X_y, normal))
    a, b = grad_log_u
    norm = math.hypot(a, b)
    if norm < line_tol:
        return CircleFiber(base=base, normal=normal, direction=None, radius=math.inf)
    scale = float(np.linalg.norm(X_x))
    direction = _unit(a * X_x + b * X_y)
    return CircleFiber(base=base, normal=normal, direction=direction, radius=scale / (2 * norm))


def model_fiber(z: complex) -> CircleFiber:
    """Fiber over z ∈ 𝔻 of the bundle of circles through z and 1/z̄ orthogonal to the plane.

    For z = r e^{iα} the center is (r + 1/r)/2 e^{iα} and the radius (1/r - r)/2;
    z = 0 gives the vertical line through the origin.
    """
    z = complex(z)
    if abs(z) >= 1:
        raise BaseLookupError(f"model fiber needs |z| < 1, got {z}")
    g = z / (1 - abs(z) ** 2)
    return fiber_from_frame((z.real, z.imag, 0.0), E1, E2, E3, (g.real, g.imag))


def base_of(p) -> complex:
    """Base point z ∈ 𝔻 of the model fiber through p ∈ ℝ³ ∖ ∂𝔻.

    Raises
    ------
    BaseLookupError
        p lies on the unit circle of the horizontal plane.
    """
    x, y, w = (float(v) for v in p)
    horizontal = math.hypot(x, y)
    if horizontal == 0:
        return 0j
    c = (horizontal**2 + w**2 + 1) / (2 * horizontal)
    if c - 1 <= 1e-14:
        raise BaseLookupError(f"({x}, {y}, {w}) lies on the unit circle")
    r = c - math.sqrt(c * c - 1)
    return r * complex(x, y) / horizontal


def surface_fiber(c: CanonicalFunction, z: complex, shift: MobiusShift | None = None) -> CircleFiber:
    """Fiber over f̃(z) of the bundle attached to the lift (or its Möbius shift)."""
    z = complex(z)
    jet = surface_jet(c.surface, z, with_position=True)
    _, grad, _ = log_u_derivatives(c, np.array([z]), shift)
    if not np.all(np.isfinite(grad)):
        raise SingularPointError("canonical function undefined", z)
    base, X_x, X_y, normal = jet.position, jet.X_x, jet.X_y, jet.normal
    if shift is not None:
        base, X_x, X_y, normal = shift_frame(shift, base, X_x, X_y, normal)
    return fiber_from_frame(base, X_x, X_y, normal, grad[0])


def shift_frame(shift: MobiusShift, base, X_x, X_y, normal):
    """Image of a point with tangent frame and unit normal under a Möbius map of ℝ³."""
    if isinstance(shift, AffineMap):
        rotation = np.asarray(shift.rotation)
        linear = shift.scale * rotation
        return shift.apply(base), linear @ X_x, linear @ X_y, rotation @ normal
    if isinstance(shift, Inversion):
        d = np.asarray(base) - np.asarray(shift.center)
        n2 = float(d @ d)
        if n2 == 0:
            raise SingularPointError("inversion center on the surface")

        def differential(v):
            return (v - 2 * (d @ v) * d / n2) / n2

        return shift.apply(base), differential(X_x), differential(X_y), _unit(differential(normal))
    raise TypeError(f"unsupported shift {shift!r}")


def fibers_to_csv(fibers: list[CircleFiber], path: Path, n: int = 128) -> Path:
    """One row per sampled point with the index of its fiber."""
    frames = [f.to_frame(n).assign(fiber=k) for k, f in enumerate(fibers)]
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    return path


def fibers_to_obj(fibers: list[CircleFiber], path: Path, n: int = 128) -> Path:
    """Wavefront OBJ with one polyline per fiber; circles are closed."""
    lines, offset = [], 1
    for fiber in fibers:
        points = fiber.sample(n)
        lines.extend(f"v {x:.12g} {y:.12g} {w:.12g}" for x, y, w in points)
        indices = list(range(offset, offset + len(points)))
        if not fiber.is_line:
            indices.append(offset)
        lines.append("l " + " ".join(map(str, indices)))
        offset += len(points)
    path.write_text("\n".join(lines) + "\n")
    return path


__all__ = [
    "CircleFiber",
    "base_of",
    "fiber_from_frame",
    "fibers_to_csv",
    "fibers_to_obj",
    "model_fiber",
    "shift_frame",
    "surface_fiber",
]
