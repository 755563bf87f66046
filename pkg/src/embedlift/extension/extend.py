"""The extension map E: ℝ³ ∪ {∞} → ℝ³ ∪ {∞} and sampled checks of the fiber bundles."""

import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel
from scipy.spatial import cKDTree

from embedlift.errors import BaseLookupError, EmbedliftError
from embedlift.extension.canonical import CanonicalFunction, log_u_derivatives
from embedlift.extension.critical import find_critical_point
from embedlift.extension.fibers import CircleFiber, base_of, model_fiber, surface_fiber
from embedlift.logger import get_logger
from embedlift.schwarzian import MobiusShift, chordal_distance
from embedlift.settings import settings
from embedlift.surface import conformal_factor, lift

logger = get_logger(__name__)


def match_fibers(model: CircleFiber, target: CircleFiber, t: float) -> np.ndarray:
    """Carry the parameter t of a point on `model` to the point of `target` with the same parameter.

    Circles share the angle φ measured from the base; lines share λ; a
    circle of radius r and a line are matched by λ = 2 r tan(φ/2).
    """
    if math.isinf(t):
        return np.full(3, np.inf) if target.is_line else target.point(math.pi)
    if model.is_line == target.is_line:
        return target.point(t)
    if target.is_line:
        if math.isclose(abs(t), math.pi):
            return np.full(3, np.inf)
        return target.point(2 * model.radius * math.tan(t / 2))
    return target.point(2 * math.atan(t / (2 * target.radius)))


@dataclass
class ExtensionMap:
    """E(p) = f̃(z) for p = z in the closed disk and D_z(p) on the fiber of the model bundle over z.

    Requires a metric on the unit disk.
    """

    canonical: CanonicalFunction
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.canonical.metric.domain_radius != 1.0:
            raise ValueError("the extension map is defined for metrics on the unit disk")

    @property
    def surface(self):
        return self.canonical.surface

    def fiber(self, z: complex) -> CircleFiber:
        key = complex(z)
        if key not in self._cache:
            self._cache[key] = surface_fiber(self.canonical, key)
        return self._cache[key]

    def boundary_value(self, zeta: complex) -> np.ndarray:
        """Radial limit of the lift at ζ ∈ ∂𝔻, approximated at radius 1 - boundary_eps."""
        return lift(self.surface, zeta * (1 - settings.boundary_eps))

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if not np.all(np.isfinite(p)):
            # ∞ is the far end of the model line over 0
            return match_fibers(model_fiber(0j), self.fiber(0j), math.inf)
        x, y, w = p
        z = complex(x, y)
        if w == 0 and abs(z) <= 1:
            if abs(z) == 1:
                return self.boundary_value(z)
            return lift(self.surface, z)
        base = base_of(p)
        model = model_fiber(base)
        return match_fibers(model, self.fiber(base), float(model.parameter_of(p)))


def extend(e: ExtensionMap, p) -> np.ndarray:
    """E(p) for a point of ℝ³; non-finite input stands for ∞.

    Raises
    ------
    BaseLookupError
        p cannot be assigned to a fiber.
    """
    return e(p)


class RadiusBoundReport(BaseModel):
    """Fiber radii against 1/(2 a u) and their decay towards the boundary."""

    applicable: bool
    reason: str | None = None
    critical_point: tuple[float, float] | None = None
    a: float | None = None
    max_ru: float | None = None
    bound: float | None = None
    holds: bool | None = None
    boundary_max_r: float | None = None
    interior_min_r: float | None = None
    trend_ok: bool | None = None


def radius_bound_check(
    c: CanonicalFunction, z: np.ndarray, exclusion: float = 0.1, boundary_n: int = 100
) -> RadiusBoundReport:
    """Estimate a with e^{-ρ}|∇u| ≥ a away from the critical point and check r u ≤ 1/(2a).

    The trend test compares the largest radius over |z| > 0.99 with the
    smallest over |z| < 0.5, using `boundary_n` extra points on |z| = 0.995.
    """
    search = find_critical_point(c)
    if search.status != "unique":
        return RadiusBoundReport(applicable=False, reason=f"critical point search: {search.status}")
    z_star = search.point
    z = np.asarray(z, dtype=complex).ravel()
    ring = 0.995 * np.exp(2j * np.pi * np.arange(boundary_n) / boundary_n)
    z = np.concatenate([z, ring])
    z = z[np.abs(z - z_star) > exclusion]

    _, grad, _ = log_u_derivatives(c, z)
    u = np.asarray(c(z), dtype=float)
    grad_norm = np.hypot(grad[:, 0], grad[:, 1])
    e_rho = np.exp(np.asarray(c.metric.jets(z).rho, dtype=float))
    radius = np.asarray(conformal_factor(c.surface, z, strict=False), dtype=float) / (2 * grad_norm)
    ok = np.isfinite(radius) & np.isfinite(u) & np.isfinite(e_rho)
    a = float(np.min(u[ok] * grad_norm[ok] / e_rho[ok]))
    if a <= 0:
        return RadiusBoundReport(applicable=False, reason="gradient of u vanishes away from the critical point")
    ru = radius[ok] * u[ok]
    bound = 1 / (2 * a)
    r_abs = np.abs(z[ok])
    outer, inner = radius[ok][r_abs > 0.99], radius[ok][r_abs < 0.5]
    boundary_max = float(np.max(outer)) if outer.size else None
    interior_min = float(np.min(inner)) if inner.size else None
    trend = None if boundary_max is None or interior_min is None else boundary_max < interior_min
    return RadiusBoundReport(
        applicable=True,
        critical_point=(z_star.real, z_star.imag),
        a=a,
        max_ru=float(np.max(ru)),
        bound=bound,
        holds=bool(np.max(ru) <= bound * (1 + 1e-3)),
        boundary_max_r=boundary_max,
        interior_min_r=interior_min,
        trend_ok=trend,
    )


class BundleReport(BaseModel):
    """Sampled checks of the fiber bundle axioms.

    orthogonality: largest |tangent at base · surface normal| defect.
    surface_gap: smallest distance from fiber points (away from the base) to Σ.
    pair_gap: smallest distance between sampled points of two different fibers.
    coverage: fraction of random points located on exactly one fiber.
    """

    n_fibers: int
    orthogonality_defect: float
    surface_gap: float
    pair_gap: float
    coverage: float
    holds: bool


def bundle_probe(
    e: ExtensionMap,
    n_fibers: int = 64,
    n_points: int = 1000,
    n_samples: int = 256,
    seed: int | None = None,
) -> BundleReport:
    """Check the bundle axioms on random fibers of the surface bundle.

    Coverage is tested through the extension: a random point p is located on
    the fiber over its model base and must lie on that fiber.
    """
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    z = 0.95 * np.sqrt(rng.random(n_fibers)) * np.exp(2j * np.pi * rng.random(n_fibers))
    fibers = [e.fiber(zk) for zk in z]

    surface = lift(e.surface, 0.999 * np.sqrt(rng.random(4000)) * np.exp(2j * np.pi * rng.random(4000)), strict=False)
    surface = surface[np.all(np.isfinite(surface), axis=-1)]
    tree = cKDTree(surface)
    defect, gap = 0.0, math.inf
    samples = []
    for fiber in fibers:
        h = 1e-6
        tangent = (fiber.point(h) - fiber.point(-h)) / (2 * h)
        defect = max(defect, float(1 - abs(tangent @ fiber.normal) / np.linalg.norm(tangent)))
        if fiber.is_line:
            half = np.linspace(0.2, 10, n_samples // 2)
            points = fiber.point(np.concatenate([-half, half]))
        else:
            points = fiber.point(np.linspace(0.2, 2 * np.pi - 0.2, n_samples))
        gap = min(gap, float(np.min(tree.query(points)[0])))
        samples.append(fiber.sample(n_samples))

    pair_gap = math.inf
    for i in range(len(samples)):
        other = cKDTree(np.concatenate(samples[i + 1 :])) if i + 1 < len(samples) else None
        if other is not None:
            pair_gap = min(pair_gap, float(np.min(other.query(samples[i])[0])))

    located = 0
    points = 3 * (2 * rng.random((n_points, 3)) - 1)
    for p in points:
        try:
            image = e(p)
            base = base_of(p)
        except EmbedliftError:
            continue
        if np.all(np.isfinite(image)) and e.fiber(base).distance(image) < 1e-8 * max(1.0, np.linalg.norm(image)):
            located += 1
    coverage = located / n_points
    report = BundleReport(
        n_fibers=n_fibers,
        orthogonality_defect=defect,
        surface_gap=gap,
        pair_gap=pair_gap,
        coverage=coverage,
        holds=defect < 1e-6 and gap > 0 and pair_gap > 0 and coverage == 1.0,
    )
    logger.info(f"bundle probe {e.surface.label}: pair gap {pair_gap:.3g}, coverage {coverage:.3f}")
    return report


class NaturalityReport(BaseModel):
    """Distances between fibers of M∘f̃ and images under M of fibers of f̃."""

    distances: list[float]
    max_distance: float
    holds: bool


def naturality_check(
    c: CanonicalFunction, shift: MobiusShift, z: np.ndarray, n_samples: int = 256, tol: float = 1e-6
) -> NaturalityReport:
    """Compare the fiber of the shifted lift with the shifted fiber at each point of `z`.

    Every sampled point of M(C) must lie on the fiber of M∘f̃; since both are
    circles, three points on it already force them to coincide. Points where
    either fiber is a line are skipped.
    """
    distances = []
    for zk in np.asarray(z, dtype=complex).ravel():
        fiber = surface_fiber(c, zk)
        shifted = surface_fiber(c, zk, shift)
        if fiber.is_line or shifted.is_line:
            continue
        image = shift.apply(fiber.sample(n_samples))
        image = image[np.all(np.isfinite(image), axis=-1)]
        distances.append(float(np.max(shifted.distance(image)) / max(1.0, shifted.radius)))
    worst = max(distances, default=0.0)
    return NaturalityReport(distances=distances, max_distance=worst, holds=worst <= tol)


class ContinuityReport(BaseModel):
    """Spherical oscillation of E around a boundary point for shrinking neighbourhoods."""

    zeta: tuple[float, float]
    eps: list[float]
    oscillation: list[float]
    decreasing: bool


def extension_continuity(e: ExtensionMap, zeta: complex, eps=(1e-1, 1e-2, 1e-3)) -> ContinuityReport:
    """Chordal diameter of E({(1 - ε)ζ, (1 + ε)ζ, ζ + ε e₃}) for shrinking ε."""
    zeta = complex(zeta) / abs(complex(zeta))
    base = np.array([zeta.real, zeta.imag, 0.0])
    oscillation = []
    for eps_k in eps:
        probes = [(1 - eps_k) * base, (1 + eps_k) * base, base + np.array([0.0, 0.0, eps_k])]
        images = []
        for p in probes:
            try:
                images.append(e(p))
            except BaseLookupError as exc:
                logger.warning(f"no fiber through {p}: {exc}")
        values = [float(chordal_distance(a, b)) for i, a in enumerate(images) for b in images[i + 1 :]]
        oscillation.append(max(values, default=math.nan))
    decreasing = all(b <= a + 1e-12 for a, b in zip(oscillation[:-1], oscillation[1:]))
    return ContinuityReport(zeta=(zeta.real, zeta.imag), eps=list(eps), oscillation=oscillation, decreasing=decreasing)
