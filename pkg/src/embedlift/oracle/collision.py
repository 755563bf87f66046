"""Sampled injectivity checks of lifts and space curves.

A scan is a falsifier: a witness pair is a genuine collision up to the
reported gap, while the absence of a witness only holds at the resolution
of the sample.
"""

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel
from scipy.optimize import least_squares
from scipy.spatial import cKDTree

from embedlift.grid import Grid
from embedlift.logger import get_logger
from embedlift.schwarzian import SpaceCurve, to_sphere
from embedlift.settings import settings
from embedlift.surface import HarmonicMapData, lift

logger = get_logger(__name__)

N_NEIGHBOURS = 32

GapMetric = Literal["euclidean", "chordal"]


class CollisionWitness(BaseModel):
    """Two decorrelated parameters with (nearly) equal images."""

    z1: tuple[float, float]
    z2: tuple[float, float]
    p1: tuple[float, float, float]
    p2: tuple[float, float, float]
    gap: float


class CollisionReport(BaseModel):
    """Smallest image distance over parameter pairs further apart than the decorrelation radius."""

    n_points: int
    n_skipped: int
    spacing: float
    decorrelation_radius: float
    gap_metric: GapMetric
    min_gap: float
    witness: CollisionWitness | None
    collision: bool
    refined: bool


def _coordinates(points: np.ndarray, threshold: float) -> tuple[np.ndarray, GapMetric]:
    """Euclidean coordinates, or points of S³ when some point is beyond `threshold`."""
    far = ~np.all(np.isfinite(points), axis=-1) | (np.linalg.norm(points, axis=-1) > threshold)
    if far.any():
        return to_sphere(points, threshold), "chordal"
    return points, "euclidean"


def _closest_decorrelated_pair(coords: np.ndarray, params: np.ndarray, radius: float, k: int):
    """Indices and distance of the closest pair with |param_i - param_j| > radius among k-nearest neighbours.

    None when no neighbour list holds a decorrelated point.
    """
    tree = cKDTree(coords)
    k = min(k + 1, len(coords))
    distances, neighbours = tree.query(coords, k=list(range(1, k + 1)))
    apart = np.abs(params[:, None] - params[neighbours]) > radius
    distances = np.where(apart, distances, np.inf)
    flat = int(np.argmin(distances))
    i, j = divmod(flat, k)
    if math.isinf(distances[i, j]):
        return None
    return i, int(neighbours[i, j]), float(distances[i, j])


def _gap(p1: np.ndarray, p2: np.ndarray, gap_metric: GapMetric, threshold: float) -> float:
    if gap_metric == "chordal":
        return float(np.linalg.norm(to_sphere(p1, threshold) - to_sphere(p2, threshold)))
    return float(np.linalg.norm(p1 - p2))


def _refine(m: HarmonicMapData, z1: complex, z2: complex, limit: float | None):
    """Least-squares refinement of a candidate pair; None when it leaves the domain."""

    def residual(v):
        p = lift(m, np.array([complex(v[0], v[1]), complex(v[2], v[3])]))
        return p[0] - p[1]

    bounds = (-np.inf, np.inf) if limit is None else (-limit, limit)
    try:
        result = least_squares(
            residual, [z1.real, z1.imag, z2.real, z2.imag], bounds=bounds, xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
    except ValueError as exc:
        logger.debug(f"collision refinement failed: {exc}")
        return None
    w1, w2 = complex(*result.x[:2]), complex(*result.x[2:])
    if limit is not None and max(abs(w1), abs(w2)) >= limit:
        return None
    return w1, w2


def surface_collision_scan(
    m: HarmonicMapData,
    grid: Grid,
    decorrelation_radius: float | None = None,
    gap: float | None = None,
    refine: bool = True,
    domain_radius: float | None = 1.0,
    k: int = N_NEIGHBOURS,
) -> CollisionReport:
    """Look for two grid points, further apart than `decorrelation_radius`, with equal lifts.

    The closest decorrelated pair among the k nearest image neighbours is
    refined by least squares on (z1, z2); the refined pair replaces it when it
    stays in the domain and decorrelated.

    Parameters
    ----------
    m : HarmonicMapData
    grid : Grid
    decorrelation_radius : float, optional
        By default settings.decorrelation_factor times the grid spacing.
    gap : float, optional
        Collision threshold, by default settings.collision_gap.
    refine : bool, optional
        Refine the closest pair with least squares.
    domain_radius : float | None, optional
        Radius of the parameter disk, None for the plane.
    k : int, optional
        Number of image neighbours examined per point.

    Returns
    -------
    CollisionReport
    """
    spacing = grid.spacing
    radius = settings.decorrelation_factor * spacing if decorrelation_radius is None else decorrelation_radius
    gap = settings.collision_gap if gap is None else gap
    threshold = settings.infinity_threshold

    z = grid.unique_points()
    points = lift(m, z, strict=False)
    valid = np.all(~np.isnan(points), axis=-1)
    z, points = z[valid], points[valid]
    coords, gap_metric = _coordinates(points, threshold)
    pair = _closest_decorrelated_pair(coords, z, radius, k)
    if pair is None:
        logger.info(f"{m.label}: no decorrelated neighbours at spacing {spacing:.3g}")
        return CollisionReport(
            n_points=int(valid.sum()),
            n_skipped=int((~valid).sum()),
            spacing=spacing,
            decorrelation_radius=radius,
            gap_metric=gap_metric,
            min_gap=math.inf,
            witness=None,
            collision=False,
            refined=False,
        )
    i, j, _ = pair
    z1, z2 = complex(z[i]), complex(z[j])

    refined = False
    if refine:
        limit = None if domain_radius is None else domain_radius * (1 - settings.boundary_eps)
        candidate = _refine(m, z1, z2, limit)
        if candidate is not None and abs(candidate[0] - candidate[1]) > radius:
            p = lift(m, np.array(candidate))
            if _gap(p[0], p[1], gap_metric, threshold) < _gap(points[i], points[j], gap_metric, threshold):
                z1, z2 = candidate
                refined = True

    p1, p2 = lift(m, np.array([z1, z2]))
    min_gap = _gap(p1, p2, gap_metric, threshold)
    collision = min_gap < gap
    witness = CollisionWitness(
        z1=(z1.real, z1.imag),
        z2=(z2.real, z2.imag),
        p1=tuple(float(v) for v in p1),
        p2=tuple(float(v) for v in p2),
        gap=min_gap,
    )
    report = CollisionReport(
        n_points=int(valid.sum()),
        n_skipped=int((~valid).sum()),
        spacing=spacing,
        decorrelation_radius=radius,
        gap_metric=gap_metric,
        min_gap=min_gap,
        witness=witness if collision else None,
        collision=collision,
        refined=refined,
    )
    if collision:
        logger.warning(f"{m.label}: collision between z={z1:.6g} and z={z2:.6g}, gap {min_gap:.3g}")
    else:
        logger.info(f"{m.label}: no collision at spacing {spacing:.3g}, min gap {min_gap:.3g}")
    return report


class CurveInjectivityReport(BaseModel):
    """Closest pair of decorrelated curve samples."""

    injective: bool
    decorrelation: float
    gap_metric: GapMetric
    min_gap: float
    witness: tuple[float, float] | None


def curve_injectivity(
    c: SpaceCurve, decorrelation: float | None = None, gap: float | None = None, k: int = N_NEIGHBOURS
) -> CurveInjectivityReport:
    """Scan the samples of a curve for two decorrelated parameters with the same image.

    Samples at infinity (non-finite or beyond settings.infinity_threshold)
    coincide at the north pole of S³, so a curve sending both ends to ∞ is
    reported with the end parameters as witness.
    """
    x = np.asarray(c.x, dtype=float)
    spacing = float(np.max(np.diff(np.sort(x))))
    decorrelation = settings.decorrelation_factor * spacing if decorrelation is None else decorrelation
    gap = settings.collision_gap if gap is None else gap
    coords, gap_metric = _coordinates(np.asarray(c.phi, dtype=float), settings.infinity_threshold)
    pair = _closest_decorrelated_pair(coords, x, decorrelation, k)
    if pair is None:
        return CurveInjectivityReport(
            injective=True, decorrelation=decorrelation, gap_metric=gap_metric, min_gap=math.inf, witness=None
        )
    i, j, distance = pair
    injective = not distance < gap
    if not injective:
        logger.info(f"curve samples at x={x[i]:.6g} and x={x[j]:.6g} coincide (gap {distance:.3g})")
    return CurveInjectivityReport(
        injective=injective,
        decorrelation=decorrelation,
        gap_metric=gap_metric,
        min_gap=distance,
        witness=None if injective else tuple(sorted((float(x[i]), float(x[j])))),
    )
