"""Numerical probes of boundary behaviour of geodesics."""

import math

import numpy as np
from pydantic import BaseModel

from embedlift.errors import GeodesicError
from embedlift.logger import get_logger
from embedlift.metric.conformal import ConformalMetric
from embedlift.metric.geodesic import GeodesicPath, distance, geodesic_ivp

logger = get_logger(__name__)

FD_STEP = 0.02


class UlpReport(BaseModel):
    """Limit points of the maximal geodesics leaving `z0`.

    `lengths` are None for complete metrics (every length is infinite).
    """

    z0: tuple[float, float]
    thetas: list[float]
    limit_points: list[tuple[float, float] | None]
    all_reach_boundary: bool
    winding_number: int
    max_gap: float
    full_coverage: bool
    continuity_modulus: float
    lengths: list[float] | None
    length_jump: float | None
    complete: bool


def ulp_probe(metric: ConformalMetric, z0: complex, n_dirs: int = 64, s_max: float = 100.0) -> UlpReport:
    """Trace `n_dirs` maximal geodesics from `z0` and summarise their limit points.

    Coverage is measured by the winding number of θ ↦ ζ_θ and by the largest
    angular gap between consecutive limit points. The continuity modulus is
    the largest jump |ζ_{k+1} - ζ_k| divided by the angular step.
    """
    if metric.domain_radius is None:
        raise ValueError(f"{metric.label} has no boundary to probe")
    z0 = complex(z0)
    thetas = 2 * np.pi * np.arange(n_dirs) / n_dirs
    limits: list[complex | None] = []
    lengths = []
    for theta in thetas:
        try:
            path = geodesic_ivp(metric, z0, float(theta), s_max, n_samples=2)
        except GeodesicError as exc:
            logger.warning(f"geodesic in direction {theta:.4f} failed: {exc}")
            limits.append(None)
            lengths.append(math.nan)
            continue
        end = path.z[-1]
        limits.append(complex(end / abs(end)) if path.termination == "boundary" else None)
        lengths.append(path.length)

    reached = [zeta for zeta in limits if zeta is not None]
    all_reach = len(reached) == n_dirs
    if all_reach:
        closed = np.array(reached + reached[:1])
        increments = np.angle(closed[1:] / closed[:-1])
        winding = int(round(increments.sum() / (2 * np.pi)))
        angles = np.sort(np.mod(np.angle(closed[:-1]), 2 * np.pi))
        max_gap = float(np.max(np.diff(np.append(angles, angles[0] + 2 * np.pi))))
        modulus = float(np.max(np.abs(np.diff(closed))) / (2 * np.pi / n_dirs))
    else:
        winding, max_gap, modulus = 0, 2 * np.pi, math.inf

    if metric.complete:
        length_list, jump = None, None
    else:
        closed_lengths = np.append(lengths, lengths[0])
        length_list, jump = [float(v) for v in lengths], float(np.nanmax(np.abs(np.diff(closed_lengths))))

    full = all_reach and winding == 1 and max_gap < 4 * np.pi / n_dirs
    report = UlpReport(
        z0=(z0.real, z0.imag),
        thetas=[float(t) for t in thetas],
        limit_points=[None if zeta is None else (zeta.real, zeta.imag) for zeta in limits],
        all_reach_boundary=all_reach,
        winding_number=winding,
        max_gap=max_gap,
        full_coverage=full,
        continuity_modulus=modulus,
        lengths=length_list,
        length_jump=jump,
        complete=metric.complete,
    )
    logger.info(f"{metric.label}: ULP probe from {z0}, winding {winding}, max gap {max_gap:.3g}")
    return report


def _five_point(values: list[np.ndarray], h: float) -> tuple[np.ndarray, np.ndarray]:
    m2, m1, c, p1, p2 = values
    first = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)
    second = (-m2 + 16 * m1 - 30 * c + 16 * p1 - p2) / (12 * h * h)
    return first, second


def reparametrization_terms(path: GeodesicPath, h: float = FD_STEP):
    """Both sides of e^{2ρ} 𝒮t = -Hess ρ(t̂, t̂) + ½(∇ρ·t̂)² - κ² along a geodesic.

    t(s) is Euclidean arclength as a function of metric arclength, so
    t' = |ż|. 𝒮t is taken from five-point differences of log|ż| sampled on the
    dense output; the right side from the metric jets and the path curvature.

    Returns
    -------
    tuple[np.ndarray, np.ndarray, np.ndarray]
        (s, left side, right side) at samples at least 2h from the ends.
    """
    inner = (path.s >= path.s[0] + 2 * h) & (path.s <= path.s[-1] - 2 * h)
    s = path.s[inner]
    log_speed = [np.log(np.abs(path.at(s + k * h)[1])) for k in (-2, -1, 0, 1, 2)]
    first, second = _five_point(log_speed, h)
    schwarzian_t = second - 0.5 * first**2

    jets = path.metric.jets(path.z[inner])
    tangent = path.tangent[inner]
    kappa = path.curvature[inner]
    left = np.exp(2 * jets.rho) * schwarzian_t
    right = -jets.hessian(tangent) + 0.5 * jets.directional(tangent) ** 2 - kappa**2
    return s, left, right


def reparametrization_residual(path: GeodesicPath, h: float = FD_STEP) -> float:
    """Largest deviation between both sides of the reparametrisation identity."""
    _, left, right = reparametrization_terms(path, h)
    if left.size == 0:
        raise GeodesicError(f"path of length {path.length:.3g} too short for step {h}")
    return float(np.max(np.abs(left - right)))


def curvature_residual(path: GeodesicPath) -> float:
    """max |κ - ∇ρ·n̂| along the path."""
    jets = path.metric.jets(path.z)
    return float(np.max(np.abs(path.curvature - jets.directional(path.normal))))


class BpjReport(BaseModel):
    """Distances between r ζ1 and r ζ2 for radii tending to 1."""

    zeta1: tuple[float, float]
    zeta2: tuple[float, float]
    radii: list[float]
    distances: list[float | None]
    increments: list[float]
    converging: bool


def bpj_probe(
    metric: ConformalMetric, zeta1: complex, zeta2: complex, radii=(0.9, 0.99, 0.999, 0.9999)
) -> BpjReport:
    """Approximate the geodesic joining two boundary points by those joining r ζ1 and r ζ2.

    The distances are expected to converge (shrinking increments) for a
    non-complete metric; nothing is claimed about the limit geodesic.
    """
    zeta1, zeta2 = complex(zeta1), complex(zeta2)
    values: list[float | None] = []
    for r in radii:
        try:
            values.append(distance(metric, r * zeta1, r * zeta2))
        except GeodesicError as exc:
            logger.warning(f"boundary points not joined at radius {r}: {exc}")
            values.append(None)
    known = [v for v in values if v is not None]
    increments = [float(b - a) for a, b in zip(known[:-1], known[1:])]
    converging = len(increments) >= 2 and all(
        abs(b) <= abs(a) + 1e-9 for a, b in zip(increments[:-1], increments[1:])
    )
    return BpjReport(
        zeta1=(zeta1.real, zeta1.imag),
        zeta2=(zeta2.real, zeta2.imag),
        radii=list(radii),
        distances=values,
        increments=increments,
        converging=converging,
    )
