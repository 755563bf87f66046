"""The criterion restricted to a geodesic and diagnostics of extremal geodesics."""

import math

import numpy as np
from pydantic import BaseModel

from embedlift.criterion.evaluate import evaluate_main
from embedlift.logger import get_logger
from embedlift.metric import ConformalMetric, GeodesicPath, resolve_diameter
from embedlift.schwarzian import SpaceCurve, ahlfors_s1
from embedlift.surface import HarmonicMapData, harmonic_schwarzian, lift, lift_along_path, normal_curvature
from embedlift.surface.harmonic_map import conformal_factor, gauss_curvature

logger = get_logger(__name__)

AGREEMENT_TOL = 1e-5


def s1_along_geodesic(m: HarmonicMapData, path: GeodesicPath) -> tuple[np.ndarray, np.ndarray]:
    """S₁ of ψ(s) = f̃(γ(s)) computed two ways.

    The first assembles S₁ of the curve in Euclidean arclength t of γ,

        Re{𝒮f t̂²} + ½ e^{2σ}(|K| + κ_n²) + ½ κ²,

    and changes parameter with S₁ψ = S₁φ t'² + 𝒮t, where t' = |ż| and
    𝒮t = e^{-2ρ}(-Hess ρ(t̂, t̂) + ½(∇ρ·t̂)² - κ²). The second evaluates S₁
    directly on the derivatives of ψ.
    """
    z, tangent, kappa = path.z, path.tangent, path.curvature
    e2sigma = conformal_factor(m, z) ** 2
    kappa_n = normal_curvature(m, z, np.angle(tangent))
    s1_unit = (
        np.real(harmonic_schwarzian(m, z) * tangent**2)
        + 0.5 * e2sigma * (np.abs(gauss_curvature(m, z)) + kappa_n**2)
        + 0.5 * kappa**2
    )
    jets = path.metric.jets(z)
    schwarzian_t = np.exp(-2 * jets.rho) * (-jets.hessian(tangent) + 0.5 * jets.directional(tangent) ** 2 - kappa**2)
    formula = s1_unit * np.abs(path.zdot) ** 2 + schwarzian_t

    _, d1, d2, d3 = lift_along_path(m, z, path.zdot, path.zddot, path.zdddot, with_position=False)
    direct = ahlfors_s1(SpaceCurve(path.s, np.zeros_like(d1), d1, d2, d3))
    return formula, direct


class GeodesicRestrictionReport(BaseModel):
    """max S₁ψ along a geodesic against 2π²/δ²."""

    length: float
    max_s1: float
    bound: float
    holds: bool
    max_disagreement: float
    methods_agree: bool


def geodesic_restriction_check(
    m: HarmonicMapData,
    metric: ConformalMetric,
    path: GeodesicPath,
    delta: float | None = None,
    tol: float = 1e-6,
) -> GeodesicRestrictionReport:
    """Check S₁ψ ≤ 2π²/δ² along `path` with S₁ψ computed by formula and directly."""
    if delta is None:
        delta, _ = resolve_diameter(metric)
    formula, direct = s1_along_geodesic(m, path)
    bound = 0.0 if math.isinf(delta) else 2 * math.pi**2 / delta**2
    disagreement = float(np.max(np.abs(formula - direct)))
    if disagreement > AGREEMENT_TOL:
        logger.warning(f"S₁ along geodesic: formula and direct computation differ by {disagreement:.3g}")
    max_s1 = float(np.max(direct))
    return GeodesicRestrictionReport(
        length=path.length,
        max_s1=max_s1,
        bound=bound,
        holds=max_s1 <= bound + tol,
        max_disagreement=disagreement,
        methods_agree=disagreement <= AGREEMENT_TOL,
    )


def fit_circle(points: np.ndarray) -> tuple[np.ndarray, float, np.ndarray, float]:
    """Least-squares circle through 3D points.

    The plane comes from the SVD of the centred points, the circle in that
    plane from the algebraic fit |p|² = 2 c·p + k.

    Returns
    -------
    tuple
        (center, radius, plane normal, RMS distance of the points to the circle)
    """
    mean = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - mean)
    e1, e2, normal = vt
    uv = np.stack([(points - mean) @ e1, (points - mean) @ e2], axis=-1)
    a = np.column_stack([2 * uv, np.ones(len(uv))])
    b = np.sum(uv**2, axis=1)
    (cx, cy, k), *_ = np.linalg.lstsq(a, b, rcond=None)
    radius = math.sqrt(k + cx**2 + cy**2)
    center = mean + cx * e1 + cy * e2
    in_plane = np.hypot(uv[:, 0] - cx, uv[:, 1] - cy) - radius
    off_plane = (points - mean) @ normal
    rms = float(np.sqrt(np.mean(in_plane**2 + off_plane**2)))
    return center, radius, normal, rms


class ExtremalReport(BaseModel):
    """Equality diagnostics of a candidate extremal geodesic."""

    max_equality_residual: float
    max_curvature_residual: float
    circle_rms: float
    circle_radius: float
    length: float
    delta: float | None
    length_ratio: float | None
    extremal: bool


def extremal_diagnostics(
    m: HarmonicMapData,
    metric: ConformalMetric,
    path: GeodesicPath,
    delta: float | None = None,
    tol: float = 1e-6,
) -> ExtremalReport:
    """Residuals that vanish along an extremal geodesic.

    Reports the largest |margin| of the general criterion on the path, the
    largest |κ_n² - |K|| in the direction of the path, the RMS of a circle fit
    through the image curve and the path length against δ.
    """
    if delta is None:
        delta, _ = resolve_diameter(metric)
    report = evaluate_main(m, metric, path.z, delta=delta, tol_eq=tol)
    margins = np.asarray(report.margin)
    equality = float(np.max(np.abs(margins))) if margins.size else math.inf
    kappa_n = normal_curvature(m, path.z, np.angle(path.tangent))
    curvature_residual = float(np.max(np.abs(kappa_n**2 - np.abs(gauss_curvature(m, path.z)))))
    _, radius, _, rms = fit_circle(lift(m, path.z))
    finite = not math.isinf(delta)
    extremal = equality <= tol and curvature_residual <= tol and rms <= tol
    return ExtremalReport(
        max_equality_residual=equality,
        max_curvature_residual=curvature_residual,
        circle_rms=rms,
        circle_radius=radius,
        length=path.length,
        delta=delta if finite else None,
        length_ratio=path.length / delta if finite else None,
        extremal=extremal,
    )
