"""Diameter of conformal metrics on the disk."""

import itertools
import math

import numpy as np
from pydantic import BaseModel
from scipy.integrate import quad

from embedlift.errors import GeodesicError
from embedlift.logger import get_logger
from embedlift.metric.conformal import ConformalMetric, diameter_power
from embedlift.metric.geodesic import distance

logger = get_logger(__name__)


def diameter_power_quad(t: float) -> float:
    """2 ∫₀¹ (1 - x²)^(-t) dx by quadrature with an algebraic endpoint weight."""
    if t >= 1:
        return math.inf
    value, _ = quad(lambda x: (1 + x) ** (-t), 0.0, 1.0, weight="alg", wvar=(0.0, -t), epsabs=1e-13, epsrel=1e-13)
    return 2 * value


class DiameterEstimate(BaseModel):
    """Largest pairwise geodesic distance on a circle of radius `radius`.

    Always a lower bound of the diameter.
    """

    value: float
    radius: float
    n_samples: int
    n_pairs: int
    n_failed: int
    lower_bound: bool = True


def diameter_estimate(metric: ConformalMetric, n_samples: int = 8, radius: float = 0.999) -> DiameterEstimate:
    """Lower bound of the diameter from pairwise distances between `n_samples` points on |z| = radius (relative to the domain radius).

    Failed boundary value problems are skipped and counted.
    """
    if not 0 < radius < 1:
        raise ValueError(f"radius should be in (0, 1), got {radius}")
    if metric.domain_radius is None:
        raise ValueError(f"{metric.label} lives on the plane; supply its diameter")
    points = radius * metric.domain_radius * np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
    best, failed, pairs = 0.0, 0, 0
    for z1, z2 in itertools.combinations(points, 2):
        pairs += 1
        try:
            best = max(best, distance(metric, z1, z2))
        except GeodesicError as exc:
            failed += 1
            logger.debug(f"skipped pair ({z1:.4f}, {z2:.4f}): {exc}")
    if failed:
        logger.warning(f"{metric.label}: {failed}/{pairs} geodesic problems failed in diameter estimate")
    return DiameterEstimate(value=best, radius=radius, n_samples=n_samples, n_pairs=pairs, n_failed=failed)


def resolve_diameter(metric: ConformalMetric, n_samples: int = 8, radius: float = 0.999) -> tuple[float, str]:
    """Diameter to use in a criterion and its origin: "supplied", "closed-form", "complete" or "estimated"."""
    if metric.delta is not None:
        return metric.delta, "supplied"
    known = metric.diameter()
    if known is not None:
        return known, "complete" if math.isinf(known) else "closed-form"
    estimate = diameter_estimate(metric, n_samples=n_samples, radius=radius)
    logger.info(f"{metric.label}: diameter estimated as {estimate.value:.6g} (lower bound, radius {radius})")
    return estimate.value, "estimated"


__all__ = ["DiameterEstimate", "diameter_estimate", "diameter_power", "diameter_power_quad", "resolve_diameter"]
