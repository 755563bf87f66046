"""Boundary values of a lift along geodesic rays and detection of identified boundary points."""

import math
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from embedlift.errors import EmbedliftError
from embedlift.logger import get_logger
from embedlift.metric import ConformalMetric, geodesic_ivp
from embedlift.schwarzian import chordal_distance
from embedlift.settings import settings
from embedlift.surface import HarmonicMapData, conformal_factor, lift

logger = get_logger(__name__)

COMPLETE_S_MAX = 50.0
TAIL_FRACTION = 0.1


class RaySample(BaseModel):
    """End of one geodesic ray and the convergence of the image length along it."""

    theta: float
    point: tuple[float, float, float] | None
    at_infinity: bool
    reached_boundary: bool
    length: float | None
    image_length: float | None
    tail_length: float | None
    error: str | None = None


class BoundaryTrace(BaseModel):
    """Boundary values f̃(ζ_θ) reached along geodesic rays from `z0`."""

    z0: tuple[float, float]
    s_max: float | None
    rays: list[RaySample]
    oscillation: float

    @property
    def thetas(self) -> np.ndarray:
        return np.array([r.theta for r in self.rays])

    def points(self) -> np.ndarray:
        """Boundary values, inf for points at infinity and nan for failed rays."""
        return np.array(
            [
                (np.full(3, np.inf) if r.at_infinity else np.full(3, np.nan)) if r.point is None else r.point
                for r in self.rays
            ],
            dtype=float,
        )

    def to_frame(self) -> pd.DataFrame:
        p = self.points()
        return pd.DataFrame(
            {
                "theta": self.thetas,
                "X": p[:, 0],
                "Y": p[:, 1],
                "Z": p[:, 2],
                "at_infinity": [r.at_infinity for r in self.rays],
            }
        )

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


def _ray(m: HarmonicMapData, metric: ConformalMetric, z0: complex, theta: float, s_max: float) -> RaySample:
    threshold = settings.infinity_threshold
    try:
        path = geodesic_ivp(metric, z0, theta, s_max)
    except EmbedliftError as exc:
        logger.warning(f"ray {theta:.4f} failed: {exc}")
        return RaySample(
            theta=theta,
            point=None,
            at_infinity=False,
            reached_boundary=False,
            length=None,
            image_length=None,
            tail_length=None,
            error=str(exc),
        )
    points = lift(m, path.z, strict=False)
    speed = np.asarray(conformal_factor(m, path.z, strict=False), dtype=float) * np.abs(path.zdot)
    cumulative = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(path.s))])
    tail_start = int(len(path.s) * (1 - TAIL_FRACTION))
    end = points[-1]
    at_infinity = not np.all(np.isfinite(end)) or float(np.linalg.norm(end)) > threshold
    return RaySample(
        theta=theta,
        point=None if at_infinity else tuple(float(v) for v in end),
        at_infinity=at_infinity,
        reached_boundary=path.termination == "boundary",
        length=path.length,
        image_length=float(cumulative[-1]),
        tail_length=float(cumulative[-1] - cumulative[tail_start]),
    )


def boundary_trace(
    m: HarmonicMapData,
    metric: ConformalMetric,
    z0: complex = 0j,
    n_dirs: int = 64,
    s_max: float | None = None,
) -> BoundaryTrace:
    """Follow `n_dirs` geodesic rays from `z0` and record the lift at their ends.

    Rays stop at the boundary offset or at `s_max` (for metrics on the whole
    plane, the radius of the geodesic ball to trace). The image length
    ∫|df̃| and its part over the last tenth of the ray are recorded per ray.
    The oscillation is the largest chordal distance between the boundary
    values of neighbouring directions.

    Raises
    ------
    ValueError
        A metric on the plane without `s_max`.
    """
    if s_max is None:
        if metric.domain_radius is None:
            raise ValueError(f"{metric.label} lives on the plane, give the ball radius s_max")
        diameter = metric.diameter()
        finite = not metric.complete and diameter is not None and math.isfinite(diameter)
        s_max = 2 * diameter if finite else COMPLETE_S_MAX
    thetas = 2 * np.pi * np.arange(n_dirs) / n_dirs
    rays = [_ray(m, metric, complex(z0), float(theta), s_max) for theta in thetas]
    trace = BoundaryTrace(z0=(complex(z0).real, complex(z0).imag), s_max=s_max, rays=rays, oscillation=0.0)
    p = trace.points()
    failed_mask = np.array([r.error is not None for r in rays])
    steps = chordal_distance(p, np.roll(p, -1, axis=0))
    steps[failed_mask | np.roll(failed_mask, -1)] = np.nan
    trace.oscillation = float(np.nanmax(steps)) if np.isfinite(steps).any() else math.nan
    failed = int(failed_mask.sum())
    logger.info(f"{m.label}: traced {n_dirs} rays, {failed} failed, oscillation {trace.oscillation:.3g}")
    return trace


class Identification(BaseModel):
    """Two ray directions whose boundary values coincide."""

    theta1: float
    theta2: float
    distance: float


def detect_extremal_identifications(
    trace: BoundaryTrace, tol_id: float = 1e-5, separation: int = 4
) -> list[Identification]:
    """Pairs of directions at least `separation` steps apart with chordal distance below `tol_id`."""
    p = trace.points()
    thetas = trace.thetas
    n = len(thetas)
    d = chordal_distance(p[:, None, :], p[None, :, :])
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            steps = min(j - i, n - (j - i))
            if trace.rays[i].error or trace.rays[j].error:
                continue
            if steps >= separation and d[i, j] < tol_id:
                found.append(Identification(theta1=float(thetas[i]), theta2=float(thetas[j]), distance=float(d[i, j])))
    if found:
        logger.info(f"{len(found)} identified boundary pairs")
    return found
