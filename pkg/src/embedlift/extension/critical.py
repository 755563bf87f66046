"""Critical points of the canonical function and the unique critical point probe."""

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel
from scipy.spatial import cKDTree

from embedlift.errors import EmbedliftError, UCPError
from embedlift.extension.canonical import CanonicalFunction, log_u_derivatives
from embedlift.logger import get_logger
from embedlift.schwarzian import Inversion, MobiusShift
from embedlift.settings import settings
from embedlift.surface import lift

logger = get_logger(__name__)

ARMIJO = 1e-4
DESCENT_TOL = 1e-6
MERGE_DISTANCE = 1e-6
PLANE_SEARCH_RADIUS = 3.0


class CriticalPointResult(BaseModel):
    """Outcome of the multi-start search for critical points of log u.

    `status` is "unique" for one interior critical point, "none" when every
    start drifts to the boundary with decreasing u, and "multiple" otherwise.
    """

    status: Literal["unique", "none", "multiple"]
    critical_points: list[tuple[float, float]]
    values: list[float]
    gradient_norms: list[float]
    n_starts: int
    n_converged: int
    n_boundary: int
    boundary_decrease: bool

    @property
    def point(self) -> complex | None:
        if self.status != "unique":
            return None
        x, y = self.critical_points[0]
        return complex(x, y)


def _starts(radius: float, n_starts: int, rng: np.random.Generator) -> np.ndarray:
    ring = 0.5 * radius * np.exp(2j * np.pi * np.arange(n_starts - 1) / max(n_starts - 1, 1))
    jitter = 0.1 * radius * (rng.random(ring.shape) - 0.5)
    return np.concatenate([[0j], ring + jitter])


def _clamp(z: np.ndarray, limit: float) -> np.ndarray:
    r = np.abs(z)
    return np.where(r > limit, z * (limit / np.maximum(r, 1e-300)), z)


def _as_complex(v: np.ndarray) -> np.ndarray:
    return v[..., 0] + 1j * v[..., 1]


def _descend(c: CanonicalFunction, z: np.ndarray, shift, limit: float, max_iter: int):
    """Metric-gradient descent on log u with Armijo backtracking, vectorised over starts."""
    value, grad, _ = log_u_derivatives(c, z, shift)
    active = np.isfinite(value)
    for _ in range(max_iter):
        g = _as_complex(grad)
        active &= np.abs(g) > DESCENT_TOL
        if not active.any():
            break
        weight = np.exp(-2 * np.asarray(c.metric.jets(z).rho, dtype=float))
        step = np.where(active, weight * g, 0)
        t = np.ones(z.shape)
        accepted = ~active
        trial_z, trial_value, trial_grad = z, value, grad
        for _ in range(40):
            candidate = _clamp(z - t * step, limit)
            cv, cg, _ = log_u_derivatives(c, candidate, shift)
            ok = np.isfinite(cv) & (cv <= value - ARMIJO * t * np.real(np.conj(step) * g))
            take = ok & ~accepted
            trial_z = np.where(take, candidate, trial_z)
            trial_value = np.where(take, cv, trial_value)
            trial_grad = np.where(take[..., None], cg, trial_grad)
            accepted |= ok
            if accepted.all():
                break
            t = np.where(accepted, t, 0.5 * t)
        stalled = active & ~accepted
        z, value, grad = trial_z, trial_value, trial_grad
        active &= ~stalled
    return z, value, grad


def _newton(c: CanonicalFunction, z: complex, shift, tol: float, max_iter: int = 30) -> tuple[complex, float, float]:
    value, grad, hess = log_u_derivatives(c, np.array([z]), shift)
    for _ in range(max_iter):
        g = grad[0]
        if np.hypot(*g) < tol:
            break
        try:
            dx = np.linalg.solve(hess[0], g)
        except np.linalg.LinAlgError:
            break
        candidate = np.array([z - complex(dx[0], dx[1])])
        cv, cg, ch = log_u_derivatives(c, candidate, shift)
        if not np.isfinite(cv[0]) or np.hypot(*cg[0]) >= np.hypot(*g):
            break
        z, value, grad, hess = complex(candidate[0]), cv, cg, ch
    return z, float(value[0]), float(np.hypot(*grad[0]))


def find_critical_point(
    c: CanonicalFunction,
    shift: MobiusShift | None = None,
    n_starts: int | None = None,
    max_iter: int = 500,
    tol: float | None = None,
    seed: int | None = None,
) -> CriticalPointResult:
    """Search the domain for critical points of the (shifted) canonical function.

    Descent runs on log u, whose critical points are those of u. Converged
    starts are polished by Newton steps with the analytic Hessian and merged
    when closer than 1e-6.
    """
    n_starts = settings.n_starts if n_starts is None else n_starts
    tol = settings.critical_tol if tol is None else tol
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    domain = c.metric.domain_radius
    radius = PLANE_SEARCH_RADIUS if domain is None else domain
    limit = 10 * radius if domain is None else domain * (1 - settings.boundary_eps)
    z, value, grad = _descend(c, _starts(radius, n_starts, rng), shift, limit, max_iter)

    at_boundary = np.abs(z) >= limit * (1 - 1e-9)
    points: list[complex] = []
    values: list[float] = []
    norms: list[float] = []
    for zk, vk, gk in zip(z, value, grad):
        if abs(zk) >= limit * (1 - 1e-9) or not np.isfinite(vk) or np.hypot(*gk) > math.sqrt(DESCENT_TOL):
            continue
        zk, vk, norm = _newton(c, complex(zk), shift, tol)
        if any(abs(zk - p) < MERGE_DISTANCE for p in points):
            continue
        points.append(zk)
        values.append(vk)
        norms.append(norm)
    n_boundary = int(at_boundary.sum())
    if len(points) == 1:
        status = "unique"
    elif not points:
        status = "none"
    else:
        status = "multiple"
    boundary_decrease = bool(n_boundary and np.all(value[at_boundary] <= np.min(value[~at_boundary], initial=np.inf)))
    result = CriticalPointResult(
        status=status,
        critical_points=[(p.real, p.imag) for p in points],
        values=values,
        gradient_norms=norms,
        n_starts=len(z),
        n_converged=len(z) - n_boundary,
        n_boundary=n_boundary,
        boundary_decrease=boundary_decrease,
    )
    logger.debug(f"critical point search ({c.surface.label}, shift={shift}): {status}")
    return result


class UcpReport(BaseModel):
    """Number of critical points found for random inversions of the lift."""

    n_shifts: int
    n_unique: int
    n_none: int
    n_multiple: int
    n_failed: int
    violations: list[tuple[float, float, float]]

    @property
    def holds(self) -> bool:
        return self.n_multiple == 0


def _sample_centers(c: CanonicalFunction, n: int, rng: np.random.Generator, clearance: float) -> np.ndarray:
    domain = c.metric.domain_radius or PLANE_SEARCH_RADIUS
    r = domain * np.sqrt(rng.random(400)) * (1 - 0.05)
    surface = lift(c.surface, r * np.exp(2j * np.pi * rng.random(400)), strict=False)
    surface = surface[np.all(np.isfinite(surface), axis=-1)]
    tree = cKDTree(surface)
    scale = 2 * float(np.max(np.linalg.norm(surface, axis=-1))) + 1
    centers = []
    while len(centers) < n:
        p = scale * (2 * rng.random(3) - 1)
        if tree.query(p)[0] > clearance:
            centers.append(p)
    return np.array(centers)


def ucp_probe(
    c: CanonicalFunction,
    n_shifts: int | None = None,
    n_starts: int = 8,
    clearance: float = 0.05,
    seed: int | None = None,
) -> UcpReport:
    """Random inversions M_q with q away from the surface; none may produce two critical points.

    A probe, not a proof: the absence of violations on the sampled shifts is
    all that is reported. `require_ucp` turns a violation into a UCPError.
    """
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    centers = _sample_centers(c, settings.ucp_shifts if n_shifts is None else n_shifts, rng, clearance)
    counts = {"unique": 0, "none": 0, "multiple": 0}
    failed = 0
    violations = []
    for q in centers:
        shift = Inversion(center=tuple(float(v) for v in q))
        try:
            result = find_critical_point(c, shift, n_starts=n_starts, seed=int(rng.integers(2**31)))
        except EmbedliftError as exc:
            logger.warning(f"critical point search failed for inversion at {q}: {exc}")
            failed += 1
            continue
        counts[result.status] += 1
        if result.status == "multiple":
            violations.append(tuple(float(v) for v in q))
    report = UcpReport(
        n_shifts=len(centers),
        n_unique=counts["unique"],
        n_none=counts["none"],
        n_multiple=counts["multiple"],
        n_failed=failed,
        violations=violations,
    )
    logger.info(
        f"UCP probe {c.surface.label}: {report.n_unique} unique, {report.n_none} none, {report.n_multiple} multiple"
    )
    return report


def require_ucp(report: UcpReport) -> None:
    """Raise UCPError when the probe found a shift with several critical points."""
    if not report.holds:
        raise UCPError(f"{report.n_multiple} of {report.n_shifts} shifts have several critical points")
