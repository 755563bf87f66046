"""Adaptive composite Gauss-Legendre quadrature of holomorphic integrands."""

from collections.abc import Callable, Sequence

import numpy as np

from embedlift.errors import BranchCutError, IntegrationError, SingularityOnPathError
from embedlift.expr.evaluate import EvaluationTrace, evaluate
from embedlift.expr.parse import HoloExpr
from embedlift.logger import get_logger
from embedlift.settings import settings

logger = get_logger(__name__)

GAUSS_ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)
CHUNK_SIZE = 2048

# pole search along segments
POLE_SAMPLES = 64
POLE_STARTS = 2
GOLDEN = (3 - 5**0.5) / 2
NEWTON_STEPS = 100
POLE_STEP_TOL = 1e-3

Integrand = Callable[[np.ndarray], np.ndarray]


def _panel_rule(panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes in [0, 1] in increasing order and their weights."""
    offsets = np.arange(panels)[:, None]
    t = ((offsets + (_NODES[None, :] + 1) / 2) / panels).ravel()
    w = np.tile(_WEIGHTS / (2 * panels), panels)
    return t, w


def _composite(fn: Integrand, a: np.ndarray, b: np.ndarray, panels: int) -> np.ndarray:
    t, w = _panel_rule(panels)
    z = a[:, None] + t[None, :] * (b - a)[:, None]
    values = np.asarray(fn(z), dtype=complex)
    if values.ndim == 2:
        values = values[None, ...]
    return (values * w).sum(axis=-1) * (b - a)


def _integrate_chunk(fn: Integrand, a: np.ndarray, b: np.ndarray, tol: float, max_panels: int) -> np.ndarray:
    panels = 1
    previous = _composite(fn, a, b, panels)
    result = np.empty_like(previous)
    pending = np.arange(a.size)
    while pending.size:
        panels *= 2
        if panels > max_panels:
            raise IntegrationError(
                f"quadrature did not reach tol={tol:g} with {max_panels} panels "
                f"for {pending.size} path(s), first ending at {complex(b[pending[0]])}"
            )
        current = _composite(fn, a[pending], b[pending], panels)
        error = np.abs(current - previous).max(axis=0)
        floor = 64 * np.finfo(float).eps * np.abs(current).max(axis=0)
        done = error <= np.maximum(tol, floor)
        result[:, pending[done]] = current[:, done]
        previous = current[:, ~done]
        pending = pending[~done]
    return result


def integrate_segments(
    fn: Integrand,
    a,
    b,
    tol: float | None = None,
    max_panels: int | None = None,
) -> np.ndarray:
    """Integrate `fn` along the straight segments a -> b.

    `fn` maps an array of points of shape (n, m) to values of shape (n, m) or
    (k, n, m) for k integrands at once. Panels are doubled per segment until two
    successive composite rules agree to `tol`.

    Parameters
    ----------
    fn : Callable
        Vectorised integrand.
    a, b : complex | np.ndarray
        Segment start and end points (broadcast against each other).
    tol : float, optional
        Absolute tolerance, by default settings.quad_tol.
    max_panels : int, optional
        Panel limit per segment, by default settings.max_panels.

    Returns
    -------
    np.ndarray
        Integrals, shape of the broadcast endpoints, with a leading axis of size
        k for vector integrands.

    Raises
    ------
    IntegrationError
        No convergence within `max_panels`.
    SingularityOnPathError
        `fn` is a `GuardedIntegrand` and a pole lies within its clearance of
        a segment.
    """
    tol = settings.quad_tol if tol is None else tol
    max_panels = settings.max_panels if max_panels is None else max_panels
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    shape = a_arr.shape
    a_flat, b_flat = a_arr.ravel(), b_arr.ravel()
    if isinstance(fn, GuardedIntegrand):
        fn.check_segments(a_flat, b_flat)
    chunks = [
        _integrate_chunk(fn, a_flat[i : i + CHUNK_SIZE], b_flat[i : i + CHUNK_SIZE], tol, max_panels)
        for i in range(0, a_flat.size, CHUNK_SIZE)
    ]
    result = np.concatenate(chunks, axis=1) if chunks else np.zeros((1, 0), dtype=complex)
    return result.reshape((result.shape[0],) + shape)


def _check_branch_crossings(arguments: np.ndarray, z: np.ndarray, text: str) -> None:
    # consecutive nodes along a path on opposite sides of the negative real axis
    w0, w1 = arguments[..., :-1], arguments[..., 1:]
    crossing = (np.sign(w0.imag) * np.sign(w1.imag) < 0) & (w0.real < 0) & (w1.real < 0)
    if np.any(crossing):
        where = complex(z[..., :-1][crossing].ravel()[0])
        raise BranchCutError(f"path crosses a branch cut of '{text}'", where)


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    length2 = np.maximum(np.abs(d) ** 2, np.finfo(float).tiny)
    t = np.clip(np.real((p - a) * np.conj(d)) / length2, 0.0, 1.0)
    return np.abs(p - (a + t * d))


def locate_poles(e: HoloExpr, a: np.ndarray, b: np.ndarray, clearance: float) -> np.ndarray:
    """Poles of `e` within `clearance` of the segments a -> b, nan where there is none.

    |e| is sampled on nodes that are not symmetric about the segment midpoint.
    Newton's method for the zeros of 1/e, w <- w + e/e', starts from the largest
    local maxima of |e|. It lands on a simple pole in one step and converges
    linearly to poles of higher order.
    """
    a, b = np.asarray(a, dtype=complex).ravel(), np.asarray(b, dtype=complex).ravel()
    t = np.concatenate([[0.0], (np.arange(POLE_SAMPLES) + GOLDEN) / POLE_SAMPLES, [1.0]])
    z = a[:, None] + t[None, :] * (b - a)[:, None]
    with np.errstate(all="ignore"):
        magnitude = np.abs(np.asarray(evaluate(e, z).d0))
    found = np.full(a.size, np.nan + 0j)
    hit = ~np.isfinite(magnitude)
    rows = np.flatnonzero(hit.any(axis=1))
    found[rows] = z[rows, hit[rows].argmax(axis=1)]

    padded = np.pad(np.where(hit, -1.0, magnitude), ((0, 0), (1, 1)), constant_values=-1.0)
    peaks = (padded[:, 1:-1] >= padded[:, :-2]) & (padded[:, 1:-1] >= padded[:, 2:])
    ranked = np.argsort(np.where(peaks, padded[:, 1:-1], -1.0), axis=1)[:, ::-1][:, :POLE_STARTS]
    w = np.take_along_axis(z, ranked, axis=1)
    segment = np.broadcast_to(np.arange(a.size)[:, None], w.shape)
    reach = np.abs(b - a)[segment] + 1.0
    active = np.broadcast_to(np.isnan(found)[:, None], w.shape).copy()
    converged = np.zeros(w.shape, dtype=bool)
    for _ in range(NEWTON_STEPS):
        if not active.any():
            break
        with np.errstate(all="ignore"):
            jet = evaluate(e, w[active])
            value, slope = np.asarray(jet.d0), np.asarray(jet.d1)
            step = value / slope
        on_pole = ~np.isfinite(value)
        moved = w[active] + np.where(on_pole, 0, step)
        small = on_pole | (np.abs(step) < POLE_STEP_TOL * clearance)
        lost = ~on_pole & ~np.isfinite(step)
        lost |= _segment_distance(moved, a[segment[active]], b[segment[active]]) > reach[active]
        current = active.copy()
        w[current] = np.where(lost, w[current], moved)
        converged[current] = small & ~lost
        active[current] = ~small & ~lost

    near = converged & (_segment_distance(w, a[segment], b[segment]) < clearance)
    rows = np.flatnonzero(near.any(axis=1) & np.isnan(found))
    found[rows] = w[rows, near[rows].argmax(axis=1)]
    return found


class GuardedIntegrand:
    """Integrand built from expressions that refuses singular or cut-crossing paths.

    Values of `exprs` at the nodes are passed to `combine` (default: the single
    value). Before integration every segment is searched for poles of the
    expressions within `clearance`; at the nodes a value that is not finite or
    exceeds the median magnitude on its path by a factor 1/clearance is refused
    as well.
    """

    def __init__(
        self,
        exprs: Sequence[HoloExpr],
        combine: Callable[..., np.ndarray] | None = None,
        clearance: float | None = None,
    ):
        self.exprs = list(exprs)
        self.combine = combine
        self.clearance = settings.pole_clearance if clearance is None else clearance

    def check_segments(self, a: np.ndarray, b: np.ndarray) -> None:
        for e in self.exprs:
            poles = locate_poles(e, a, b, self.clearance)
            if np.any(~np.isnan(poles)):
                where = complex(poles[~np.isnan(poles)][0])
                raise SingularityOnPathError(
                    f"'{e.text}' has a pole within clearance {self.clearance:g} of the path, at z={where:.6g}",
                    where,
                )

    def __call__(self, z: np.ndarray) -> np.ndarray:
        values = []
        for e in self.exprs:
            trace = EvaluationTrace()
            d0 = np.asarray(evaluate(e, z, trace).d0)
            for arguments in trace.branch_arguments:
                _check_branch_crossings(np.broadcast_to(arguments, z.shape), z, e.text)
            values.append(d0)
        with np.errstate(all="ignore"):
            out = self.combine(*values) if self.combine is not None else values[0]
        magnitude = np.abs(out)
        bad = ~np.isfinite(out)
        if not np.any(bad):
            reference = np.median(magnitude, axis=-1, keepdims=True)
            bad = magnitude * self.clearance > np.maximum(reference, np.finfo(float).tiny)
            bad &= magnitude > 1 / self.clearance
        if np.any(bad):
            where = complex(np.broadcast_to(z, out.shape)[bad].ravel()[0])
            raise SingularityOnPathError(
                f"integrand is singular within clearance {self.clearance:g} near z={where}", where
            )
        return out


def guarded_integrand(
    exprs: Sequence[HoloExpr],
    combine: Callable[..., np.ndarray] | None = None,
    clearance: float | None = None,
) -> GuardedIntegrand:
    return GuardedIntegrand(exprs, combine, clearance)


def integrate_path(
    e: HoloExpr,
    path: Sequence[complex],
    tol: float | None = None,
    clearance: float | None = None,
) -> complex:
    """Integrate `e` along a polyline.

    Parameters
    ----------
    e : HoloExpr
        Holomorphic integrand.
    path : Sequence[complex]
        Polyline vertices, at least two.
    tol : float, optional
        Absolute tolerance per segment, by default settings.quad_tol.
    clearance : float, optional
        Minimal distance to singularities, by default settings.pole_clearance.

    Returns
    -------
    complex

    Raises
    ------
    IntegrationError
        Non-convergence.
    SingularityOnPathError
        The path passes too close to a singularity.
    BranchCutError
        The path crosses a branch cut of a principal-branch primitive.
    """
    vertices = np.asarray(path, dtype=complex)
    if vertices.size < 2:
        raise ValueError(f"a path needs at least two vertices, got {vertices.size}")
    fn = guarded_integrand([e], clearance=clearance)
    segments = integrate_segments(fn, vertices[:-1], vertices[1:], tol=tol)
    return complex(segments[0].sum())
