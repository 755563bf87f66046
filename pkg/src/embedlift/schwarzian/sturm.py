"""Disconjugacy of u'' + p u = 0 and the extremal function Φ."""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from embedlift.errors import EmbedliftError, ExtremalPhiError, NormalizationError
from embedlift.expr import HoloExpr, evaluate, parse
from embedlift.logger import get_logger
from embedlift.schwarzian.curves import SpaceCurve, ahlfors_s1
from embedlift.settings import settings

logger = get_logger(__name__)

GRID_POINTS = 4097
ZERO_TOL = 1e-8
# zeros this close to b, relative to b - a, are the endpoint itself
END_TOL = 1e-7


class SturmProblem(BaseModel):
    """u'' + p(x) u = 0 on [a, b], p given as an expression in x."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p: HoloExpr
    a: float = -1.0
    b: float = 1.0

    @field_validator("p", mode="before")
    @classmethod
    def parse_p(cls, v):
        if isinstance(v, (int, float)):
            v = repr(float(v))
        return parse(v, variable="x") if isinstance(v, str) else v

    @model_validator(mode="after")
    def check_interval(self):
        if not self.b > self.a:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")
        values = self.p_values(np.linspace(self.a, self.b, 257))
        if not np.all(np.isfinite(values)):
            raise ValueError(f"p = {self.p.text} is not continuous on [{self.a}, {self.b}]")
        return self

    def p_values(self, x) -> np.ndarray:
        value = evaluate(self.p, np.asarray(x, dtype=float)).d0
        return np.real(np.asarray(value))

    def _rhs(self, x, y):
        p = float(self.p_values(x))
        return [y[1], -p * y[0], y[3], -p * y[2]]

    def fundamental_solutions(self, x0: float, x1: float):
        """Dense solutions (u1, u2) with u1(x0)=1, u1'(x0)=0 and u2(x0)=0, u2'(x0)=1, on [x0, x1]."""
        sol = solve_ivp(
            self._rhs,
            (x0, x1),
            [1.0, 0.0, 0.0, 1.0],
            method=settings.ode_method,
            rtol=settings.ode_rtol,
            atol=settings.ode_atol,
            dense_output=True,
            max_step=abs(x1 - x0) / 64,
        )
        if sol.status == -1:
            raise EmbedliftError(f"integration of u'' + p u = 0 failed: {sol.message}")
        return sol


@dataclass
class DisconjugacyResult:
    """Outcome of the initial-condition sweep; `witness_zeros` holds two zeros when not disconjugate."""

    disconjugate: bool
    n_sweep: int
    grid_points: int
    witness_alpha: float | None = None
    witness_zeros: list[float] = field(default_factory=list)


def sturm_disconjugate(problem: SturmProblem, n_sweep: int | None = None) -> DisconjugacyResult:
    """Search for a solution with two zeros in [a, b).

    A zero at b does not count, so p = π²/l² on an interval of length l, whose
    solution sin(π(x - a)/l) vanishes at both ends, is disconjugate.

    Solutions u_α with u(a) = sin α, u'(a) = cos α for α in a sweep of [0, π)
    are combined from two fundamental solutions; zeros are located by sign
    changes on a fine grid and refined with Brent's method. A negative answer
    comes with a witness, a positive one is a numerical claim for the sweep.
    """
    n_sweep = settings.sturm_sweep if n_sweep is None else n_sweep
    sol = problem.fundamental_solutions(problem.a, problem.b)
    x = np.linspace(problem.a, problem.b, GRID_POINTS)
    u1, u2 = sol.sol(x)[[0, 2]]
    alphas = np.pi * np.arange(n_sweep) / n_sweep
    u = np.sin(alphas)[:, None] * u1[None, :] + np.cos(alphas)[:, None] * u2[None, :]
    end_tol = END_TOL * (problem.b - problem.a)

    for k, alpha in enumerate(alphas):
        values = u[k]
        zeros = [problem.a] if abs(values[0]) < 1e-14 else []
        for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
            fn = lambda s, alpha=alpha: float(np.sin(alpha) * sol.sol(s)[0] + np.cos(alpha) * sol.sol(s)[2])
            zeros.append(brentq(fn, x[i], x[i + 1]))
        zeros = [s for s in zeros if s < problem.b - end_tol]
        if len(zeros) >= 2:
            logger.info(f"u'' + p u = 0 not disconjugate on [{problem.a}, {problem.b}]: zeros {zeros[:2]}")
            return DisconjugacyResult(False, n_sweep, GRID_POINTS, float(alpha), [float(z) for z in zeros[:2]])
    return DisconjugacyResult(True, n_sweep, GRID_POINTS)


@dataclass
class ExtremalPhi:
    """Φ(x) = ∫₀ˣ u₀⁻² on [-b, b], with u₀'' + p u₀ = 0, u₀(0) = 1, u₀'(0) = 0.

    Φ = v/u₀ for the solution v with v(0) = 0, v'(0) = 1. `endpoint_infinite`
    flags u₀(b) ≈ 0, i.e. Φ(±b) = ±∞.
    """

    problem: SturmProblem
    solution: object = field(repr=False)
    endpoint_infinite: bool

    def _u0_v(self, x):
        y = self.solution(np.abs(np.asarray(x, dtype=float)))
        return y[0], y[2]

    def derivative(self, x) -> np.ndarray:
        """Φ'(x) = 1/u₀(|x|)²; ∞ where u₀ vanishes."""
        u0, _ = self._u0_v(x)
        with np.errstate(divide="ignore"):
            return np.where(np.abs(u0) < ZERO_TOL, np.inf, 1 / u0**2)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u0, v = self._u0_v(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = np.sign(x) * v / u0
        return np.where(np.abs(u0) < ZERO_TOL, np.sign(x) * np.inf, value)

    def to_frame(self, n: int = 201) -> pd.DataFrame:
        x = np.linspace(-self.problem.b, self.problem.b, n)
        return pd.DataFrame({"x": x, "phi": self(x), "dphi": self.derivative(x)})

    def to_csv(self, path: Path, n: int = 201) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame(n).to_csv(path, index=False)
        return path


def extremal_phi(problem: SturmProblem) -> ExtremalPhi:
    """The odd extremal function Φ for an even p on a symmetric interval.

    Raises
    ------
    ExtremalPhiError
        p not even, interval not symmetric or u₀ vanishing inside (-b, b).
    """
    if not math.isclose(problem.a, -problem.b, abs_tol=1e-12):
        raise ExtremalPhiError(f"interval [{problem.a}, {problem.b}] is not symmetric")
    x = np.linspace(0, problem.b, 257)
    if np.max(np.abs(problem.p_values(x) - problem.p_values(-x))) > 1e-9:
        raise ExtremalPhiError(f"p = {problem.p.text} is not even")
    sol = problem.fundamental_solutions(0.0, problem.b)
    grid = np.linspace(0.0, problem.b, GRID_POINTS)
    u0 = sol.sol(grid)[0]
    endpoint_infinite = abs(u0[-1]) < ZERO_TOL
    inside = u0[:-1] if endpoint_infinite else u0
    if np.any(inside <= 0):
        first = float(grid[np.argmax(inside <= 0)])
        raise ExtremalPhiError(f"u₀ vanishes at x≈{first:.6g} inside the interval")
    return ExtremalPhi(problem=problem, solution=sol.sol, endpoint_infinite=endpoint_infinite)


class DerivativeBoundReport(BaseModel):
    """max |φ'(x)|/Φ'(|x|) over the samples, expected ≤ 1."""

    max_ratio: float
    argmax: float
    bound_holds: bool
    hypothesis_holds: bool
    max_hypothesis_excess: float


def derivative_bound(c: SpaceCurve, problem: SturmProblem, tol: float = 1e-6) -> DerivativeBoundReport:
    """Compare |φ'| with the extremal Φ'(|x|) for a normalised curve.

    The curve must contain x = 0 with φ(0) = 0, |φ'(0)| = 1 and φ''(0) = 0.

    Raises
    ------
    NormalizationError
        No sample at 0 or the normalisation does not hold there.
    """
    zero = np.flatnonzero(np.abs(c.x) < 1e-12)
    if zero.size == 0:
        raise NormalizationError("curve has no sample at x = 0")
    i = int(zero[0])
    if (
        np.linalg.norm(c.phi[i]) > 1e-8
        or abs(np.linalg.norm(c.d1[i]) - 1) > 1e-8
        or np.linalg.norm(c.d2[i]) > 1e-8
    ):
        raise NormalizationError("curve is not normalised: φ(0)=0, |φ'(0)|=1, φ''(0)=0 required")
    phi = extremal_phi(problem)
    bound = phi.derivative(c.x)
    finite = np.isfinite(bound)
    ratio = np.linalg.norm(c.d1, axis=-1)[finite] / bound[finite]
    excess = ahlfors_s1(c) - 2 * problem.p_values(c.x)
    k = int(np.argmax(ratio))
    return DerivativeBoundReport(
        max_ratio=float(ratio[k]),
        argmax=float(c.x[finite][k]),
        bound_holds=bool(ratio[k] <= 1 + tol),
        hypothesis_holds=bool(np.max(excess) <= tol),
        max_hypothesis_excess=float(np.max(excess)),
    )
