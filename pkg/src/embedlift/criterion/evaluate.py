"""Pointwise evaluation of the injectivity criterion and its special cases.

The general criterion for a metric e^{2ρ}|dz|² of diameter δ reads

    |𝒮f - 2(ρ_zz - ρ_z²)| + e^{2σ}|K| ≤ 2π² e^{2ρ}/δ² + 2ρ_zz̄

Every variant below reports LHS, RHS and margin = RHS - LHS per point.
"""

import math

import numpy as np
from pydantic import BaseModel
from scipy.special import gamma

from embedlift.criterion.report import CriterionReport, build_report
from embedlift.expr import HoloExpr, parse
from embedlift.grid import Grid
from embedlift.logger import get_logger
from embedlift.metric import ConformalMetric, EpsteinMetric, PullbackMetric, RhoJets, resolve_diameter
from embedlift.surface import HarmonicMapData, map_jets, sigma_jets

logger = get_logger(__name__)

VARIANTS = (
    "main",
    "complete",
    "power",
    "pi2",
    "nehari",
    "t2",
    "t2_relaxed",
    "ahlfors",
    "epstein",
    "becker",
    "intrinsic",
)


def _points(grid: Grid | np.ndarray) -> np.ndarray:
    if isinstance(grid, np.ndarray):
        return grid.ravel().astype(complex)
    return grid.unique_points()


class SurfaceTerms:
    """𝒮f, e^{2σ}|K| and σ-jets of a map on flat points, with skip reasons."""

    def __init__(self, m: HarmonicMapData, z: np.ndarray):
        self.z = z
        self.sigma = sigma_jets(m, z, strict=False)
        valid = map_jets(m, z, strict=False).valid
        with np.errstate(all="ignore"):
            self.schwarzian = 2 * (self.sigma.sigma_zz - self.sigma.sigma_z**2)
            # e^{2σ}|K| = 4 σ_zz̄
            self.curvature_term = 4 * self.sigma.sigma_zzbar
        self.skip = np.where(valid, "", "singular lift (h' = 0 or pole)").astype(object)


def _metric_skip(terms: SurfaceTerms, metric: ConformalMetric) -> np.ndarray:
    if metric.domain_radius is None:
        return terms.skip
    outside = np.abs(terms.z) >= metric.domain_radius
    return np.where(outside & (terms.skip == ""), f"outside the disk of {metric.label}", terms.skip)


def _general_lhs(terms: SurfaceTerms, rho: RhoJets) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.abs(terms.schwarzian - 2 * (rho.rho_zz - rho.rho_z**2)) + terms.curvature_term


def _diameter_term(rho: RhoJets, delta: float) -> np.ndarray:
    if math.isinf(delta):
        return np.zeros(np.shape(rho.rho))
    return 2 * math.pi**2 * np.exp(2 * rho.rho) / delta**2


def evaluate_main(
    m: HarmonicMapData,
    metric: ConformalMetric,
    grid: Grid | np.ndarray,
    delta: float | None = None,
    tol_eq: float | None = None,
    variant: str = "main",
) -> CriterionReport:
    """Evaluate the general criterion for `metric` on the grid.

    Parameters
    ----------
    m : HarmonicMapData
    metric : ConformalMetric
    grid : PolarGrid | PointGrid | np.ndarray
    delta : float, optional
        Diameter; by default the metric's own (override, closed form, ∞ when
        complete, or an estimated lower bound).
    tol_eq : float, optional
        Equality tolerance on margins, by default settings.tol_eq.

    Returns
    -------
    CriterionReport
    """
    z = _points(grid)
    if delta is None:
        delta, source = resolve_diameter(metric)
    else:
        source = "supplied"
    terms = SurfaceTerms(m, z)
    rho = metric.jets(z)
    lhs = _general_lhs(terms, rho)
    with np.errstate(all="ignore"):
        rhs = _diameter_term(rho, delta) + 2 * np.asarray(rho.rho_zzbar)
    report = build_report(
        variant,
        z,
        lhs,
        rhs,
        _metric_skip(terms, metric),
        tol_eq=tol_eq,
        parameters={"metric": metric.label},
        delta=delta,
        delta_source=source,
    )
    logger.info(f"{variant} criterion for {m.label} with {metric.label}: {report.verdict}")
    return report


def power_rhs(z: np.ndarray, t: float) -> np.ndarray:
    """2t/(1-|z|²)² + 2π (Γ(3/2-t)/Γ(1-t))² / (1-|z|²)^{2t}, the last term only for t < 1."""
    d = 1 - np.abs(z) ** 2
    rhs = 2 * t / d**2
    if t < 1:
        rhs = rhs + 2 * math.pi * (gamma(1.5 - t) / gamma(1 - t)) ** 2 / d ** (2 * t)
    return rhs


def _power_lhs(terms: SurfaceTerms, z: np.ndarray, c: complex) -> np.ndarray:
    d = 1 - np.abs(z) ** 2
    with np.errstate(all="ignore"):
        return np.abs(terms.schwarzian - 2 * c * (1 - c) * np.conj(z) ** 2 / d**2) + terms.curvature_term


def _hypothesis_sup(gradient: np.ndarray, z: np.ndarray) -> float:
    values = np.abs(gradient) * (1 - np.abs(z) ** 2)
    return float(np.nanmax(values)) if values.size else 0.0


def evaluate_corollary(
    variant: str,
    m: HarmonicMapData,
    grid: Grid | np.ndarray,
    *,
    t: float | None = None,
    c: complex | None = None,
    metric: ConformalMetric | None = None,
    T: HoloExpr | str | None = None,
    delta: float | None = None,
    printed_rhs: bool = False,
    tol_eq: float | None = None,
) -> CriterionReport:
    """Evaluate one named special case of the criterion.

    Variants
    --------
    main        general criterion with `metric` (and optional `delta`)
    complete    δ = ∞ with `metric`; RHS 2ρ_zz̄, or -½ρ_zz̄ with `printed_rhs`
    power       ρ = -t log(1-|z|²), parameter `t` ≥ 0
    pi2, nehari, t2
                power with t = 0, 1, 2
    t2_relaxed  |𝒮f| + e^{2σ}|K| ≤ 4/(1-|z|²)
    ahlfors     |𝒮f - 2c(1-c) z̄²/(1-|z|²)²| + e^{2σ}|K| ≤ 2|c|/(1-|z|²)², |c-1| < 1
    epstein     ρ = Re T - log(1-|z|²), hypothesis |τ_z|(1-|z|²) < 1
    becker      2|zσ_z| + ¼(1-|z|²)e^{2σ}|K| ≤ 1/(1-|z|²), hypothesis
                |σ_z|(1-|z|²) < 1; `printed_rhs` drops the factor 2
    intrinsic   |K| ≤ 4π²/δ² with the surface diameter `delta`

    Raises
    ------
    ValueError
        Unknown variant or missing parameter.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown criterion variant '{variant}', expected one of {', '.join(VARIANTS)}")
    z = _points(grid)

    if variant == "main":
        if metric is None:
            raise ValueError("variant 'main' needs a metric")
        return evaluate_main(m, metric, z, delta=delta, tol_eq=tol_eq)

    terms = SurfaceTerms(m, z)
    d = 1 - np.abs(z) ** 2
    outside = np.abs(z) >= 1
    skip = np.where(outside & (terms.skip == ""), "outside the unit disk", terms.skip)
    common = {"tol_eq": tol_eq}

    if variant == "complete":
        if metric is None:
            raise ValueError("variant 'complete' needs a metric")
        if not metric.complete:
            logger.warning(f"{metric.label} is not complete; the complete-metric variant does not apply")
        rho = metric.jets(z)
        factor = -0.5 if printed_rhs else 2.0
        rhs = factor * np.asarray(rho.rho_zzbar)
        return build_report(
            variant,
            z,
            _general_lhs(terms, rho),
            rhs,
            _metric_skip(terms, metric),
            parameters={"metric": metric.label, "printed_rhs": printed_rhs},
            delta=math.inf,
            delta_source="complete",
            **common,
        )

    if variant in ("power", "pi2", "nehari", "t2"):
        t = {"pi2": 0.0, "nehari": 1.0, "t2": 2.0}.get(variant, t)
        if t is None or t < 0:
            raise ValueError(f"variant '{variant}' needs t ≥ 0, got {t}")
        with np.errstate(all="ignore"):
            lhs = _power_lhs(terms, z, complex(t))
            rhs = power_rhs(z, t)
        delta_t = math.inf if t >= 1 else float(math.sqrt(math.pi) * gamma(1 - t) / gamma(1.5 - t))
        return build_report(
            variant,
            z,
            lhs,
            rhs,
            skip,
            parameters={"t": t},
            delta=delta_t,
            delta_source="closed-form",
            **common,
        )

    if variant == "t2_relaxed":
        with np.errstate(all="ignore"):
            lhs = np.abs(terms.schwarzian) + terms.curvature_term
            rhs = 4 / d
        return build_report(variant, z, lhs, rhs, skip, **common)

    if variant == "ahlfors":
        if c is None:
            raise ValueError("variant 'ahlfors' needs the constant c")
        c = complex(c)
        with np.errstate(all="ignore"):
            lhs = _power_lhs(terms, z, c)
            rhs = 2 * abs(c) / d**2
        holds = abs(c - 1) < 1
        return build_report(
            variant,
            z,
            lhs,
            rhs,
            skip,
            parameters={"c": str(c)},
            hypothesis="|c - 1| < 1",
            hypothesis_holds=holds,
            **common,
        )

    if variant == "epstein":
        if T is None:
            raise ValueError("variant 'epstein' needs a holomorphic T")
        T = parse(T) if isinstance(T, str) else T
        epstein = EpsteinMetric(T=T)
        tau = epstein.tau_jets(z)
        sup = _hypothesis_sup(np.asarray(tau.rho_z), z[~outside])
        rho = epstein.jets(z)
        return build_report(
            variant,
            z,
            _general_lhs(terms, rho),
            2 * np.asarray(rho.rho_zzbar),
            skip,
            parameters={"T": T.text, "gradient_sup": sup},
            delta=math.inf,
            delta_source="complete",
            hypothesis="|τ_z|(1-|z|²) < 1",
            hypothesis_holds=sup < 1,
            **common,
        )

    if variant == "becker":
        sigma_z = np.asarray(terms.sigma.sigma_z)
        sup = _hypothesis_sup(sigma_z[~outside], z[~outside])
        factor = 1.0 if printed_rhs else 2.0
        with np.errstate(all="ignore"):
            lhs = factor * np.abs(z * sigma_z) + 0.25 * d * terms.curvature_term
            rhs = 1 / d
        return build_report(
            variant,
            z,
            lhs,
            rhs,
            skip,
            parameters={"printed_rhs": printed_rhs, "gradient_sup": sup},
            hypothesis="|σ_z|(1-|z|²) < 1",
            hypothesis_holds=sup < 1,
            **common,
        )

    # intrinsic
    if delta is None:
        raise ValueError("variant 'intrinsic' needs the diameter delta of the surface")
    with np.errstate(all="ignore"):
        abs_k = terms.curvature_term * np.exp(-2 * np.asarray(terms.sigma.sigma))
        rhs = np.full(z.shape, 4 * math.pi**2 / delta**2)
    return build_report(
        variant,
        z,
        abs_k,
        rhs,
        terms.skip,
        parameters={},
        delta=delta,
        delta_source="supplied",
        **common,
    )


class ImplicationReport(BaseModel):
    """Pointwise check that the relaxed t = 2 condition implies the t = 2 condition."""

    n_points: int
    n_relaxed_hold: int
    n_violations: int
    max_chain_excess: float
    holds: bool


def implication_check(m: HarmonicMapData, grid: Grid | np.ndarray, tol: float = 1e-9) -> ImplicationReport:
    """Re-verify |𝒮f + 4z̄²/(1-|z|²)²| ≤ |𝒮f| + 4|z|²/(1-|z|²)² and the resulting implication."""
    z = _points(grid)
    z = z[np.abs(z) < 1]
    terms = SurfaceTerms(m, z)
    ok = terms.skip == ""
    z, schwarzian, curvature_term = z[ok], terms.schwarzian[ok], terms.curvature_term[ok]
    d = 1 - np.abs(z) ** 2
    t2_lhs = np.abs(schwarzian + 4 * np.conj(z) ** 2 / d**2) + curvature_term
    relaxed_lhs = np.abs(schwarzian) + curvature_term
    chain = t2_lhs - (relaxed_lhs + 4 * np.abs(z) ** 2 / d**2)
    relaxed = relaxed_lhs <= 4 / d
    violations = relaxed & (t2_lhs > 4 / d**2 * (1 + tol))
    excess = float(np.max(chain)) if chain.size else 0.0
    return ImplicationReport(
        n_points=int(z.size),
        n_relaxed_hold=int(relaxed.sum()),
        n_violations=int(violations.sum()),
        max_chain_excess=excess,
        holds=bool(excess <= tol * max(1.0, float(np.max(np.abs(t2_lhs), initial=0.0))) and not violations.any()),
    )


def intrinsic_difference(m: HarmonicMapData, z, delta: float) -> np.ndarray:
    """(LHS - RHS) of the general criterion for the metric induced by the lift, pointwise.

    Equals ½ e^{2σ}(|K| - 4π²/δ²).
    """
    z = np.asarray(z, dtype=complex)
    terms = SurfaceTerms(m, z)
    rho = PullbackMetric(surface=m, domain_radius=None).jets(z)
    return _general_lhs(terms, rho) - (_diameter_term(rho, delta) + 2 * np.asarray(rho.rho_zzbar))


__all__ = [
    "ImplicationReport",
    "VARIANTS",
    "evaluate_corollary",
    "evaluate_main",
    "implication_check",
    "intrinsic_difference",
    "power_rhs",
]
