"""Pointwise criterion reports."""

from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from embedlift.settings import settings

Verdict = Literal["holds", "fails", "holds-with-equality-locus", "hypothesis-fails"]


class SkippedPoint(BaseModel):
    z: tuple[float, float]
    reason: str


class CriterionReport(BaseModel):
    """LHS, RHS and margin = RHS - LHS of a criterion at every evaluated point.

    Points that could not be evaluated are listed in `skipped`, so every grid
    point is accounted for.
    """

    variant: str
    parameters: dict[str, float | str | bool | None] = Field(default_factory=dict)
    delta: float | None = None
    delta_source: str | None = None
    z: list[tuple[float, float]]
    lhs: list[float]
    rhs: list[float]
    margin: list[float]
    skipped: list[SkippedPoint] = Field(default_factory=list)
    tol_eq: float
    min_margin: float | None
    argmin: tuple[float, float] | None
    equality_locus: list[tuple[float, float]] = Field(default_factory=list)
    hypothesis: str | None = None
    hypothesis_holds: bool | None = None
    verdict: Verdict

    @property
    def n_points(self) -> int:
        return len(self.margin) + len(self.skipped)

    def to_frame(self) -> pd.DataFrame:
        z = np.asarray(self.z, dtype=float).reshape(-1, 2)
        return pd.DataFrame({"x": z[:, 0], "y": z[:, 1], "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin})

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


def verdict_of(margin: np.ndarray, tol_eq: float, hypothesis_holds: bool | None = None) -> Verdict:
    """Verdict from the margins; a failed hypothesis overrides the inequality."""
    if hypothesis_holds is False:
        return "hypothesis-fails"
    if margin.size == 0:
        return "holds"
    if margin.min() < -tol_eq:
        return "fails"
    if np.any(np.abs(margin) <= tol_eq):
        return "holds-with-equality-locus"
    return "holds"


def build_report(
    variant: str,
    z: np.ndarray,
    lhs: np.ndarray,
    rhs: np.ndarray,
    skip_reason: np.ndarray,
    tol_eq: float | None = None,
    parameters: dict | None = None,
    delta: float | None = None,
    delta_source: str | None = None,
    hypothesis: str | None = None,
    hypothesis_holds: bool | None = None,
) -> CriterionReport:
    """Assemble a report from flat arrays; `skip_reason` is "" for evaluated points."""
    tol_eq = settings.tol_eq if tol_eq is None else tol_eq
    z, lhs, rhs = (np.ravel(v) for v in (z, lhs, rhs))
    skip_reason = np.ravel(skip_reason)
    bad = ~(np.isfinite(lhs) & np.isfinite(rhs))
    skip_reason = np.where(bad & (skip_reason == ""), "non-finite value", skip_reason)
    keep = skip_reason == ""
    margin = rhs[keep] - lhs[keep]
    kept = z[keep]
    k = int(np.argmin(margin)) if margin.size else None
    locus = kept[np.abs(margin) <= tol_eq]
    return CriterionReport(
        variant=variant,
        parameters=parameters or {},
        delta=None if delta is None or not np.isfinite(delta) else float(delta),
        delta_source=delta_source,
        z=[(p.real, p.imag) for p in kept],
        lhs=lhs[keep].tolist(),
        rhs=rhs[keep].tolist(),
        margin=margin.tolist(),
        skipped=[SkippedPoint(z=(p.real, p.imag), reason=str(r)) for p, r in zip(z[~keep], skip_reason[~keep])],
        tol_eq=tol_eq,
        min_margin=None if k is None else float(margin[k]),
        argmin=None if k is None else (kept[k].real, kept[k].imag),
        equality_locus=[(p.real, p.imag) for p in locus],
        hypothesis=hypothesis,
        hypothesis_holds=hypothesis_holds,
        verdict=verdict_of(margin, tol_eq, hypothesis_holds),
    )
