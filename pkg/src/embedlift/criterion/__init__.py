from embedlift.criterion.along_geodesic import (
    ExtremalReport,
    GeodesicRestrictionReport,
    extremal_diagnostics,
    fit_circle,
    geodesic_restriction_check,
    s1_along_geodesic,
)
from embedlift.criterion.evaluate import (
    VARIANTS,
    ImplicationReport,
    evaluate_corollary,
    evaluate_main,
    implication_check,
    intrinsic_difference,
    power_rhs,
)
from embedlift.criterion.report import CriterionReport, SkippedPoint, build_report, verdict_of

__all__ = [
    "VARIANTS",
    "CriterionReport",
    "ExtremalReport",
    "GeodesicRestrictionReport",
    "ImplicationReport",
    "SkippedPoint",
    "build_report",
    "evaluate_corollary",
    "evaluate_main",
    "extremal_diagnostics",
    "fit_circle",
    "geodesic_restriction_check",
    "implication_check",
    "intrinsic_difference",
    "power_rhs",
    "s1_along_geodesic",
    "verdict_of",
]
