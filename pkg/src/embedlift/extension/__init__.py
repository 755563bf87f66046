from embedlift.extension.canonical import (
    CanonicalFunction,
    ConvexityReport,
    convexity_check,
    log_u_derivatives,
    shifted_along,
    shifted_u,
)
from embedlift.extension.critical import CriticalPointResult, UcpReport, find_critical_point, require_ucp, ucp_probe
from embedlift.extension.extend import (
    BundleReport,
    ContinuityReport,
    ExtensionMap,
    NaturalityReport,
    RadiusBoundReport,
    bundle_probe,
    extend,
    extension_continuity,
    match_fibers,
    naturality_check,
    radius_bound_check,
)
from embedlift.extension.fibers import (
    CircleFiber,
    base_of,
    fiber_from_frame,
    fibers_to_csv,
    fibers_to_obj,
    model_fiber,
    shift_frame,
    surface_fiber,
)

__all__ = [
    "BundleReport",
    "CanonicalFunction",
    "CircleFiber",
    "ContinuityReport",
    "ConvexityReport",
    "CriticalPointResult",
    "ExtensionMap",
    "NaturalityReport",
    "RadiusBoundReport",
    "UcpReport",
    "base_of",
    "bundle_probe",
    "convexity_check",
    "extend",
    "extension_continuity",
    "fiber_from_frame",
    "fibers_to_csv",
    "fibers_to_obj",
    "find_critical_point",
    "log_u_derivatives",
    "match_fibers",
    "model_fiber",
    "naturality_check",
    "radius_bound_check",
    "require_ucp",
    "shift_frame",
    "shifted_along",
    "shifted_u",
    "surface_fiber",
    "ucp_probe",
]
