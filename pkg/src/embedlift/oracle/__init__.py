from embedlift.oracle.boundary import (
    BoundaryTrace,
    Identification,
    RaySample,
    boundary_trace,
    detect_extremal_identifications,
)
from embedlift.oracle.collision import (
    CollisionReport,
    CollisionWitness,
    CurveInjectivityReport,
    curve_injectivity,
    surface_collision_scan,
)

__all__ = [
    "BoundaryTrace",
    "CollisionReport",
    "CollisionWitness",
    "CurveInjectivityReport",
    "Identification",
    "RaySample",
    "boundary_trace",
    "curve_injectivity",
    "detect_extremal_identifications",
    "surface_collision_scan",
]
