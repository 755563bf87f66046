from embedlift.schwarzian.curves import (
    CurveExpression,
    SpaceCurve,
    ahlfors_s1,
    classical_schwarzian,
    curvature,
    reparametrized,
    s1_chain_rule,
    s1_frenet,
    speed_jets,
)
from embedlift.schwarzian.mobius import (
    AffineMap,
    Inversion,
    MobiusShift,
    chordal_distance,
    mobius_r3,
    to_sphere,
    transform_curve,
)
from embedlift.schwarzian.sturm import (
    DerivativeBoundReport,
    DisconjugacyResult,
    ExtremalPhi,
    SturmProblem,
    derivative_bound,
    extremal_phi,
    sturm_disconjugate,
)

__all__ = [
    "AffineMap",
    "CurveExpression",
    "DerivativeBoundReport",
    "DisconjugacyResult",
    "ExtremalPhi",
    "Inversion",
    "MobiusShift",
    "SpaceCurve",
    "SturmProblem",
    "ahlfors_s1",
    "chordal_distance",
    "classical_schwarzian",
    "curvature",
    "derivative_bound",
    "extremal_phi",
    "mobius_r3",
    "reparametrized",
    "s1_chain_rule",
    "s1_frenet",
    "speed_jets",
    "sturm_disconjugate",
    "to_sphere",
    "transform_curve",
]
