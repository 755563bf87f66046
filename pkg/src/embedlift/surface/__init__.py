from embedlift.surface.along import lift_along_path
from embedlift.surface.harmonic_map import (
    HarmonicMapData,
    MapJets,
    SigmaJets,
    ahlfors_derivative,
    conformal_factor,
    expanded_schwarzian,
    gauss_curvature,
    harmonic_schwarzian,
    lift,
    map_jets,
    sigma_jets,
    to_complex,
)
from embedlift.surface.surface_jet import SurfaceJet, normal_curvature, surface_jet
from embedlift.surface.tensor import RealJet2, schwarzian_tensor

__all__ = [
    "HarmonicMapData",
    "MapJets",
    "RealJet2",
    "SigmaJets",
    "SurfaceJet",
    "ahlfors_derivative",
    "conformal_factor",
    "expanded_schwarzian",
    "gauss_curvature",
    "harmonic_schwarzian",
    "lift",
    "lift_along_path",
    "map_jets",
    "normal_curvature",
    "schwarzian_tensor",
    "sigma_jets",
    "surface_jet",
    "to_complex",
]
