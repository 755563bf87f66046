from embedlift.metric.conformal import (
    BeckerMetric,
    ConformalMetric,
    CustomMetric,
    EpsteinMetric,
    PowerMetric,
    PullbackMetric,
    RhoJets,
    diameter_power,
    hyperbolic_jets,
)
from embedlift.metric.diameter import DiameterEstimate, diameter_estimate, diameter_power_quad, resolve_diameter
from embedlift.metric.geodesic import GeodesicPath, distance, geodesic_bvp, geodesic_ivp
from embedlift.metric.probes import (
    BpjReport,
    UlpReport,
    bpj_probe,
    curvature_residual,
    reparametrization_residual,
    reparametrization_terms,
    ulp_probe,
)

__all__ = [
    "BeckerMetric",
    "BpjReport",
    "ConformalMetric",
    "CustomMetric",
    "DiameterEstimate",
    "EpsteinMetric",
    "GeodesicPath",
    "PowerMetric",
    "PullbackMetric",
    "RhoJets",
    "UlpReport",
    "bpj_probe",
    "curvature_residual",
    "diameter_estimate",
    "diameter_power",
    "diameter_power_quad",
    "distance",
    "geodesic_bvp",
    "geodesic_ivp",
    "hyperbolic_jets",
    "reparametrization_residual",
    "reparametrization_terms",
    "resolve_diameter",
    "ulp_probe",
]
