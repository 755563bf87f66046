"""Named example maps with a matching default metric."""

from typing import Any

from embedlift.surface import HarmonicMapData

CATALOG: dict[str, dict[str, Any]] = {
    "planar": {"h_prime": "1", "q": "0", "h": "z"},
    "catenoid": {"h_prime": "exp(z)/2", "q": "i*exp(-z)", "h": "exp(z)/2", "g": "exp(-z)/2"},
    "strip": {"h_prime": "2/(1-z^2)", "q": "0"},
    "exp4": {"h_prime": "4*exp(4*z)", "q": "0"},
    "enneper": {"h_prime": "1", "q": "z", "h": "z"},
    "strip_lift": {"h_prime": "2/(1-z^2)", "q": "z/2"},
}

# the catenoid is traced on the whole plane in its own metric, a geodesic ball of radius π
DEFAULT_METRICS: dict[str, dict[str, Any]] = {
    "planar": {"kind": "power", "t": 1.0},
    "catenoid": {"kind": "pullback", "delta": 6.283185307179586, "domain_radius": None},
    "strip": {"kind": "power", "t": 1.0},
    "exp4": {"kind": "power", "t": 1.0},
    "enneper": {"kind": "power", "t": 1.0},
    "strip_lift": {"kind": "power", "t": 1.0},
}


def catalog_map(name: str) -> HarmonicMapData:
    """HarmonicMapData of a catalog entry.

    Raises
    ------
    KeyError
        Unknown name.
    """
    if name not in CATALOG:
        raise KeyError(f"unknown catalog map '{name}', choose from {sorted(CATALOG)}")
    return HarmonicMapData(name=name, **CATALOG[name])
