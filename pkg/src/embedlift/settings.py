from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical tolerances and defaults shared by all modules.

    Values can be overridden in an env-file `.env` or by environment variables
    with prefix `EMBEDLIFT_`, e.g. `EMBEDLIFT_QUAD_TOL=1e-12`.
    """

    model_config = SettingsConfigDict(env_file=(".env"), env_prefix="EMBEDLIFT_", extra="ignore")

    # expressions and quadrature
    quad_tol: float = Field(default=1e-10, gt=0)
    pole_clearance: float = Field(default=1e-6, gt=0)
    max_panels: int = Field(default=4096, ge=1)

    # ode integration
    ode_method: Literal["RK45", "DOP853", "Radau", "LSODA"] = "DOP853"
    ode_rtol: float = Field(default=1e-10, gt=0)
    ode_atol: float = Field(default=1e-10, gt=0)
    boundary_eps: float = Field(default=1e-6, gt=0)
    shooting_tol: float = Field(default=1e-8, gt=0)

    # criteria and grids
    tol_eq: float = Field(default=1e-6, ge=0)
    grid_n_r: int = Field(default=64, ge=2)
    grid_n_theta: int = Field(default=256, ge=4)
    grid_offset: float = Field(default=1e-3, gt=0, lt=1)

    # oracle
    collision_gap: float = Field(default=1e-9, gt=0)
    decorrelation_factor: float = Field(default=3.0, gt=0)
    infinity_threshold: float = Field(default=1e8, gt=0)

    # canonical function and probes
    critical_tol: float = Field(default=1e-10, gt=0)
    n_starts: int = Field(default=16, ge=1)
    sturm_sweep: int = Field(default=512, ge=8)
    ucp_shifts: int = Field(default=100, ge=1)
    seed: int = 0


settings = Settings()
