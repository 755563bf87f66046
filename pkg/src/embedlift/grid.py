"""Sample grids in the parameter domain."""

import numpy as np
from pydantic import BaseModel, Field, model_validator

from embedlift.settings import settings


class PolarGrid(BaseModel):
    """n_r × n_theta points r e^{iθ} with 0 ≤ r ≤ radius (1 - offset).

    The first ring is the center, repeated n_theta times so the grid stays
    rectangular.
    """

    n_r: int = Field(default_factory=lambda: settings.grid_n_r, ge=2)
    n_theta: int = Field(default_factory=lambda: settings.grid_n_theta, ge=4)
    offset: float = Field(default_factory=lambda: settings.grid_offset, ge=0, lt=1)
    radius: float = Field(default=1.0, gt=0)
    center: complex = 0j

    @property
    def r_max(self) -> float:
        return self.radius * (1 - self.offset)

    def radii(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.n_r)

    def thetas(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_theta) / self.n_theta

    def points(self) -> np.ndarray:
        """Complex points, shape (n_r, n_theta)."""
        return self.center + self.radii()[:, None] * np.exp(1j * self.thetas())[None, :]

    def unique_points(self) -> np.ndarray:
        """Flat array without the repeated center."""
        return np.concatenate([[self.center], self.points()[1:].ravel()])

    @property
    def spacing(self) -> float:
        """Largest distance between grid neighbours."""
        return max(self.r_max / (self.n_r - 1), self.r_max * 2 * np.pi / self.n_theta)


class PointGrid(BaseModel):
    """Explicit list of points."""

    points_: list[complex] = Field(alias="points")

    @model_validator(mode="before")
    @classmethod
    def read_pairs(cls, data):
        if isinstance(data, dict) and "points" in data:
            data = dict(data)
            data["points"] = [complex(*p) if isinstance(p, (list, tuple)) else complex(p) for p in data["points"]]
        return data

    def points(self) -> np.ndarray:
        return np.asarray(self.points_, dtype=complex)

    def unique_points(self) -> np.ndarray:
        return self.points()

    @property
    def spacing(self) -> float:
        z = self.points()
        if z.size < 2:
            return 0.0
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        return float(np.max(np.min(d, axis=1)))


Grid = PolarGrid | PointGrid
