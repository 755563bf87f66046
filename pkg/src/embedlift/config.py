"""Experiment configuration read from a TOML file."""

import tomllib
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from embedlift.catalog import CATALOG, DEFAULT_METRICS, catalog_map
from embedlift.criterion import VARIANTS
from embedlift.errors import ConfigError
from embedlift.grid import PolarGrid
from embedlift.logger import get_logger
from embedlift.metric import BeckerMetric, ConformalMetric, EpsteinMetric, PowerMetric, PullbackMetric
from embedlift.settings import Settings, settings
from embedlift.surface import HarmonicMapData, to_complex

logger = get_logger(__name__)


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MapSection(Section):
    """Either a catalog name or the expressions h', q (and optional primitives)."""

    catalog: str | None = None
    h_prime: str | None = None
    q: str = "0"
    h: str | None = None
    g: str | None = None
    z0: Any = 0

    @model_validator(mode="after")
    def check_source(self):
        if self.catalog is None and self.h_prime is None:
            raise ValueError("give either catalog or h_prime")
        if self.catalog is not None and self.catalog not in CATALOG:
            raise ValueError(f"unknown catalog map '{self.catalog}', choose from {sorted(CATALOG)}")
        return self

    def build(self) -> HarmonicMapData:
        if self.catalog is not None:
            return catalog_map(self.catalog)
        return HarmonicMapData(h_prime=self.h_prime, q=self.q, h=self.h, g=self.g, z0=self.z0)


class MetricSection(Section):
    """Background metric; without `kind` the catalog default (or power t=1) is used."""

    kind: Literal["power", "epstein", "pullback", "becker"] | None = None
    t: float = Field(default=1.0, ge=0)
    tau: str | None = None
    delta: float | None = Field(default=None, gt=0)
    plane: bool = False

    def build(self, m: HarmonicMapData, catalog: str | None = None) -> ConformalMetric:
        options: dict[str, Any] = dict(DEFAULT_METRICS.get(catalog, {})) if self.kind is None else {"kind": self.kind}
        options.setdefault("kind", "power")
        kind = options.pop("kind")
        options.setdefault("t", self.t)
        if "t" in self.model_fields_set:
            options["t"] = self.t
        if self.delta is not None:
            options["delta"] = self.delta
        if self.plane:
            options["domain_radius"] = None
        match kind:
            case "power":
                options.pop("domain_radius", None)
                return PowerMetric(**options)
            case "epstein":
                if self.tau is None:
                    raise ConfigError("epstein metric needs tau", "metric.tau")
                options.pop("t")
                return EpsteinMetric(T=self.tau, **options)
            case "pullback":
                options.pop("t")
                return PullbackMetric(surface=m, **options)
            case "becker":
                options.pop("t")
                return BeckerMetric(surface=m, **options)
        raise ConfigError(f"unknown metric kind '{kind}'", "metric.kind")


class GridSection(Section):
    n_r: int = Field(default_factory=lambda: settings.grid_n_r, ge=2)
    n_theta: int = Field(default_factory=lambda: settings.grid_n_theta, ge=4)
    radius: float = Field(default=1.0, gt=0)
    center: Any = 0
    boundary_offset: float = Field(default_factory=lambda: settings.grid_offset, ge=0, lt=1)

    def build(self) -> PolarGrid:
        return PolarGrid(
            n_r=self.n_r,
            n_theta=self.n_theta,
            offset=self.boundary_offset,
            radius=self.radius,
            center=to_complex(self.center),
        )


class CriterionSection(Section):
    variants: list[str] = Field(default_factory=lambda: ["main"])
    t: float | None = None
    c: Any = None
    tau: str | None = None
    tol_eq: float | None = Field(default=None, ge=0)
    printed_rhs: bool = False

    @field_validator("variants")
    @classmethod
    def check_variants(cls, v):
        unknown = [name for name in v if name not in VARIANTS]
        if unknown:
            raise ValueError(f"unknown variants {unknown}, choose from {list(VARIANTS)}")
        return v


class RunSection(Section):
    oracle: bool = False
    extension: bool = False
    boundary_trace: bool = False
    geodesics: bool = False
    seed: int | None = None
    out: Path | None = None


class TraceSection(Section):
    z0: Any = 0
    n_dirs: int = Field(default=16, ge=2)
    s_max: float | None = Field(default=None, gt=0)


class ExtensionSection(Section):
    n_samples: int = Field(default=100, ge=1)
    ucp_shifts: int = Field(default=10, ge=1)


class ExperimentConfig(Section):
    """Complete description of a run; echoed into report.json."""

    name: str = "run"
    map: MapSection
    metric: MetricSection = Field(default_factory=MetricSection)
    grid: GridSection = Field(default_factory=GridSection)
    criterion: CriterionSection = Field(default_factory=CriterionSection)
    run: RunSection = Field(default_factory=RunSection)
    trace: TraceSection = Field(default_factory=TraceSection)
    extension: ExtensionSection = Field(default_factory=ExtensionSection)
    tolerances: dict[str, Any] = Field(default_factory=dict)

    @field_validator("tolerances")
    @classmethod
    def check_tolerances(cls, v):
        unknown = sorted(set(v) - set(Settings.model_fields))
        if unknown:
            raise ValueError(f"unknown tolerances {unknown}")
        Settings.model_validate({**settings.model_dump(), **v})
        return v

    def build_map(self) -> HarmonicMapData:
        return self.map.build()

    def build_metric(self, m: HarmonicMapData) -> ConformalMetric:
        return self.metric.build(m, self.map.catalog)


def _field_path(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"])


def parse_config(data: dict, name: str = "run") -> ExperimentConfig:
    """Validate a config dictionary.

    Raises
    ------
    ConfigError
        With the dotted path of the first offending field.
    """
    try:
        return ExperimentConfig.model_validate({"name": name, **data})
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(first["msg"], _field_path(first)) from exc


def load_config(path: Path) -> ExperimentConfig:
    """Read and validate a TOML experiment file; the run name is the file stem.

    Raises
    ------
    ConfigError
        TOML syntax errors (with line and column) and validation errors.
    """
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    config = parse_config(data, name=path.stem)
    logger.info(f"read config {path}")
    return config


def apply_tolerances(overrides: dict[str, Any]) -> None:
    """Set tolerance overrides on the shared settings object."""
    validated = Settings.model_validate({**settings.model_dump(), **overrides})
    for key in overrides:
        setattr(settings, key, getattr(validated, key))
