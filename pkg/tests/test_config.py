import math

import pytest

from embedlift.config import apply_tolerances, load_config, parse_config
from embedlift.datastore import DataStore
from embedlift.errors import ConfigError
from embedlift.metric import PowerMetric, PullbackMetric
from embedlift.settings import Settings, settings


def test_catalog_map_with_default_metric():
    config = parse_config({"map": {"catalog": "catenoid"}})
    surface = config.build_map()
    metric = config.build_metric(surface)
    assert isinstance(metric, PullbackMetric)
    assert metric.domain_radius is None
    assert metric.delta == pytest.approx(2 * math.pi)
    assert config.criterion.variants == ["main"]


def test_expression_map_with_power_metric():
    config = parse_config({"map": {"h_prime": "1+z", "q": "z/3"}, "metric": {"kind": "power", "t": 0.5}})
    metric = config.build_metric(config.build_map())
    assert metric == PowerMetric(t=0.5)


@pytest.mark.parametrize(
    "data, field",
    [
        ({"map": {}}, "map"),
        ({"map": {"catalog": "torus"}}, "map"),
        ({"map": {"catalog": "planar"}, "grid": {"n_r": 1}}, "grid.n_r"),
        ({"map": {"catalog": "planar"}, "criterion": {"variants": ["nope"]}}, "criterion.variants"),
        ({"map": {"catalog": "planar"}, "tolerances": {"speed": 1}}, "tolerances"),
        ({"map": {"catalog": "planar"}, "colour": "red"}, "colour"),
    ],
)
def test_config_errors_name_the_field(data, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.field == field


def test_epstein_metric_needs_tau():
    config = parse_config({"map": {"catalog": "planar"}, "metric": {"kind": "epstein"}})
    with pytest.raises(ConfigError) as exc:
        config.build_metric(config.build_map())
    assert exc.value.field == "metric.tau"


def test_load_config(run_dir):
    path = run_dir / "strip.toml"
    path.write_text('[map]\ncatalog = "strip"\n\n[criterion]\nvariants = ["nehari", "pi2"]\n')
    config = load_config(path)
    assert config.name == "strip"
    assert config.criterion.variants == ["nehari", "pi2"]

    broken = run_dir / "broken.toml"
    broken.write_text("[map\n")
    with pytest.raises(ConfigError):
        load_config(broken)


def test_apply_tolerances():
    apply_tolerances({"tol_eq": 1e-3, "n_starts": 4})
    assert settings.tol_eq == 1e-3
    assert settings.n_starts == 4
    with pytest.raises(ValueError):
        apply_tolerances({"tol_eq": -1.0})


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("EMBEDLIFT_QUAD_TOL", "1e-12")
    assert Settings().quad_tol == 1e-12


def test_datastore_run_dir(tmp_path):
    store = DataStore(data_dir=tmp_path / "data")
    run_dir = store.run_dir("catenoid waist!")
    assert run_dir == tmp_path / "data" / "runs" / "catenoid_waist"
    assert run_dir.is_dir()
    assert store.logs_dir.is_dir()
