import json

import pandas as pd
import pytest

from embedlift import __version__
from embedlift.cli import EXIT_ERROR, EXIT_FAILS, EXIT_HOLDS, EXIT_HYPOTHESIS, build_parser, main


@pytest.fixture
def write_config(run_dir):
    def write(name: str, text: str):
        path = run_dir / f"{name}.toml"
        path.write_text(text)
        return path

    return write


def _report(out):
    return json.loads((out / "report.json").read_text())


def test_parser_reads_grid():
    args = build_parser().parse_args(["check", "--config", "run.toml", "--grid", "8x16"])
    assert args.grid == (8, 16)
    with pytest.raises(SystemExit):
        build_parser().parse_args(["check", "--config", "run.toml", "--grid", "8by16"])


def test_check_planar(write_config, run_dir):
    config = write_config("planar", '[map]\ncatalog = "planar"\n')
    out = run_dir / "planar"
    assert main(["check", "--config", str(config), "--out", str(out), "--grid", "8x16"]) == EXIT_HOLDS

    report = _report(out)
    assert report["exit_code"] == EXIT_HOLDS
    assert report["embedlift_version"] == __version__
    assert report["metric"] == "power(t=1)"
    criteria = report["results"]["criteria"]
    assert criteria[0]["verdict"] == "holds"
    assert criteria[0]["n_points"] == 1 + 7 * 16
    table = pd.read_csv(out / "criterion_main.csv")
    assert len(table) == 1 + 7 * 16
    assert (out / "embedlift.log").exists()


def test_check_exponential_fails(write_config, run_dir):
    config = write_config("exp4", '[map]\ncatalog = "exp4"\n')
    out = run_dir / "exp4"
    code = main(["check", "--config", str(config), "--out", str(out), "--grid", "8x16", "--variant", "pi2"])
    assert code == EXIT_FAILS
    assert _report(out)["results"]["criteria"][0]["verdict"] == "fails"


def test_check_hypothesis_fails(write_config, run_dir):
    text = '[map]\ncatalog = "planar"\n\n[criterion]\nvariants = ["ahlfors"]\nc = 3\n'
    config = write_config("ahlfors", text)
    out = run_dir / "ahlfors"
    assert main(["check", "--config", str(config), "--out", str(out), "--grid", "8x16"]) == EXIT_HYPOTHESIS


def test_lift_writes_mesh(write_config, run_dir):
    config = write_config("enneper", '[map]\ncatalog = "enneper"\n')
    out = run_dir / "enneper"
    assert main(["lift", "--config", str(config), "--out", str(out), "--grid", "8x16"]) == EXIT_HOLDS
    lines = (out / "surface.obj").read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 1 + 7 * 16
    # 16 triangles around the center and quads between the rings
    assert sum(line.startswith("f ") for line in lines) == 16 + 6 * 16
    assert _report(out)["results"]["mesh"]["n_faces"] == 112


def test_report_with_oracle(write_config, run_dir):
    text = '[map]\ncatalog = "planar"\n\n[run]\noracle = true\n'
    config = write_config("planar_report", text)
    out = run_dir / "planar_report"
    assert main(["report", "--config", str(config), "--out", str(out), "--grid", "8x16"]) == EXIT_HOLDS
    results = _report(out)["results"]
    assert not results["oracle"]["collision"]
    assert (out / "surface.obj").exists()


@pytest.mark.parametrize(
    "text, extra",
    [
        ('[map]\ncatalog = "torus"\n', []),
        ('[map]\ncatalog = "planar"\n', ["--variant", "nope"]),
    ],
)
def test_errors_exit_with_one(write_config, run_dir, text, extra):
    config = write_config("bad", text)
    argv = ["check", "--config", str(config), "--out", str(run_dir / "bad"), *extra]
    assert main(argv) == EXIT_ERROR


def test_missing_config_exits_with_one(run_dir):
    assert main(["check", "--config", str(run_dir / "missing.toml"), "--out", str(run_dir / "missing")]) == EXIT_ERROR
