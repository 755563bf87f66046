"""Command line interface: embedlift <command> --config run.toml."""

import argparse
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from embedlift import __version__
from embedlift.config import ExperimentConfig, apply_tolerances, load_config
from embedlift.criterion import CriterionReport, evaluate_corollary, evaluate_main
from embedlift.datastore import datastore
from embedlift.errors import ConfigError, EmbedliftError
from embedlift.export import mesh_export, samples_to_csv, write_report
from embedlift.extension import CanonicalFunction, ExtensionMap, fibers_to_obj, require_ucp, ucp_probe
from embedlift.grid import PolarGrid
from embedlift.logger import get_logger, init_logger
from embedlift.metric import ConformalMetric, geodesic_ivp
from embedlift.oracle import boundary_trace, detect_extremal_identifications, surface_collision_scan
from embedlift.oracle.boundary import COMPLETE_S_MAX
from embedlift.settings import settings
from embedlift.surface import HarmonicMapData, to_complex

logger = get_logger(__name__)

EXIT_HOLDS = 0
EXIT_ERROR = 1
EXIT_FAILS = 2
EXIT_HYPOTHESIS = 3

COMMANDS = ("check", "trace", "lift", "extend", "oracle", "report")


@dataclass
class Run:
    """Everything a command needs, built once from the config."""

    config: ExperimentConfig
    surface: HarmonicMapData
    metric: ConformalMetric
    grid: PolarGrid
    out: Path
    results: dict = field(default_factory=dict)
    fails: bool = False
    hypothesis_fails: bool = False

    @property
    def exit_code(self) -> int:
        if self.hypothesis_fails:
            return EXIT_HYPOTHESIS
        return EXIT_FAILS if self.fails else EXIT_HOLDS


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n_r, n_theta = (int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid should read <n_r>x<n_theta>, got '{text}'") from exc
    return n_r, n_theta


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embedlift", description=__doc__)
    parser.add_argument("--version", action="version", version=f"embedlift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "evaluate the configured criteria on the grid",
        "trace": "trace geodesic rays and boundary values",
        "lift": "write the lifted surface as an OBJ mesh",
        "extend": "sample the extension map of the lift",
        "oracle": "scan the lift for self-intersections",
        "report": "run everything enabled in the config",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", type=Path, required=True, help="TOML experiment file")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="seed of random probes")
        p.add_argument("--grid", type=_parse_grid, default=None, help="polar grid <n_r>x<n_theta>")
        p.add_argument("--variant", default=None, help="comma separated criterion variants")
        p.add_argument("--debug", action="store_true", help="log at debug level")
    return parser


def _with_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    update = {}
    if args.grid is not None:
        n_r, n_theta = args.grid
        update["grid"] = config.grid.model_copy(update={"n_r": n_r, "n_theta": n_theta})
    if args.variant is not None:
        variants = [v.strip() for v in args.variant.split(",") if v.strip()]
        data = config.criterion.model_dump()
        data["variants"] = variants
        try:
            update["criterion"] = type(config.criterion).model_validate(data)
        except ValueError as exc:
            raise ConfigError(str(exc), "criterion.variants") from exc
    if args.seed is not None:
        update["run"] = config.run.model_copy(update={"seed": args.seed})
    return config.model_copy(update=update)


def prepare(args: argparse.Namespace) -> Run:
    config = _with_overrides(load_config(args.config), args)
    apply_tolerances(config.tolerances)
    if config.run.seed is not None:
        settings.seed = config.run.seed
    out = args.out or config.run.out or datastore.run_dir(config.name)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    logger = init_logger("embedlift", out / "embedlift.log", debug=args.debug)
    logger.info(f"embedlift {__version__}, config {args.config}, seed {settings.seed}, output {out}")
    surface = config.build_map()
    metric = config.build_metric(surface)
    return Run(config=config, surface=surface, metric=metric, grid=config.grid.build(), out=out)


def _evaluate(run: Run, variant: str) -> CriterionReport:
    section = run.config.criterion
    if variant == "main":
        return evaluate_main(run.surface, run.metric, run.grid, tol_eq=section.tol_eq)
    return evaluate_corollary(
        variant,
        run.surface,
        run.grid,
        t=section.t,
        c=None if section.c is None else to_complex(section.c),
        metric=run.metric,
        T=section.tau,
        delta=run.metric.delta,
        printed_rhs=section.printed_rhs,
        tol_eq=section.tol_eq,
    )


def run_check(run: Run) -> None:
    reports = []
    for variant in run.config.criterion.variants:
        report = _evaluate(run, variant)
        report.to_csv(run.out / f"criterion_{variant}.csv")
        run.fails |= report.verdict == "fails"
        run.hypothesis_fails |= report.verdict == "hypothesis-fails"
        summary = report.model_dump(exclude={"z", "lhs", "rhs", "margin"})
        summary["n_points"] = report.n_points
        reports.append(summary)
    run.results["criteria"] = reports


def _ray_length(run: Run) -> float:
    """Length of traced rays: configured, half the diameter on the plane, else past the boundary."""
    if run.config.trace.s_max is not None:
        return run.config.trace.s_max
    metric = run.metric
    diameter = metric.diameter()
    finite = diameter is not None and math.isfinite(diameter)
    if metric.domain_radius is None:
        if not finite:
            raise ConfigError(f"{metric.label} lives on the plane, give the ray length", "trace.s_max")
        return diameter / 2
    return 2 * diameter if finite and not metric.complete else COMPLETE_S_MAX


def run_trace(run: Run) -> None:
    section = run.config.trace
    z0, s_max = to_complex(section.z0), _ray_length(run)
    frames = []
    failed = 0
    for theta in 2 * np.pi * np.arange(section.n_dirs) / section.n_dirs:
        try:
            path = geodesic_ivp(run.metric, z0, float(theta), s_max)
        except EmbedliftError as exc:
            logger.warning(f"geodesic {theta:.4f} failed: {exc}")
            failed += 1
            continue
        frames.append(path.to_frame().assign(theta=float(theta), termination=path.termination))
    if frames:
        pd.concat(frames, ignore_index=True).to_csv(run.out / "geodesics.csv", index=False)
    run.results["geodesics"] = {
        "n_dirs": section.n_dirs,
        "failed": failed,
        "s_max": s_max,
        "z0": [z0.real, z0.imag],
    }
    if run.config.run.boundary_trace:
        trace = boundary_trace(run.surface, run.metric, z0, section.n_dirs, s_max)
        trace.to_csv(run.out / "boundary_trace.csv")
        identifications = detect_extremal_identifications(trace)
        run.results["boundary_trace"] = {
            "oscillation": trace.oscillation,
            "failed_rays": sum(r.error is not None for r in trace.rays),
            "identifications": identifications,
        }


def run_lift(run: Run) -> None:
    run.results["mesh"] = mesh_export(run.surface, run.grid, run.out / "surface.obj")


def run_oracle(run: Run) -> None:
    report = surface_collision_scan(run.surface, run.grid, domain_radius=run.metric.domain_radius)
    run.fails |= report.collision
    run.results["oracle"] = report


def run_extend(run: Run) -> None:
    section = run.config.extension
    canonical = CanonicalFunction(run.surface, run.metric)
    ucp = ucp_probe(canonical, n_shifts=section.ucp_shifts)
    require_ucp(ucp)
    extension = ExtensionMap(canonical)
    rng = np.random.default_rng(settings.seed)
    points = 2 * (2 * rng.random((section.n_samples, 3)) - 1)
    images = np.full(points.shape, np.nan)
    failed = 0
    for k, p in enumerate(points):
        try:
            images[k] = extension(p)
        except EmbedliftError:
            failed += 1
    samples_to_csv(points, images, run.out / "extension_samples.csv")
    bases = 0.9 * np.linspace(0, 1, 5)[:, None] * np.exp(2j * np.pi * np.arange(8) / 8)[None, :]
    fibers_to_obj([extension.fiber(z) for z in np.unique(bases.ravel())], run.out / "fibers.obj")
    run.results["extension"] = {"ucp": ucp, "n_samples": section.n_samples, "failed": failed}


def run_report(run: Run) -> None:
    flags = run.config.run
    run_check(run)
    run_lift(run)
    if flags.geodesics or flags.boundary_trace:
        run_trace(run)
    if flags.oracle:
        run_oracle(run)
    if flags.extension:
        run_extend(run)


RUNNERS = {
    "check": run_check,
    "trace": run_trace,
    "lift": run_lift,
    "extend": run_extend,
    "oracle": run_oracle,
    "report": run_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = prepare(args)
        RUNNERS[args.command](run)
        write_report(
            {
                "embedlift_version": __version__,
                "command": args.command,
                "config": run.config.model_dump(mode="json"),
                "map": run.surface.model_dump(mode="json"),
                "metric": run.metric.label,
                "seed": settings.seed,
                "results": run.results,
                "exit_code": run.exit_code,
            },
            run.out / "report.json",
        )
    except (EmbedliftError, OSError, ValueError) as exc:
        init_logger("embedlift").error(f"{type(exc).__name__}: {exc}")
        return EXIT_ERROR
    return run.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
