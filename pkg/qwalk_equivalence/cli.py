import json
import joblib
import logging
import argparse

from pathlib import Path

from qwalk_equivalence.config import ExperimentConfig, load_config
from qwalk_equivalence.core import (QuantumWalkError, WaveFunction, compare_operators_on_window, evolve, norm_sq,
                                    verify_unitary_on_window)
from qwalk_equivalence.lattices.honeycomb import HONEYCOMB, dominant_rays, ray_shares
from qwalk_equivalence.pipeline import Pipeline

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2
CHECKS = ("unitarity", "equivalence", "cross-recovery")


def config_hash(config: ExperimentConfig) -> str:
    return joblib.hash({"source": config.source, "steps": config.steps})


def _print_lines(lines: list) -> None:
    for line in lines:
        print(line)


def run(config: ExperimentConfig, out_dir: Path, save_steps: bool = False) -> int:
    lattice = config.lattice_object
    out_dir.mkdir(parents=True, exist_ok=True)
    prefix = f"{lattice.name}-{config.model}"

    pipeline = Pipeline(lattice, config.model, config.transition_field())
    pipeline.fit(config.initial, n_steps=config.steps, workers_count=config.workers, save_steps=save_steps,
                 step_title=str(out_dir / f"{prefix}-native-step"))

    grids = dict()
    if config.output in ("native-grid", "both"):
        grids["native"] = pipeline.native_grid
    if config.output in ("cross-grid", "both"):
        grids["cross"] = pipeline.cross_grid

    files = dict()
    for name, grid in grids.items():
        path = out_dir / f"{prefix}-{name}.csv"
        grid.save(path)
        files[name] = path.name
        logger.info("wrote %d positions to %s", len(grid), path)

    metadata = {
        "config_hash": config_hash(config),
        "lattice": lattice.name,
        "model": config.model,
        "matrix": config.matrix.name,
        "steps": config.steps,
        "support": len(pipeline.state),
        "norm_sq": norm_sq(pipeline.state),
        "runtime_seconds": pipeline.runtime,
        "files": files,
    }
    if lattice.name == HONEYCOMB.name:
        rays, share = dominant_rays(ray_shares(pipeline.site_grid))
        metadata["dominant_rays"] = ",".join(str(angle) for angle in rays)
        metadata["dominant_ray_share"] = share
    (out_dir / f"{prefix}-metadata.json").write_text(json.dumps(metadata, indent=2) + "\n")

    _print_lines([f"{key}={value}" for key, value in metadata.items() if key != "files"] +
                 [f"file.{name}={file}" for name, file in files.items()])
    return EXIT_OK


def check_unitarity(config: ExperimentConfig, radius: int, tol: float) -> (bool, list):
    lattice, field = config.lattice_object, config.transition_field()
    passed, lines = True, []
    for model in ("coined", "scattering"):
        report = verify_unitary_on_window(lattice.step(model, field), lattice.window(model, radius), tol)
        passed &= report.passed
        lines += [f"unitarity.{model}.{line}" for line in report.as_lines()]
    return passed, lines


def check_equivalence(config: ExperimentConfig, radius: int, tol: float) -> (bool, list):
    """U_s against E† U_c E on every scattering label of the window."""
    lattice, field = config.lattice_object, config.transition_field()
    report = compare_operators_on_window(lattice.scattering_step(field), lattice.conjugated_coined_step(field),
                                         lattice.window("scattering", radius), tol)
    return report.passed, [f"equivalence.{line}" for line in report.as_lines()]


def paired_initial_states(config: ExperimentConfig) -> (WaveFunction, WaveFunction):
    """The configured initial state in both bases, coined first."""
    lattice = config.lattice_object
    if config.initial.kind is lattice.coined_kind:
        return config.initial, lattice.map_e_dagger(config.initial)
    return lattice.map_e(config.initial), config.initial


def check_cross_recovery(config: ExperimentConfig, tol: float) -> (bool, list):
    lattice, field = config.lattice_object, config.transition_field()
    coined_initial, scattering_initial = paired_initial_states(config)
    coined = evolve(coined_initial, lattice.coined_step(field), config.steps, workers=config.workers)
    scattering = evolve(scattering_initial, lattice.scattering_step(field), config.steps, workers=config.workers)

    site_deviation = lattice.site_probabilities(coined).max_difference(lattice.cross_site_probabilities(scattering))
    bond_deviation = lattice.bond_probabilities(scattering).max_difference(lattice.cross_bond_probabilities(coined))
    passed = max(site_deviation, bond_deviation) <= tol
    return passed, [
        f"cross-recovery.passed={'true' if passed else 'false'}",
        f"cross-recovery.steps={config.steps}",
        f"cross-recovery.site_max_deviation={site_deviation:.6e}",
        f"cross-recovery.bond_max_deviation={bond_deviation:.6e}",
        f"cross-recovery.tolerance={tol:.6e}",
    ]


def verify(config: ExperimentConfig, checks: list, radius: int, tol: float) -> int:
    passed, lines = True, [f"lattice={config.lattice}", f"matrix={config.matrix.name}", f"window={radius}"]
    for check in checks:
        if check == "unitarity":
            result, check_lines = check_unitarity(config, radius, tol)
        elif check == "equivalence":
            result, check_lines = check_equivalence(config, radius, tol)
        else:
            result, check_lines = check_cross_recovery(config, tol)

        logger.info("%s check %s", check, "passed" if result else "failed")
        passed &= result
        lines += check_lines

    lines.append(f"passed={'true' if passed else 'false'}")
    _print_lines(lines)
    return EXIT_OK if passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk", description="Coined and scattering discrete-time quantum walks.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for every step")
    subparsers = parser.add_subparsers(dest="command", required=True)

    parser_run = subparsers.add_parser("run", help="Evolve a walk and write its probability grids")
    parser_run.add_argument("--config", required=True, help="Experiment configuration file")
    parser_run.add_argument("--out", default=".", help="Output directory (Default = current directory)")
    parser_run.add_argument("--steps", type=int, default=None, help="Overrides experiment.steps")
    parser_run.add_argument("--save-steps", action="store_true", help="Also write the native grid after every step")

    parser_verify = subparsers.add_parser("verify", help="Check unitarity, equivalence and cross recovery")
    parser_verify.add_argument("--config", required=True, help="Experiment configuration file")
    parser_verify.add_argument("--check", choices=CHECKS + ("all",), default="all", help="Check to run (Default = all)")
    parser_verify.add_argument("--steps", type=int, default=None, help="Overrides experiment.steps")
    parser_verify.add_argument("--tol", type=float, default=1e-12, help="Tolerance (Default = 1e-12)")
    parser_verify.add_argument("--window", type=int, default=5, help="Window radius (Default = 5)")
    return parser


def main(argv: list = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")

    try:
        config = load_config(args.config)
        if args.steps is not None:
            config = config.with_steps(args.steps)

        if args.command == "run":
            return run(config, Path(args.out), save_steps=args.save_steps)

        if args.window < 0:
            raise QuantumWalkError(f"--window must be non-negative, got {args.window}")
        checks = list(CHECKS) if args.check == "all" else [args.check]
        return verify(config, checks, args.window, args.tol)
    except QuantumWalkError as error:
        logger.error("%s", error)
        return EXIT_INVALID
