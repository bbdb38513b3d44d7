#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Main entry point for nsdecay experiments.

Subcommands:
    run <config>       solve, write norm series and decay reports, run the suites
    verify <config>    run only the inequality suites
    plotdata <dir>     turn the norm series of a finished run into plot files
Exit codes: 0 when every requested verdict passes, 1 otherwise, 2 for usage errors.
"""

import argparse
import csv
import glob
import logging
import os
import sys
from typing import Dict, List, Optional, Tuple

# --- Module Imports ---
try:
    import numpy as np
    import scipy.fft
    from checks.beta_integral import check_beta_integrals
    from checks.besov_equivalence import check_besov_equivalence
    from checks.common import (FAIL, PASS, FieldFamily, InequalityCheck, default_family, gaussian_family,
                               mode_family, random_family, sharp_gaussian_family)
    from checks.embedding import check_embedding
    from checks.product import check_product
    from checks.riesz_bound import check_riesz_bound
    from checks.smoothing import check_smoothing
    from decay.exponents import theoretical_exponent, ExponentSpec
    from decay.report import DecayReport, observable_window, report_from_series
    from solver.duhamel import picard_solve
    from solver.integrator import energy_budget, integrate
    from spaces.kato import rescaled_norm_series
    from spaces.trajectory import Trajectory
    from spectral.grid import GridSpec
    from spectral.initial_data import make_initial_data
    from utils.artifacts import (append_inequality_checks, config_hash, load_manifest, package_versions,
                                 prepare_output_dir, save_manifest, timestamp, write_checkpoints,
                                 write_decay_reports, write_series_csv)
    from utils.config_loader import ExperimentConfig, SuiteSpec, load_experiment
    from utils.errors import BlowUpError, ConfigError, DomainError, NsDecayError, SmallnessViolatedError
    from utils.logger import setup_logging
    from utils.notify import send_run_summary
except ImportError as e:
    print(f"FATAL ERROR: A required module is missing: {e}", file=sys.stderr)
    print("Please run 'pip install -r requirements.txt' to install dependencies.", file=sys.stderr)
    sys.exit(1)

# --- Global Variables ---
log = logging.getLogger(__name__)

__version__ = "1.0.0"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

CHECKS_FILE = "inequality_checks.csv"
DEFAULT_T_COUNT = 16

FAMILY_MAP = {
    "default": default_family,
    "modes": mode_family,
    "gaussians": gaussian_family,
    "sharp_gaussians": sharp_gaussian_family,
    "random": random_family,
}

# --- Suite Functions ---


def _partner(family: FieldFamily) -> FieldFamily:
    """Second factor for product checks: the same members in reverse order."""
    return FieldFamily(f"{family.name}'", family.grid, tuple(reversed(family.builders)))


def _smoothing(family: FieldFamily, suite: SuiteSpec) -> InequalityCheck:
    params = suite.params
    grid = family.grid
    t_grid = params.get("t_grid") or np.geomspace(grid.spacing ** 2, grid.validity_time,
                                                   params.get("t_count", DEFAULT_T_COUNT)).tolist()
    return check_smoothing(family, params["p"], params["q"], params["s"], t_grid, refine=suite.refine)


def _product(family: FieldFamily, suite: SuiteSpec) -> InequalityCheck:
    p = suite.params
    return check_product(family, _partner(family), p["r"], p["p1"], p["q1"], p["p2"], p["q2"], p["s"],
                         refine=suite.refine)


SUITE_MAP = {
    "smoothing": _smoothing,
    "product": _product,
    "beta_integral": lambda family, suite: check_beta_integrals(tuple(c) for c in suite.params["cases"]),
    "riesz_bound": lambda family, suite: check_riesz_bound(family, suite.params["q"], refine=suite.refine),
    "embedding": lambda family, suite: check_embedding(
        family, suite.params["s1"], suite.params["q1"], suite.params["s2"], suite.params["q2"], refine=suite.refine),
    "besov_equivalence": lambda family, suite: check_besov_equivalence(
        family, suite.params["s"], suite.params["q"], refine=suite.refine),
}


def run_suite_job(suite: SuiteSpec, config: ExperimentConfig) -> InequalityCheck:
    """A wrapper to run one inequality suite, turning unexpected errors into a FAIL record."""
    log.info(f"--- Running Suite: {suite.check.upper()} ---")
    grid = GridSpec(config.grid.d, suite.N or config.grid.N, config.grid.L)
    try:
        family = FAMILY_MAP[suite.family](grid)
        return SUITE_MAP[suite.check](family, suite)
    except Exception as e:
        log.error(f"!!! Suite '{suite.check.upper()}' failed with an unexpected error: {e}", exc_info=True)
        return InequalityCheck(suite.check, dict(suite.params), 0, float("nan"), float("nan"), failure=str(e))
    finally:
        log.info(f"--- Finished Suite: {suite.check.upper()} ---")


def run_suites(config: ExperimentConfig, reports_dir: str) -> List[InequalityCheck]:
    path = os.path.join(reports_dir, CHECKS_FILE)
    # each run starts a fresh table; suites append as they finish
    if os.path.exists(path):
        os.remove(path)
    results = []
    for suite in config.suites:
        check = run_suite_job(suite, config)
        append_inequality_checks([check], path)
        results.append(check)
    return results


# --- Solver and Decay Functions ---


def solve(config: ExperimentConfig, manifest: Dict) -> Optional[Trajectory]:
    """Runs the configured solver; failures are recorded in the manifest and return None."""
    u0 = make_initial_data(config.initial_kind, config.initial_params, config.grid)
    try:
        if config.method == "picard":
            traj, estimate = picard_solve(u0, config.solver)
            manifest["contraction"] = estimate.to_dict()
        else:
            traj = integrate(u0, config.solver)
    except SmallnessViolatedError as e:
        log.error(f"Solver reported smallness violation: {e}")
        manifest["contraction"] = e.estimate.to_dict()
        manifest["verdicts"]["solver"] = FAIL
        return None
    except BlowUpError as e:
        log.error(f"Solver blew up: {e}")
        manifest["blow_up_time"] = e.last_valid_time
        manifest["verdicts"]["solver"] = FAIL
        return None

    budget = energy_budget(traj, nonlinear=config.solver.nonlinear)
    manifest["energy_defect"] = budget.defect
    manifest["divergence_defect"] = traj.divergence_defect()
    manifest["verdicts"]["solver"] = PASS
    return traj


def decay_reports(traj: Trajectory, config: ExperimentConfig, paths: Dict[str, str], manifest: Dict) -> List[DecayReport]:
    reports = []
    for spec in config.norm_specs:
        series = rescaled_norm_series(traj, spec.norm, spec.n, spec.kind, config.solver.max_derivative_order)
        write_series_csv(series, paths["series"])
        try:
            window = observable_window(traj, config.decay_window)
            theoretical = theoretical_exponent(spec, traj.grid.d, config.solver.max_derivative_order)
            report = report_from_series(series.window(*window), spec, theoretical, window, config.decay_slack)
        except DomainError as e:
            log.error(f"Decay report {spec.label} refused: {e}")
            manifest["verdicts"][f"decay:{spec.label}"] = FAIL
            continue
        manifest["verdicts"][f"decay:{spec.label}"] = report.verdict
        reports.append(report)
    write_decay_reports(reports, paths["reports"])
    return reports


# --- Main Execution ---


def run_experiment(config_path: str, command: str = "run", threads: int = 1) -> Tuple[int, str]:
    """
    Runs one experiment end to end and returns (exit status, artifact directory).
    ConfigError propagates to the caller.
    """
    config, _ = load_experiment(config_path)
    paths = prepare_output_dir(config.output_dir)
    setup_logging(config.logging, run_dir=config.output_dir)

    log.info("=================================================")
    log.info(f"  nsdecay {command}: {config.name}")
    log.info("=================================================")

    config_dict = config.to_dict()
    manifest = {
        "name": config.name,
        "command": command,
        "config": config_dict,
        "config_hash": config_hash(config_dict),
        "versions": {"nsdecay": __version__, **package_versions()},
        "threads": threads,
        "started": timestamp(config.timezone),
        "verdicts": {},
    }

    with scipy.fft.set_workers(threads):
        if command == "run":
            traj = solve(config, manifest)
            if traj is not None:
                write_checkpoints(traj, paths["trajectory"])
                decay_reports(traj, config, paths, manifest)
            else:
                write_decay_reports([], paths["reports"])
        for check in run_suites(config, paths["reports"]):
            manifest["verdicts"][f"check:{check.name}"] = check.verdict

    manifest["finished"] = timestamp(config.timezone)
    save_manifest(manifest, config.output_dir)

    verdicts = sorted(manifest["verdicts"].items())
    failed = [label for label, verdict in verdicts if verdict != PASS]
    log.info(f"Verdicts: {len(verdicts) - len(failed)}/{len(verdicts)} passed" + (f"; failed: {failed}" if failed else ""))
    send_run_summary(config.notify, config.name, command, verdicts, config.output_dir, manifest["finished"])
    return (EXIT_FAIL if failed else EXIT_PASS), config.output_dir


def _series_dir(report_dir: str) -> str:
    nested = os.path.join(report_dir, "series")
    return nested if os.path.isdir(nested) else report_dir


def emit_plot_data(report_dir: str) -> List[str]:
    """
    For each norm-series CSV writes plot/<stem>.dat (log t, log norm) and
    plot/<stem>_slope.dat, the theoretical power law through the first point.
    """
    series_files = sorted(glob.glob(os.path.join(_series_dir(report_dir), "*.csv")))
    if not series_files:
        log.warning(f"No norm-series CSVs found under '{report_dir}'; nothing to plot.")
        return []
    manifest = load_manifest(report_dir)
    if manifest is None:
        raise DomainError(f"'{report_dir}' has no readable manifest.json; cannot infer the dimension")
    d = int(manifest["config"]["grid"]["d"])

    plot_dir = os.path.join(report_dir, "plot")
    os.makedirs(plot_dir, exist_ok=True)
    written = []
    for path in series_files:
        stem = os.path.splitext(os.path.basename(path))[0]
        with open(path, "r", encoding="utf-8", newline="") as f:
            rows = [row for row in csv.DictReader(f) if float(row["raw_norm"]) > 0 and float(row["t"]) > 0]
        if not rows:
            log.warning(f"Series '{stem}' has no positive samples; skipped.")
            continue
        kind = stem.split("_", 1)[0]
        spec = ExponentSpec(float(rows[0]["s"]), float(rows[0]["q"]), int(rows[0]["n"]), kind)
        slope = -theoretical_exponent(spec, d)
        log_t = np.log([float(r["t"]) for r in rows])
        log_v = np.log([float(r["raw_norm"]) for r in rows])

        data_path = os.path.join(plot_dir, f"{stem}.dat")
        np.savetxt(data_path, np.column_stack([log_t, log_v]), fmt="%.17g")
        slope_path = os.path.join(plot_dir, f"{stem}_slope.dat")
        np.savetxt(slope_path, np.column_stack([log_t, log_v[0] + slope * (log_t - log_t[0])]), fmt="%.17g")
        written.extend([data_path, slope_path])
    log.info(f"Wrote {len(written)} plot files to '{plot_dir}'")
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsdecay", description="Navier-Stokes decay experiments")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for FFTs (1 = deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="solve, report decay and run the configured suites")
    run.add_argument("config")
    verify = sub.add_parser("verify", help="run only the inequality suites")
    verify.add_argument("config")
    plot = sub.add_parser("plotdata", help="write plot-ready files from a run directory")
    plot.add_argument("dir")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "plotdata":
            emit_plot_data(args.dir)
            return EXIT_PASS
        status, output_dir = run_experiment(args.config, args.command, args.threads)
        log.info(f"Artifacts written to '{output_dir}'")
        return status
    except ConfigError as e:
        log.critical(f"Invalid configuration: {e}")
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NsDecayError as e:
        log.critical(f"Run aborted: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
