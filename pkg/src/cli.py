# src/cli.py

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from .config import SuiteConfig, load_config
from .error_handling import ConfigurationError, HarmonicAnalysisError
from .harness import HarnessContext
from .reports import InequalityReport
from .suites import SUITE_CHECKS, SuiteRequest, contraction_study, run_suites
from .utils import save_json, setup_logging, write_series, write_table
from .visualization import ReportVisualizer

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

CHECK_DESCRIPTIONS = {
    "hausdorff_young": "L^p -> L^p' bound of the transform, p in (1, 2]",
    "hausdorff_young_shifted": "L^p' and sup bounds at a shift eta inside the tube",
    "hl_weighted": "weighted Hardy-Littlewood through strong (2,2) and weak (1,1)",
    "hl_young": "L^q bound against the Young-function norm of psi_h, q > 2",
    "hl_ver3_i": "Hardy-Littlewood with weight (xi |c|^-2)^(r/p' - 1), 1 < p <= q <= 2",
    "hl_ver3_ii": "Hardy-Littlewood against ||f||_(p), 2 <= q <= p",
    "flat_hl": "flat Hardy-Littlewood with |lambda|^((2 rho + n)(p - 2))",
    "flat_rs": "flat two-part Hardy-Littlewood (part i or ii)",
    "plancherel": "calibration, isometry and inversion roundtrip",
    "kernel_bound": "|phi_lambda(x)| <= 1 on the closed tube",
    "c_function": "c(rho) = 1 and the two-sided |c|^-2 estimate",
    "closed_forms": "closed-form kernels and Bessel values",
    "flat_limit": "contraction of the curved kernel to the flat one",
    "lorentz_properties": "Lorentz-norm identities on random step functions",
    "oneil": "O'Neil product estimate on random step pairs",
}

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harness",
                                     description="Numerical harness for rank-one hypergeometric transforms")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("config_path", nargs="?", help="TOML configuration")
        sub.add_argument("--config", dest="config_flag", help="TOML configuration")
        sub.add_argument("--out", help="output directory (default: output_dir from the config)")
        sub.add_argument("--seed", type=int, help="seed for the randomised suites")
        sub.add_argument("--plots", action="store_true", help="also write PNG figures")
        sub.add_argument("--log-level", default="INFO")

    run = commands.add_parser("run", help="run the configured suites")
    add_common(run)
    run.add_argument("--refine", type=int, help="grid multiplier for the stability rerun")
    run.add_argument("--suite", help="run only the suite with this id")

    add_common(commands.add_parser("plancherel", help="calibration and isometry only"))
    add_common(commands.add_parser("limits", help="eps-contraction study"))
    commands.add_parser("list-suites", help="list the available checks")
    return parser

def _config_path(args: argparse.Namespace) -> str:
    path = args.config_flag or args.config_path
    if not path:
        raise ConfigurationError("cli", "a configuration file is required (positional or --config)")
    return path

def write_reports(reports: Sequence[InequalityReport], out: str, datum: Dict, seed: int,
                  plots: bool = False) -> Dict:
    """
    Per-suite JSON and CSV, plot-data series, summary.json and timings.json

    Returns:
        the summary dict
    """
    os.makedirs(out, exist_ok=True)
    plot_dir = os.path.join(out, "plots")
    visualizer = ReportVisualizer() if plots else None
    timings = {}
    entries = []
    for report in reports:
        name = report.suite_id or report.inequality_id
        save_json(report.to_dict(), os.path.join(out, f"{name}.json"))
        write_table(report.table_rows(), os.path.join(out, f"{name}.csv"))
        for series, data in report.plots.items():
            write_series(data["x"], data["y"], os.path.join(plot_dir, f"{name}_{series}.csv"),
                         data["x_name"], data["y_name"])
        if visualizer is not None:
            visualizer.plot_report(report, plot_dir)
        timings[name] = dict(report.timings)
        entries.append({"id": name, "check": report.inequality_id, "passed": report.passed,
                        "max_ratio": report.max_ratio, "error": report.error})

    summary = {"suites": entries, "passed": all(entry["passed"] for entry in entries),
               "seed": seed, "datum": datum}
    save_json(summary, os.path.join(out, "summary.json"))
    save_json(timings, os.path.join(out, "timings.json"))
    return summary

def _prepare(args: argparse.Namespace):
    config = load_config(_config_path(args))
    out = args.out or config.output_dir
    setup_logging(args.log_level, os.path.join(out, "harness.log"))
    seed = args.seed if args.seed is not None else config.seed
    return config, out, seed

def _context(config: SuiteConfig) -> HarnessContext:
    return HarnessContext.build(config.datum.build(), config.grid.radial(), config.grid.spectral())

def run_command(args: argparse.Namespace) -> int:
    config, out, seed = _prepare(args)
    requests = config.requests()
    if args.suite is not None and all(r.id != args.suite for r in requests):
        raise ConfigurationError("--suite", f"no suite with id '{args.suite}'")
    if requests:
        ctx = _context(config)
        reports = run_suites(ctx, requests, args.refine, seed, args.suite)
        datum = ctx.datum.describe()
    else:
        reports = []
        datum = config.datum.build().describe()
    summary = write_reports(reports, out, datum, seed, args.plots)
    logging.info(f"{len(reports)} suites, all passed: {summary['passed']}")
    return EXIT_OK if summary["passed"] else EXIT_FAILED

def plancherel_command(args: argparse.Namespace) -> int:
    config, out, seed = _prepare(args)
    ctx = _context(config)
    reports = run_suites(ctx, [SuiteRequest(id="plancherel", check="plancherel")], None, seed)
    summary = write_reports(reports, out, ctx.datum.describe(), seed, args.plots)
    return EXIT_OK if summary["passed"] else EXIT_FAILED

def limits_command(args: argparse.Namespace) -> int:
    config, out, seed = _prepare(args)
    limits = config.limits
    study = contraction_study(config.datum.build(), limits.eps_values, limits.xi, limits.t_max,
                              limits.samples)
    save_json(study, os.path.join(out, "limits.json"))
    write_series(study["eps"], study["errors"], os.path.join(out, "plots", "contraction.csv"),
                 "eps", "sup_error")
    if args.plots:
        ReportVisualizer().plot_contraction(study, os.path.join(out, "plots", "contraction.png"))
    return EXIT_OK if study["monotone"] else EXIT_FAILED

def list_suites_command(args: argparse.Namespace) -> int:
    for check in SUITE_CHECKS:
        print(f"{check:26s} {CHECK_DESCRIPTIONS[check]}")
    return EXIT_OK

COMMANDS = {
    "run": run_command,
    "plancherel": plancherel_command,
    "limits": limits_command,
    "list-suites": list_suites_command,
}

def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the exit status"""
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as e:
        logging.error(str(e))
        print(str(e), file=sys.stderr)
        return EXIT_CONFIG
    except HarmonicAnalysisError as e:
        logging.error(f"Run failed: {str(e)}")
        print(str(e), file=sys.stderr)
        return EXIT_FAILED
