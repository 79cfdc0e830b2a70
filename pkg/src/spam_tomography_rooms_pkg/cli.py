"""Command-line front end: ``spam-tomo [global flags] <command> [options]``.

Exit status is 0 on success, 2 when results were written but some fit did not
converge, 1 on any configuration, I/O or check failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from typing import Sequence

from loguru import logger
from pydantic import ValidationError

from .actions import fit_data, oracle_suite, process_sweep, simulate_data, spam_sweep
from .actions.base import ActionResponse
from .configuration import CustomAddonConfig, SweepConfig, load_sweep_config
from .configuration.addonconfig import ADDON_TYPE
from .utils.errors import TomographyError
from .utils.methods import Method

EXIT_CODES = {200: 0, 206: 2}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spam-tomo", description="SPAM-aware qubit state and process tomography.")
    parser.add_argument("--config", help="INI sweep configuration")
    parser.add_argument("--seed", type=int, help="master seed (overrides the config)")
    parser.add_argument("--out", help="output path (overrides the config)")
    parser.add_argument("--paper-weights", action="store_true", default=None, help="weight residuals by 1/σ instead of 1/σ²")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spam-sweep", help="SPAM convergence sweep over N")
    sub.add_parser("process-sweep", help="Hadamard reconstruction sweep over N_spam and N")

    fit = sub.add_parser("fit", help="fit one dataset CSV")
    fit.add_argument("--data", required=True, help="dataset CSV")
    fit.add_argument("--method", required=True, type=str.upper, choices=[m.value for m in Method])
    fit.add_argument("--truth", help="truth JSON written by 'simulate'")

    simulate = sub.add_parser("simulate", help="sample one dataset from the seeded ground truth")
    simulate.add_argument("--method", required=True, type=str.upper, choices=[m.value for m in Method])
    simulate.add_argument("--shots", required=True, type=lambda s: int(float(s)), help="shots per cell, e.g. 1e6")
    simulate.add_argument("--run", type=int, default=0)

    oracle = sub.add_parser("oracle", help="run the brute-force verification suite")
    oracle.add_argument("--cases", type=int, default=100)
    return parser


def configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO")


def sweep_config_from_args(args: argparse.Namespace) -> SweepConfig:
    cfg = load_sweep_config(args.config) if args.config else SweepConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output"] = args.out
    if args.paper_weights is not None:
        overrides["paper_weights"] = args.paper_weights
    if not overrides:
        return cfg
    return SweepConfig.model_validate({**cfg.model_dump(), **overrides})


def dispatch(args: argparse.Namespace, config: CustomAddonConfig) -> ActionResponse:
    if args.command == "spam-sweep":
        return spam_sweep(config, output=args.out)
    if args.command == "process-sweep":
        return process_sweep(config, output=args.out)
    if args.command == "fit":
        return fit_data(config, method=args.method, data=args.data, truth=args.truth, output=args.out)
    if args.command == "simulate":
        return simulate_data(config, method=args.method, shots=args.shots, run=args.run, output=args.out or "dataset.csv")
    return oracle_suite(config, cases=args.cases, output=args.out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        sweep = sweep_config_from_args(args)
    except (TomographyError, ValidationError, ValueError, configparser.Error) as e:
        logger.error(f"[cli] invalid configuration: {e}")
        return 1
    config = CustomAddonConfig(id="cli", type=ADDON_TYPE, name="spam-tomo", description="command line", sweep=sweep)
    response = dispatch(args, config)
    if response.message:
        print(response.message)
    return EXIT_CODES.get(response.code, 1)


if __name__ == "__main__":
    sys.exit(main())
