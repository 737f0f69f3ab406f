"""
Command-line front end
Parses global flags, loads configuration and maps errors onto exit codes
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..config import ConfigManager
from ..errors import InputError, IsingTrafficError
from .calibrate_command import cmd_calibrate
from .maxcut_command import cmd_maxcut
from .tap_command import cmd_tap
from .tools import cmd_fit, cmd_gen, cmd_oracle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVE = 3
EXIT_IO = 4

BUNDLED_GRID = Path(__file__).resolve().parents[2] / "networks" / "grid_5x5.net"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ising_traffic",
        description="Coherent Ising machine simulation and traffic assignment in Ising form")
    parser.add_argument("--config", help="User YAML merged over the pinned defaults")
    parser.add_argument("--seed", type=int, help="Base seed of every batch")
    parser.add_argument("--trials", type=int, help="Trials per solver")
    parser.add_argument("--out", help="Output directory")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    maxcut = commands.add_parser("maxcut", help="GFSNN-CIM vs SNN-CIM on Max-Cut instances")
    maxcut.add_argument("instances", nargs="*", help="rudy files (a seeded instance is generated if none)")
    maxcut.add_argument("--law", choices=["pm1s", "pw01", "w01"], help="Weight law of the generated instance")
    maxcut.add_argument("--nodes", type=int, help="Nodes of the generated instance")
    maxcut.add_argument("--density", type=float, help="Edge density of the generated instance")
    maxcut.add_argument("--instance-seed", type=int, help="Seed of the generated instance")
    maxcut.add_argument("--references", help="CSV instance,reference_cut")
    maxcut.add_argument("--oracle", action="store_true", help="Brute-force the optimum (small instances)")

    tap = commands.add_parser("tap", help="Solve a traffic assignment instance")
    tap.add_argument("network", nargs="?", default=str(BUNDLED_GRID), help="Network file")
    tap.add_argument("--solvers", help="Comma-separated subset of fw,dia,sa,snn,gfsnn")
    tap.add_argument("--group-size", type=float, help="Vehicles per group")
    tap.add_argument("--routes", type=int, help="Alternative routes per group")
    tap.add_argument("--lambda", dest="lam", type=float, help="Fixed one-hot penalty coefficient")
    tap.add_argument("--two-step", action="store_true", help="Shared fit, then per-link refit")
    tap.add_argument("--dia-trials", type=int, help="DIA assignment orders")
    tap.add_argument("--fw-iters", type=int, help="Frank-Wolfe iterations")

    fit = commands.add_parser("fit", help="Quadratic fit diagnostics of one link")
    fit.add_argument("network", nargs="?", default=str(BUNDLED_GRID), help="Network file")
    fit.add_argument("--link", required=True, help="Link id")
    fit.add_argument("--interval", nargs=2, type=float, required=True, metavar=("LO", "HI"))

    oracle = commands.add_parser("oracle", help="Brute-force ground state of a dumped Ising model")
    oracle.add_argument("model", help="Ising dump file")
    oracle.add_argument("--max-spins", type=int, default=24)

    calibrate = commands.add_parser("calibrate", help="Grid-search the oscillator parameters")
    calibrate.add_argument("network", nargs="?", default=str(BUNDLED_GRID),
                           help="TAP network scored alongside Max-Cut")
    calibrate.add_argument("--no-tap", action="store_true", help="Score Max-Cut instances only")
    calibrate.add_argument("--per-law", type=int, help="Max-Cut instances per weight law")

    gen = commands.add_parser("gen", help="Write generated instances")
    gen.add_argument("kind", choices=["maxcut", "grid", "grid-synthetic", "beijing"])
    gen.add_argument("output", help="File to write")
    gen.add_argument("--law", choices=["pm1s", "pw01", "w01"])
    gen.add_argument("--nodes", type=int)
    gen.add_argument("--density", type=float)
    gen.add_argument("--instance-seed", type=int)
    return parser


def _apply_overrides(config: ConfigManager, args: argparse.Namespace):
    """Command-line flags take precedence over file values."""
    overrides = {
        "batch.seed": args.seed,
        "batch.trials": args.trials,
        "output.directory": args.out,
        "maxcut.law": getattr(args, "law", None),
        "maxcut.n_nodes": getattr(args, "nodes", None),
        "maxcut.density": getattr(args, "density", None),
        "maxcut.instance_seed": getattr(args, "instance_seed", None),
        "maxcut.reference_path": getattr(args, "references", None),
        "tap.group_size": getattr(args, "group_size", None),
        "tap.routes_per_group": getattr(args, "routes", None),
        "tap.lambda_override": getattr(args, "lam", None),
        "tap.dia_trials": getattr(args, "dia_trials", None),
        "tap.fw_max_iters": getattr(args, "fw_iters", None),
        "calibrate.instances_per_law": getattr(args, "per_law", None),
    }
    if getattr(args, "solvers", None):
        overrides["tap.solvers"] = [s.strip() for s in args.solvers.split(",") if s.strip()]
    if getattr(args, "two_step", False):
        overrides["tap.two_step"] = True
    if getattr(args, "oracle", False):
        overrides["maxcut.oracle"] = True
    if getattr(args, "no_tap", False):
        overrides["calibrate.tap"] = False
    for key, value in overrides.items():
        if value is not None:
            config.set(key, value)


def run(args: argparse.Namespace) -> int:
    config = ConfigManager(args.config)
    _apply_overrides(config, args)
    settings = config.run_config()
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else settings.logging.level.upper())

    if args.command == "maxcut":
        cmd_maxcut(args.instances, settings)
    elif args.command == "tap":
        cmd_tap(args.network, settings)
    elif args.command == "fit":
        cmd_fit(args.network, args.link, tuple(args.interval), settings)
    elif args.command == "oracle":
        cmd_oracle(args.model, args.max_spins)
    elif args.command == "calibrate":
        cmd_calibrate(args.network, settings)
    elif args.command == "gen":
        cmd_gen(args.kind, args.output, settings)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except InputError as e:
        logger.error(f"Input error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except IsingTrafficError as e:
        logger.error(f"Solve error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SOLVE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
