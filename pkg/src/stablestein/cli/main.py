#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
stablestein command line

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 request outside the supported scope.
"""

import argparse
import sys

from stablestein.cli import commands
from stablestein.cli.config import load_config
from stablestein.errors import ConfigError, NonIntegrable, OutOfScope

__all__ = [
    "COMMANDS",
    "build_parser",
    "main",
]

COMMANDS = {
    "cf": commands.cmd_cf,
    "density": commands.cmd_density,
    "sample": commands.cmd_sample,
    "stein-check": commands.cmd_stein_check,
    "solve": commands.cmd_solve,
    "bound-sweep": commands.cmd_bound_sweep,
    "sd-check": commands.cmd_sd_check,
}

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_SCOPE = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stablestein",
        description="Stein's method experiments for stable and infinitely divisible laws")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        p.add_argument("--config", default=None, help="INI configuration file")
        p.add_argument("--seed", type=int, default=None, help="Override [mc] seed")
        p.add_argument("--workers", type=int, default=None, help="Override [mc] workers")
        p.add_argument("--out", default=None, help="Override [output] out folder")
        p.add_argument("--overwrite", action="store_true", help="Overwrite existing files")
        p.add_argument("--quiet", action="store_true", help="No progress output")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.seed is not None:
        overrides["mc", "seed"] = args.seed
    if args.workers is not None:
        overrides["mc", "workers"] = args.workers
    if args.out is not None:
        overrides["output", "out"] = args.out
    if args.overwrite:
        overrides["output", "overwrite"] = True
    if args.quiet:
        overrides["output", "verbose"] = False
    try:
        config = load_config(args.config, overrides)
        COMMANDS[args.command](config)
    except OutOfScope as err:
        print(f"stablestein {args.command}: {err}", file=sys.stderr)
        return EXIT_SCOPE
    except (NonIntegrable, ArithmeticError) as err:
        print(f"stablestein {args.command}: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as err:
        print(f"stablestein {args.command}: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
