"""Command line entry points: ``run`` a configured case, ``verify`` a
named check suite.

Exit codes: 0 success, 2 invalid configuration, 3 solver abort,
4 verification failure.
"""

import argparse
import sys

from .cases import ConfigError, case_library, load_config, replace_fields
from .runner import SolverAbort, run_case
from .verification import SUITES

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ABORT = 3
EXIT_VERIFY = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hybriddg",
        description="entropy-stable hybrid DGSEM/FV Euler solver on "
                    "moving curved meshes")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured case")
    run.add_argument("--config", help="configuration file")
    run.add_argument("--output-dir", default=None,
                     help="override the output directory")
    run.add_argument("--seed", type=int, default=None,
                     help="override the random seed")
    run.add_argument("--case", default=None, dest="case_tag",
                     help="start from a library case instead of a file")

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True,
                        choices=sorted(SUITES),
                        help="which checks to run")
    return parser


def _cmd_run(args):
    try:
        if args.case_tag is not None:
            cfg = case_library(args.case_tag)
        elif args.config is not None:
            cfg = load_config(args.config)
        else:
            print("error: one of --config or --case is required",
                  file=sys.stderr)
            return EXIT_CONFIG
        if args.seed is not None:
            cfg = replace_fields(cfg, seed=args.seed)
        if args.output_dir is not None:
            cfg = replace_fields(cfg, output_dir=args.output_dir)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_case(cfg)
    except SolverAbort as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    last = result.diagnostics.rows[-1]
    print(f"completed t = {last[0]:g} with {len(result.diagnostics.rows)} "
          f"diagnostic samples in {cfg.output_dir if args.output_dir is None else args.output_dir}")
    return EXIT_OK


def _cmd_verify(args):
    result = SUITES[args.suite]()
    print(result.line())
    return EXIT_OK if result.passed else EXIT_VERIFY


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
