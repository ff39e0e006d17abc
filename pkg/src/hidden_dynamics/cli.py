"""Command-line front end.

    hidden-dynamics <preset> [--config FILE] [--out DIR] [--check]
                    [--kappa X] [--a2 X] [--eps X] [--seed N]

Exit codes: 0 success (and all annotations pass), 1 annotation mismatch,
2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig
from .integrate import IntegrationError
from .presets import PRESET_NAMES, run_experiment

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hidden-dynamics",
        description="Experiments on sliding modes and hidden dynamics near "
                    "two-threshold intersections.")
    parser.add_argument("preset", help="experiment preset name, or 'list'")
    parser.add_argument("--config", type=Path, help="JSON config file with "
                        "{system, switching, integrator, experiment} sections")
    parser.add_argument("--out", type=Path, help="output directory for "
                        "report.json, traj_*.csv and fig_*.svg")
    parser.add_argument("--check", action="store_true",
                        help="fail (exit 1) when any annotation check fails")
    parser.add_argument("--kappa", type=float, help="steepness ratio override")
    parser.add_argument("--a2", type=str, help="coupling coefficient override "
                        "(accepts p/q)")
    parser.add_argument("--eps", type=float, help="regularization width override")
    parser.add_argument("--seed", type=int, help="seed for randomized checks")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.preset == "list":
        for name in PRESET_NAMES:
            print(name)
        return 0

    overrides: dict = {}
    if args.config is not None:
        try:
            rc = RunConfig.load(args.config)
        except (OSError, json.JSONDecodeError, ConfigError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return USAGE_ERROR
        overrides.update(rc.experiment)
        if rc.integrator:
            overrides["integrator"] = rc.integrator
    if args.kappa is not None:
        overrides["kappa"] = args.kappa
    if args.a2 is not None:
        overrides["a2"] = args.a2
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.seed is not None:
        overrides["seed"] = args.seed

    try:
        report = run_experiment(args.preset, overrides, args.out)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return USAGE_ERROR
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except IntegrationError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR

    if not args.quiet:
        print(f"{report.preset}: {len(report.checks)} checks, "
              f"{sum(c.passed for c in report.checks)} passed "
              f"({report.seconds:.1f}s)")
        for c in report.checks:
            mark = "ok " if c.passed else "FAIL"
            detail = f"  [{c.detail}]" if c.detail and not c.passed else ""
            print(f"  [{mark}] {c.name}{detail}")
        if args.out:
            print(f"artifacts: {', '.join(report.artifacts + ['report.json'])} "
                  f"in {args.out}")

    if args.check and not report.passed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
