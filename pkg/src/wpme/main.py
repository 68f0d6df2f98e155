"""
wpme command line.

    python -m wpme.main run <scenario>                 solve + check one scenario
    python -m wpme.main identities                      operator identity suites
    python -m wpme.main sweep <scenario> --axis p --values 1.5,2,3
    python -m wpme.main list                            bundled scenarios and check ids

Exit codes: 0 success, 1 check violation, 2 scenario / parameter error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from wpme.config.checks_config import CheckConfig
from wpme.config.settings import settings
from wpme.core.scenario_loader import describe_validation_error, list_bundled_scenarios, load_scenario
from wpme.exceptions import CheckViolationError, WpmeException
from wpme.schemas.scenario import Scenario, SweepAxis
from wpme.services.common import log_error, log_info, set_log_level
from wpme.services.core.orchestrator_harness import run_identities, run_scenario, run_sweep

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def parse_values(tokens: Sequence[str]) -> List[float]:
    """Sweep values given as one comma-separated list, separate arguments, or both."""
    values = []
    for token in tokens:
        for part in token.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                values.append(float(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"not a number: {part!r}")
    if not values:
        raise argparse.ArgumentTypeError("--values needs at least one number")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None,
                        help=f"output directory (default: scenario output_dir, else {settings.out_dir})")
    common.add_argument("--seed", type=int, default=None, help="seed for random initial data and identity fields")
    common.add_argument("--workers", type=int, default=None,
                        help=f"parallel checks / sweep points (default {settings.max_workers})")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="wpme",
        description="Numerical verification of Li–Yau and entropy estimates for the weighted porous medium equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run one scenario")
    run.add_argument("scenario", help="scenario TOML file or bundled scenario name")

    sub.add_parser("identities", parents=[common], help="run the operator identity suites")

    sweep = sub.add_parser("sweep", parents=[common], help="run a scenario over values of one parameter")
    sweep.add_argument("scenario", help="scenario TOML file or bundled scenario name")
    sweep.add_argument("--axis", required=True, choices=[axis.value for axis in SweepAxis])
    sweep.add_argument("--values", required=True, nargs="+", help="e.g. 1.5,2,3 or 1.5 2 3")

    sub.add_parser("list", help="list bundled scenarios and check ids")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    if getattr(args, "verbose", False):
        set_log_level("DEBUG")
    elif getattr(args, "quiet", False):
        set_log_level("WARNING")
    else:
        set_log_level(settings.log_level)


def _load(args: argparse.Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    return scenario


def cmd_run(args: argparse.Namespace) -> int:
    report = run_scenario(_load(args), args.out, args.workers)
    for path in report.output_files:
        print(path)
    if not report.overall_pass:
        failed = [c.id for c in report.checks if not c.passed]
        raise CheckViolationError(f"checks failed: {', '.join(failed)}")
    return EXIT_OK


def cmd_identities(args: argparse.Namespace) -> int:
    report = run_identities(args.seed, args.out)
    for path in report.output_files:
        print(path)
    if not report.overall_pass:
        failed = [c.id for c in report.checks if not c.passed]
        raise CheckViolationError(f"identity suites failed: {', '.join(failed)}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    values = parse_values(args.values)
    result = run_sweep(_load(args), SweepAxis(args.axis), values, args.out, args.workers)
    print(result.csv_path)
    if result.ran == 0:
        log_error("every sweep point was skipped")
        return EXIT_ERROR
    if not result.all_passed:
        raise CheckViolationError("checks failed at one or more sweep points")
    return EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    print("scenarios:")
    for name in list_bundled_scenarios():
        print(f"  {name}")
    print("checks:")
    for check_id in CheckConfig.get_check_order():
        config = CheckConfig.get_check_config(check_id)
        print(f"  {check_id:<26} {config['regime']:<6} {config['label']}")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "identities": cmd_identities,
    "sweep": cmd_sweep,
    "list": cmd_list,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    if args.command == "sweep":
        try:
            parse_values(args.values)
        except argparse.ArgumentTypeError as e:
            parser.error(str(e))

    try:
        return COMMANDS[args.command](args)
    except CheckViolationError as e:
        log_error(str(e))
        return EXIT_VIOLATION
    except ValidationError as e:
        log_error(f"invalid scenario: {describe_validation_error(e)}")
        return EXIT_ERROR
    except WpmeException as e:
        log_error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR
    finally:
        log_info(f"wpme {args.command} finished")


if __name__ == "__main__":
    sys.exit(main())
