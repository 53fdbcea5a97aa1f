"""
Command-line surface for twistlab.

Exit codes follow a three-state convention so that callers can tell "a
mathematical check failed" from "the run itself could not start":

- ``0``: every gating check passed
- ``1``: at least one gating check failed (the report carries a witness)
- ``2``: config, usage or budget error (one-line diagnostic on stderr)

Key Concepts Demonstrated:
- Subcommands sharing one set of flags via a parent parser
- Config profile plus CLI overrides resolved into ``RunSettings``
- Deterministic JSON (sorted keys) or a PASS/FAIL text table
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import yaml

from .. import configure
from ..errors import TwistLabError
from ..report import VerificationReport
from .pipelines import (
    Pipeline,
    RunSettings,
    run_build,
    run_dual,
    run_experiment,
    run_gauge_check,
    run_pointed,
    run_qcheck,
    run_report,
    run_validate,
    run_verify_hopf,
    run_verify_twist,
)
from .session import load_session

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE_ERROR = 2

SESSION_COMMANDS: dict[str, Callable[[Pipeline, argparse.Namespace], VerificationReport]] = {
    "validate": lambda p, _: run_validate(p),
    "build": lambda p, _: run_build(p),
    "verify-twist": lambda p, _: run_verify_twist(p),
    "verify-hopf": lambda p, _: run_verify_hopf(p),
    "dual": lambda p, args: run_dual(p, args.coset),
    "pointed": lambda p, _: run_pointed(p),
    "gauge-check": lambda p, _: run_gauge_check(p),
    "experiment": lambda p, _: run_experiment(p),
    "report": lambda p, _: run_report(p),
}


class UsageError(Exception):
    """Raised by the parser instead of exiting, so ``main`` owns exit codes."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json", help="Report format")
    common.add_argument("--output", type=Path, help="Write the report here instead of stdout")
    common.add_argument("--max-dim", type=int, help="Refuse instances with dim A above this cap")
    common.add_argument("--parallel", type=int, metavar="N", help="Worker threads for independent checks")
    common.add_argument("--timings", action="store_true", help="Include per-stage wall-clock timings")
    common.add_argument("--env", help="Config profile: development, testing or production")

    parser = _Parser(
        prog="twistlab",
        description="Build and verify twisted bosonizations of quantum linear spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    qcheck = sub.add_parser("qcheck", parents=[common], help="Exhaustive q-binomial identity sweep")
    qcheck.add_argument("--max-N", dest="max_n", type=int, help="Largest N to sweep")
    for name in SESSION_COMMANDS:
        command = sub.add_parser(name, parents=[common], help=f"Run the {name} pipeline")
        command.add_argument("config", type=Path, help="Session config (JSON or YAML)")
        if name == "dual":
            command.add_argument("--coset", type=int, help="Index of the coset representative (default: all)")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse CLI arguments."""
    return build_parser().parse_args(argv)


def _settings(config_class: type, args: argparse.Namespace) -> RunSettings:
    return RunSettings(
        max_dim=args.max_dim if args.max_dim is not None else config_class.MAX_DIM,
        workers=args.parallel if args.parallel is not None else config_class.WORKERS,
        seed=config_class.SEED,
        random_triples=config_class.RANDOM_TRIPLES,
        qcheck_max_n=config_class.QCHECK_MAX_N,
        contracts_dir=Path(config_class.CONTRACTS_DIR),
    )


def _emit(report: VerificationReport, args: argparse.Namespace) -> None:
    if args.format == "json":
        text = report.to_json(include_timings=args.timings)
    else:
        text = report.render_text(include_timings=args.timings)
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
        logger.info("Report written to %s", args.output)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    """
    Entry point.

    Returns:
        ``EXIT_PASS`` (0) if every gating check passed,
        ``EXIT_CHECK_FAILED`` (1) if any failed, or
        ``EXIT_USAGE_ERROR`` (2) on config, usage or budget errors.
    """
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    try:
        settings = _settings(configure(args.env), args)
        if settings.max_dim < 1 or settings.workers < 1:
            raise UsageError("--max-dim and --parallel must be positive")
        if args.command == "qcheck":
            max_n = args.max_n if args.max_n is not None else settings.qcheck_max_n
            if max_n < 2:
                raise UsageError("--max-N must be at least 2")
            report = run_qcheck(max_n)
        else:
            session = load_session(args.config, settings.contracts_dir)
            report = SESSION_COMMANDS[args.command](Pipeline(session, settings), args)
        _emit(report, args)
    except (TwistLabError, UsageError, OSError, yaml.YAMLError, RuntimeError) as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILED
