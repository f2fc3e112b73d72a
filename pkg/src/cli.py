"""Command-line surface: ``tradeoff-lab analyze|verify|scan|examples``."""

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import Optional

from . import __version__
from .commands import COMMANDS, EXIT_CHECK_FAILED, EXIT_USAGE
from .services.settings_manager import LOG_LEVELS, SettingsManager
from .utils.errors import ConvergenceFailure, InternalError, TradeoffLabError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser(settings: Optional[SettingsManager] = None) -> argparse.ArgumentParser:
    settings = settings or SettingsManager()
    parser = argparse.ArgumentParser(
        prog="tradeoff-lab",
        description="Information gain versus disturbance for quantum instruments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level", choices=LOG_LEVELS, type=str.upper, help="root log level (stderr)"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    sub = parser.add_subparsers(dest="command_name", metavar="COMMAND", required=True)
    for command in COMMANDS:
        command(settings).register(sub)
    return parser


def configure_logging(args: argparse.Namespace, settings: SettingsManager) -> None:
    if args.log_level:
        level = args.log_level
    elif args.verbose >= 2:
        level = "DEBUG"
    elif args.verbose == 1:
        level = "INFO"
    else:
        level = settings.get_log_level()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run the chosen subcommand; returns the exit code."""
    settings = SettingsManager()
    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    configure_logging(args, settings)
    try:
        return args.command.run(args)
    except (InternalError, ConvergenceFailure) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_CHECK_FAILED
    except TradeoffLabError as exc:
        print(f"tradeoff-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
