"""Shared plumbing of the CLI subcommands."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from ..services.analysis import AnalysisOptions
from ..services.settings_manager import SettingsManager

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def parse_dims(value: str) -> tuple[int, ...]:
    """``"2,3"`` -> ``(2, 3)``; argparse type for ``--dims``."""
    try:
        dims = tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {value!r}"
        ) from exc
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError(f"dimensions must be integers >= 2, got {value!r}")
    return dims


def positive_int(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from exc
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}")
    return parsed


def emit(text: str, out: Optional[Path]) -> None:
    """Write a finished document to ``out`` or stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text, encoding="utf-8")
    logger.info("wrote %s", out)


class Command:
    """One subcommand: ``register`` adds its parser, ``run`` executes it."""

    name = ""
    help = ""

    def __init__(self, settings: SettingsManager):
        self._settings = settings

    def register(self, sub: argparse._SubParsersAction) -> argparse.ArgumentParser:
        parser = sub.add_parser(self.name, help=self.help, description=self.help)
        parser.set_defaults(command=self)
        self.configure(parser)
        return parser

    def configure(self, parser: argparse.ArgumentParser) -> None:
        raise NotImplementedError

    def run(self, args: argparse.Namespace) -> int:
        raise NotImplementedError

    def threads(self, args: argparse.Namespace) -> int:
        value = getattr(args, "threads", None)
        return value if value is not None else self._settings.get_threads()


def add_optimizer_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("recovery optimizer")
    group.add_argument("--tol", type=float, help="improvement tolerance over 50 iterations")
    group.add_argument("--max-iter", type=positive_int, help="iteration cap per branch")
    group.add_argument(
        "--strict", action="store_true", help="fail instead of flagging non-converged recoveries"
    )
    group.add_argument("--threads", type=positive_int, help="worker threads")


def analysis_options(args: argparse.Namespace, settings: SettingsManager) -> AnalysisOptions:
    """Settings first, then whatever the command line overrides."""
    options = AnalysisOptions.from_settings(settings)
    if getattr(args, "tol", None) is not None:
        options.recovery_tol = args.tol
    if getattr(args, "max_iter", None) is not None:
        options.recovery_max_iter = args.max_iter
    if getattr(args, "threads", None) is not None:
        options.threads = args.threads
    if getattr(args, "search_budget", None) is not None:
        options.search_budget = args.search_budget
    if getattr(args, "seed", None) is not None:
        options.seed = args.seed
    options.strict = bool(getattr(args, "strict", False))
    return options
