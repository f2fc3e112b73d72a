"""CLI subcommands of tradeoff-lab."""

from .analyze import AnalyzeCommand
from .base import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, Command
from .examples import ExamplesCommand
from .scan import ScanCommand
from .verify import VerifyCommand

COMMANDS = (AnalyzeCommand, VerifyCommand, ScanCommand, ExamplesCommand)

__all__ = [
    "COMMANDS",
    "Command",
    "AnalyzeCommand",
    "VerifyCommand",
    "ScanCommand",
    "ExamplesCommand",
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_USAGE",
]
