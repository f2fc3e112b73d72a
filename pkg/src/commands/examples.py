"""``tradeoff-lab examples``: bundled scenarios with their expected properties."""

import argparse
import sys
from pathlib import Path

from ..services.instance_io import dumps
from ..services.scenarios import list_scenarios, load_scenario, run_scenario
from ..utils.matrix_codec import FORMAT_TAG
from .base import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    Command,
    add_optimizer_arguments,
    analysis_options,
    emit,
)


class ExamplesCommand(Command):
    name = "examples"
    help = "list or run the bundled scenarios"

    def configure(self, parser: argparse.ArgumentParser) -> None:
        action = parser.add_mutually_exclusive_group(required=True)
        action.add_argument("--list", action="store_true", help="print scenario names")
        action.add_argument("--run", metavar="NAME", help="run one scenario and its checks")
        parser.add_argument("--out", type=Path, help="write the result here instead of stdout")
        add_optimizer_arguments(parser)

    def run(self, args: argparse.Namespace) -> int:
        if args.list:
            emit("".join(f"{name}\n" for name in list_scenarios()), args.out)
            return EXIT_OK
        scenario = load_scenario(args.run)
        outcome = run_scenario(scenario, analysis_options(args, self._settings))
        emit(dumps({"format": FORMAT_TAG, **outcome.to_dict()}), args.out)
        for check in outcome.checks:
            status = "ok  " if check.passed else "FAIL"
            print(f"{status} {check.name}", file=sys.stderr)
        return EXIT_OK if outcome.passed else EXIT_CHECK_FAILED
