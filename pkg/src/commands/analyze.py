"""``tradeoff-lab analyze``: full report for one instance file."""

import argparse
from pathlib import Path

from ..services.analysis import analyze_instance
from ..services.instance_io import dumps, load_instance
from ..utils.matrix_codec import FORMAT_TAG
from .base import EXIT_OK, Command, add_optimizer_arguments, analysis_options, emit, positive_int


class AnalyzeCommand(Command):
    name = "analyze"
    help = "compute information gain, disturbance and every tradeoff check for an instance"

    def configure(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("instance", type=Path, help="instance JSON file")
        parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
        parser.add_argument(
            "--include-choi", action="store_true", help="dump recovery Choi matrices"
        )
        parser.add_argument(
            "--no-info", action="store_true", help="skip the accessible-information search"
        )
        parser.add_argument("--search-budget", type=positive_int, help="search candidates")
        parser.add_argument("--seed", type=int, help="seed of the accessible-information search")
        parser.add_argument("--n-max", type=positive_int, help="longest walk for eta (default K^2)")
        add_optimizer_arguments(parser)

    def run(self, args: argparse.Namespace) -> int:
        instance = load_instance(args.instance)
        options = analysis_options(args, self._settings)
        options.with_info = not args.no_info
        options.n_max = args.n_max
        report = analyze_instance(instance, options)
        document = {"format": FORMAT_TAG, "report": report.to_dict(args.include_choi)}
        emit(dumps(document), args.out)
        return EXIT_OK
