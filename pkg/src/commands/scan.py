"""``tradeoff-lab scan``: CSV sweep over a two-state family."""

import argparse
from pathlib import Path

from ..services.recovery import RecoveryOptimizer
from ..services.scan import FAMILIES, run_scan
from .base import EXIT_CHECK_FAILED, EXIT_OK, Command, emit, positive_int


class ScanCommand(Command):
    name = "scan"
    help = "sweep a two-state family and write one CSV row per point"

    def configure(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--family", choices=sorted(FAMILIES), default="two-state-angle", help="scan family"
        )
        parser.add_argument("--steps", type=positive_int, default=20, help="number of rows")
        parser.add_argument("--threads", type=positive_int, help="worker threads")
        parser.add_argument("--out", type=Path, help="write the CSV here instead of stdout")

    def run(self, args: argparse.Namespace) -> int:
        optimizer = RecoveryOptimizer(
            tol=self._settings.get_recovery_tol(),
            max_iter=self._settings.get_recovery_max_iter(),
        )
        result = run_scan(args.family, args.steps, optimizer, threads=self.threads(args))
        emit(result.to_csv(), args.out)
        return EXIT_CHECK_FAILED if result.violations else EXIT_OK
