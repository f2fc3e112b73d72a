"""``tradeoff-lab verify``: randomized verification suites."""

import argparse
from pathlib import Path

from ..models.scenario import SuiteResult
from ..services.instance_io import dumps
from ..services.suites import SUITE_NAMES, SUITES, run_suites
from ..utils.matrix_codec import FORMAT_TAG, format_float
from .base import EXIT_CHECK_FAILED, EXIT_OK, Command, emit, parse_dims, positive_int


def summary_table(results: list[SuiteResult]) -> str:
    """Plain-text table: one row per suite and check with failures and worst slack."""
    rows = [("suite", "check", "failures", "min_slack")]
    for result in results:
        for name, entry in result.summary()["checks"].items():
            slack = entry["min_slack"]
            rows.append(
                (
                    result.suite,
                    name,
                    str(entry["failures"]),
                    slack if isinstance(slack, str) else format_float(slack),
                )
            )
        for trial in result.trials:
            if trial.error is not None:
                rows.append((result.suite, trial.error, "1", ""))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    failed = [t for r in results for t in r.failures]
    lines.append("")
    lines.append(f"{sum(len(r.trials) for r in results)} trials, {len(failed)} failed")
    lines.extend(f"reproduce: {t.reproduce}" for t in failed)
    return "\n".join(lines) + "\n"


class VerifyCommand(Command):
    name = "verify"
    help = "run randomized verification suites"

    def configure(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--suite", required=True, choices=SUITE_NAMES, help="suite name")
        parser.add_argument("--trials", type=int, help="random trials (suite default otherwise)")
        parser.add_argument("--seed", type=int, default=0, help="suite seed")
        parser.add_argument(
            "--dims", type=parse_dims, default=(2, 3), help="comma-separated dimensions"
        )
        parser.add_argument(
            "--trial-seed", type=int, help="replay the single trial with this derived seed"
        )
        parser.add_argument("--threads", type=positive_int, help="worker threads")
        parser.add_argument("--json", action="store_true", help="emit JSON instead of a table")
        parser.add_argument(
            "--include-runtime", action="store_true", help="add timings to the JSON output"
        )
        parser.add_argument("--out", type=Path, help="write output here instead of stdout")
        parser.epilog = "suites: " + ", ".join(
            f"{name} ({spec.description})" for name, spec in SUITES.items()
        )

    def run(self, args: argparse.Namespace) -> int:
        results = run_suites(
            args.suite,
            trials=args.trials,
            seed=args.seed,
            dims=args.dims,
            threads=self.threads(args),
            replay_seed=args.trial_seed,
        )
        if args.json:
            document = {
                "format": FORMAT_TAG,
                "passed": all(r.passed for r in results),
                "suites": [r.to_dict(args.include_runtime) for r in results],
            }
            emit(dumps(document), args.out)
        else:
            emit(summary_table(results), args.out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED
