"""Tests for the randomized verification suites."""

import pytest

from src.models import CheckOutcome
from src.services.suites import (
    SUITE_NAMES,
    SUITES,
    SuiteSpec,
    _run_trial,
    at_least,
    at_most,
    bound_fixed_cases,
    eta_hand_cases,
    frame_fixed_cases,
    reproduction_command,
    run_suite,
    run_suites,
)
from src.utils.errors import InvalidParams
from src.utils.randomness import trial_seed

QUICK_TRIALS = {
    "lemma1": 3,
    "theorem1": 2,
    "eq9": 2,
    "eq15": 1,
    "eq17": 2,
    "eq18": 4,
    "eq22": 4,
    "cw": 3,
    "eta-oracle": 3,
    "frame": 2,
    "pinsker": 10,
}


def test_registry():
    assert set(QUICK_TRIALS) == set(SUITES)
    assert SUITE_NAMES[-1] == "all"


def test_check_helpers():
    assert at_least("x", -1e-10, 1e-9).passed
    assert not at_least("x", -1e-8, 1e-9).passed
    inside = at_most("y", 1e-10, 1e-9)
    assert inside.passed
    assert inside.slack == pytest.approx(9e-10)
    assert not at_most("y", 1e-8, 1e-9).passed


@pytest.mark.parametrize("check", eta_hand_cases() + frame_fixed_cases() + bound_fixed_cases())
def test_fixed_cases(check):
    assert check.passed, check.name


def test_eta_fixed_cases_cover_the_default_walk_length():
    checks = {c.name: c for c in eta_hand_cases()}
    assert checks["eta at n_max = 9 vs exhaustive"].passed


@pytest.mark.parametrize("name", sorted(QUICK_TRIALS))
def test_suite_passes(name):
    result = run_suite(name, trials=QUICK_TRIALS[name], seed=11)
    assert result.passed, [t.to_dict() for t in result.failures]


def test_trials_cycle_dimensions_and_seeds():
    result = run_suite("pinsker", trials=4, seed=5, dims=(2, 4))
    assert [t.index for t in result.trials] == [0, 1, 2, 3]
    assert [t.seed for t in result.trials] == [trial_seed(5, i) for i in range(4)]
    assert result.trials[1].reproduce.endswith("--dims 4")


def test_fixed_cases_come_first():
    result = run_suite("eta-oracle", trials=1)
    assert result.trials[0].index == -1
    assert len(result.trials) == 2


def test_replay_matches_the_suite_trial():
    result = run_suite("eq22", trials=3, seed=9, dims=(3,))
    trial = result.trials[2]
    replay = run_suite("eq22", seed=0, dims=(3,), replay_seed=trial.seed)
    assert len(replay.trials) == 1
    assert [c.value for c in replay.trials[0].checks] == [c.value for c in trial.checks]


def test_threads_preserve_order_and_values():
    serial = run_suite("pinsker", trials=6, seed=2)
    parallel = run_suite("pinsker", trials=6, seed=2, threads=3)
    assert [t.to_dict() for t in serial.trials] == [t.to_dict() for t in parallel.trials]


def test_errors_are_recorded_not_raised():
    def broken(rng, d):
        raise InvalidParams("no such thing")

    spec = SuiteSpec("broken", "always fails", broken, 1)
    result = _run_trial(spec, 0, 42, 2)
    assert not result.passed
    assert result.error == "InvalidParams: no such thing"
    assert result.to_dict()["reproduce"] == reproduction_command("broken", 42, 2)


def test_summary_and_worst_slack():
    result = run_suite("pinsker", trials=5, seed=1)
    summary = result.summary()
    assert summary["trials"] == 5
    assert summary["checks"]["pinsker"]["failures"] == 0
    assert result.worst_slack("pinsker") == summary["checks"]["pinsker"]["min_slack"]
    assert "runtime" not in result.to_dict()
    assert "runtime" in result.to_dict(include_runtime=True)


def test_run_all_with_no_random_trials():
    results = run_suites("all", trials=0)
    assert [r.suite for r in results] == list(SUITES)
    assert all(r.passed for r in results)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"name": "nope"},
        {"name": "pinsker", "dims": (1,)},
        {"name": "pinsker", "trials": -1},
    ],
)
def test_invalid_requests(kwargs):
    with pytest.raises(InvalidParams):
        run_suite(**kwargs)


def test_replay_needs_a_single_suite():
    with pytest.raises(InvalidParams):
        run_suites("all", replay_seed=3)


def test_reproduction_command():
    expected = "tradeoff-lab verify --suite cw --trial-seed 7 --dims 3"
    assert reproduction_command("cw", 7, 3) == expected


def test_outcome_serializes_infinite_values():
    outcome = CheckOutcome("d", True, float("inf"), None, float("inf"))
    assert outcome.to_dict()["value"] == "inf"
    assert outcome.to_dict()["slack"] == "inf"
