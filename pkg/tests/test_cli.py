"""Tests for the tradeoff-lab command line, run in-process."""

import json
import logging

import pytest

from src import __version__
from src.cli import main
from src.commands import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE
from src.commands import verify as verify_command
from src.commands.base import parse_dims
from src.models import CheckOutcome, SuiteResult, TrialResult
from src.utils.matrix_codec import FORMAT_TAG

FAST = ["--tol", "1e-7", "--max-iter", "3000"]


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def instance_file(tmp_path):
    doc = {
        "format": FORMAT_TAG,
        "name": "pair",
        "ensemble": {
            "dim": 2,
            "entries": [
                {"label": "0", "p": 0.5, "state": [1, 0]},
                {"label": "+", "p": 0.5, "state": [0.7071067811865476, 0.7071067811865476]},
            ],
        },
        "instrument": {"builtin": "von_neumann", "dim": 2},
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_missing_command_is_a_usage_error(capsys):
    assert main([]) == EXIT_USAGE


def test_parse_dims():
    assert parse_dims("2,3") == (2, 3)


class TestAnalyze:
    def test_report_on_stdout(self, instance_file, capsys):
        assert main(["analyze", str(instance_file), "--no-info", *FAST]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["format"] == FORMAT_TAG
        report = document["report"]
        assert report["name"] == "pair"
        assert report["mutual_info"] == pytest.approx(0.3112781245, abs=1e-9)
        assert report["info"] is None
        assert report["irreducibility"]["eta"] == pytest.approx(0.3535533906, abs=1e-9)

    def test_report_to_file_with_choi(self, instance_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        args = ["analyze", str(instance_file), "--no-info", "--include-choi", "--out", str(out)]
        assert main([*args, *FAST]) == EXIT_OK
        assert capsys.readouterr().out == ""
        report = json.loads(out.read_text(encoding="utf-8"))["report"]
        branches = report["disturbance"]["recovery"]["entanglement"]["branches"]
        assert all("choi" in b for b in branches)

    def test_invalid_instance(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"format": "nope"}', encoding="utf-8")
        assert main(["analyze", str(path)]) == EXIT_USAGE
        assert "$.format" in capsys.readouterr().err


class TestVerify:
    def test_table(self, capsys):
        assert main(["verify", "--suite", "pinsker", "--trials", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[0].split() == ["suite", "check", "failures", "min_slack"]
        assert "5 trials, 0 failed" in out

    def test_json(self, capsys):
        assert main(["verify", "--suite", "eq22", "--trials", "3", "--json"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["passed"] is True
        assert document["suites"][0]["suite"] == "eq22"
        assert "runtime" not in document["suites"][0]

    def test_replay(self, capsys):
        args = ["verify", "--suite", "pinsker", "--trial-seed", "17", "--dims", "3", "--json"]
        assert main(args) == EXIT_OK
        suite = json.loads(capsys.readouterr().out)["suites"][0]
        assert suite["dims"] == [3]
        assert [t["seed"] for t in suite["trials"]] == [17]

    @pytest.mark.parametrize(
        "args",
        [["--suite", "nope"], ["--suite", "cw", "--dims", "1"], ["--suite", "cw", "--dims", "x"]],
    )
    def test_usage_errors(self, args, capsys):
        assert main(["verify", *args]) == EXIT_USAGE


class TestScan:
    def test_csv_to_file(self, tmp_path):
        out = tmp_path / "scan.csv"
        args = ["scan", "--family", "two-state-weight", "--steps", "2", "--out", str(out)]
        assert main(args) == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("weight,eta,zeta")
        assert len(lines) == 3


class TestExamples:
    def test_list(self, capsys):
        assert main(["examples", "--list"]) == EXIT_OK
        names = capsys.readouterr().out.split()
        assert "cw_qubit" in names

    def test_run(self, capsys):
        assert main(["examples", "--run", "cw_qubit", *FAST]) == EXIT_OK
        captured = capsys.readouterr()
        assert json.loads(captured.out)["passed"] is True
        assert "FAIL" not in captured.err

    def test_unknown_scenario(self, capsys):
        assert main(["examples", "--run", "nope"]) == EXIT_USAGE
        assert "unknown scenario" in capsys.readouterr().err

    def test_list_and_run_are_exclusive(self, capsys):
        assert main(["examples", "--list", "--run", "cw_qubit"]) == EXIT_USAGE


def test_check_failures_exit_with_one(monkeypatch, capsys):
    def failing(*args, **kwargs):
        trial = TrialResult(0, 1, (CheckOutcome("c", False),), reproduce="replay")
        return [SuiteResult("cw", 0, (2,), (trial,))]

    monkeypatch.setattr(verify_command, "run_suites", failing)
    assert main(["verify", "--suite", "cw", "--trials", "1"]) == EXIT_CHECK_FAILED
    assert "reproduce: replay" in capsys.readouterr().out
