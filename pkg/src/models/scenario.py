"""Instances, scenario checks and verification-suite results."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from ..utils.errors import InstanceValidationError
from ..utils.matrix_codec import FORMAT_TAG, json_float
from .ensemble import Ensemble
from .instrument import QuantumInstrument
from .reports import TradeoffReport


@dataclass(frozen=True, eq=False)
class Instance:
    """One (ensemble, instrument) pair to analyze."""

    name: str
    ensemble: Ensemble
    instrument: QuantumInstrument
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_TAG,
            "name": self.name,
            "description": self.description,
            "ensemble": self.ensemble.to_dict(),
            "instrument": self.instrument.to_dict(),
        }


class CheckOp(Enum):
    """Comparison applied by a scenario check."""

    APPROX = "approx"
    LE = "le"
    GE = "ge"
    GT = "gt"
    LT = "lt"
    IS_TRUE = "true"
    IS_FALSE = "false"
    IS_NONE = "none"


@dataclass(frozen=True)
class CheckSpec:
    """Expected property of a named report quantity.

    ``approx`` passes when |value - expected| <= tol, ``le``/``ge`` allow tol of
    slack, ``gt``/``lt`` are strict.
    """

    quantity: str
    op: CheckOp
    expected: Optional[float] = None
    tol: float = 1e-9

    @property
    def name(self) -> str:
        if self.expected is None:
            return f"{self.quantity} {self.op.value}"
        return f"{self.quantity} {self.op.value} {self.expected:g}"

    def evaluate(self, value: Any) -> "CheckOutcome":
        if self.op is CheckOp.IS_NONE:
            passed = value is None
        elif self.op is CheckOp.IS_TRUE:
            passed = value is True
        elif self.op is CheckOp.IS_FALSE:
            passed = value is False
        elif value is None or isinstance(value, bool):
            passed = False
        elif self.op is CheckOp.APPROX:
            passed = abs(value - self.expected) <= self.tol
        elif self.op is CheckOp.LE:
            passed = value <= self.expected + self.tol
        elif self.op is CheckOp.GE:
            passed = value >= self.expected - self.tol
        elif self.op is CheckOp.GT:
            passed = value > self.expected
        else:
            passed = value < self.expected
        return CheckOutcome(self.name, passed, value, self.expected)

    def to_dict(self) -> dict:
        out = {"quantity": self.quantity, "op": self.op.value}
        if self.expected is not None:
            out["expected"] = self.expected
            out["tol"] = self.tol
        return out

    @classmethod
    def from_dict(cls, data: dict, path: str = "$") -> "CheckSpec":
        if not isinstance(data, dict):
            raise InstanceValidationError(path, "expected an object")
        quantity = data.get("quantity")
        if not isinstance(quantity, str) or not quantity:
            raise InstanceValidationError(f"{path}.quantity", "expected a quantity name")
        try:
            op = CheckOp(data.get("op"))
        except ValueError as exc:
            choices = ", ".join(o.value for o in CheckOp)
            raise InstanceValidationError(f"{path}.op", f"expected one of {choices}") from exc
        expected = data.get("expected")
        if op in (CheckOp.IS_TRUE, CheckOp.IS_FALSE, CheckOp.IS_NONE):
            expected = None
        elif isinstance(expected, bool) or not isinstance(expected, (int, float)):
            raise InstanceValidationError(f"{path}.expected", "expected a number")
        tol = data.get("tol", 1e-9)
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0:
            raise InstanceValidationError(f"{path}.tol", "expected a nonnegative number")
        return cls(quantity, op, None if expected is None else float(expected), float(tol))


@dataclass(frozen=True)
class CheckOutcome:
    """Result of one named check."""

    name: str
    passed: bool
    value: Any = None
    expected: Optional[float] = None
    slack: Optional[float] = None

    def to_dict(self) -> dict:
        value = self.value
        if isinstance(value, float):
            value = json_float(value)
        return {
            "name": self.name,
            "passed": self.passed,
            "value": value,
            "expected": self.expected,
            "slack": json_float(self.slack),
        }


@dataclass(frozen=True, eq=False)
class Scenario:
    """A bundled instance together with the properties it must exhibit."""

    name: str
    instance: Instance
    checks: tuple[CheckSpec, ...]
    description: str = ""
    options: dict = field(default_factory=dict)

    @property
    def quantities(self) -> list[str]:
        return [c.quantity for c in self.checks]


@dataclass(frozen=True)
class TrialResult:
    """Checks of one randomized trial, with the seed that replays it."""

    index: int
    seed: int
    checks: tuple[CheckOutcome, ...]
    runtime: float = 0.0
    error: Optional[str] = None
    reproduce: str = ""

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "index": self.index,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.error is not None:
            out["error"] = self.error
        if not self.passed:
            out["reproduce"] = self.reproduce
        if include_runtime:
            out["runtime"] = self.runtime
        return out


@dataclass(frozen=True)
class SuiteResult:
    """All trials of one suite run."""

    suite: str
    seed: int
    dims: tuple[int, ...]
    trials: tuple[TrialResult, ...]
    runtime: float = 0.0

    @property
    def failures(self) -> list[TrialResult]:
        return [t for t in self.trials if not t.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def worst_slack(self, check_name: str) -> Optional[float]:
        """Smallest slack over every check called ``check_name``."""
        slacks = [
            c.slack
            for t in self.trials
            for c in t.checks
            if c.name == check_name and c.slack is not None
        ]
        return min(slacks) if slacks else None

    def summary(self) -> dict:
        names = sorted({c.name for t in self.trials for c in t.checks})
        return {
            "suite": self.suite,
            "trials": len(self.trials),
            "failures": len(self.failures),
            "checks": {
                name: {
                    "failures": sum(
                        1 for t in self.trials for c in t.checks if c.name == name and not c.passed
                    ),
                    "min_slack": json_float(self.worst_slack(name)),
                }
                for name in names
            },
        }

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "dims": list(self.dims),
            "passed": self.passed,
            "summary": self.summary(),
            "trials": [t.to_dict(include_runtime) for t in self.trials],
        }
        if include_runtime:
            out["runtime"] = self.runtime
        return out


@dataclass(frozen=True, eq=False)
class ScenarioRun:
    """Report of a bundled scenario together with its evaluated checks."""

    name: str
    report: TradeoffReport
    checks: tuple[CheckOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "report": self.report.to_dict(),
        }
