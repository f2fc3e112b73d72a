"""Bundled scenario catalog under ``src/data/scenarios``."""

import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional

from ..models.reports import REPORT_QUANTITIES
from ..models.scenario import CheckSpec, Scenario, ScenarioRun
from ..utils.errors import InstanceValidationError, InvalidParams
from .analysis import AnalysisOptions, analyze_instance
from .instance_io import parse_instance

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "data" / "scenarios"


def list_scenarios(directory: Path = SCENARIO_DIR) -> list[str]:
    """Names of the bundled scenarios, sorted."""
    return sorted(p.stem for p in directory.glob("*.json"))


def parse_scenario(data: Any, name: str) -> Scenario:
    """Validate a scenario document: an instance plus ``expected`` checks."""
    instance = parse_instance(data, default_name=name)
    expected = data.get("expected")
    if not isinstance(expected, list) or not expected:
        raise InstanceValidationError("$.expected", "expected a non-empty list of checks")
    checks = []
    for i, raw in enumerate(expected):
        check = CheckSpec.from_dict(raw, f"$.expected[{i}]")
        if check.quantity not in REPORT_QUANTITIES:
            raise InstanceValidationError(
                f"$.expected[{i}].quantity", f"unknown quantity {check.quantity!r}"
            )
        checks.append(check)
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise InstanceValidationError("$.options", "expected an object")
    return Scenario(instance.name, instance, tuple(checks), instance.description, options)


def load_scenario(name: str, directory: Path = SCENARIO_DIR) -> Scenario:
    """Load one bundled scenario by name.

    Raises:
        InvalidParams: If no scenario has that name.
    """
    path = directory / f"{name}.json"
    if not path.is_file():
        known = ", ".join(list_scenarios(directory))
        raise InvalidParams(f"unknown scenario {name!r}; known: {known}")
    return parse_scenario(json.loads(path.read_text(encoding="utf-8")), name)


def run_scenario(scenario: Scenario, options: Optional[AnalysisOptions] = None) -> ScenarioRun:
    """Analyze the scenario instance and evaluate each expected property."""
    options = replace(
        options or AnalysisOptions(), with_info=bool(scenario.options.get("info", False))
    )
    report = analyze_instance(scenario.instance, options)
    values = report.flat()
    outcomes = tuple(check.evaluate(values[check.quantity]) for check in scenario.checks)
    for outcome in outcomes:
        if not outcome.passed:
            logger.error(
                "scenario %s: check %r failed with value %r",
                scenario.name,
                outcome.name,
                outcome.value,
            )
    return ScenarioRun(scenario.name, report, outcomes)
