"""Parameter scans over two-state ensembles, written as CSV."""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..models.ensemble import Ensemble
from ..models.instrument import QuantumInstrument
from ..utils.errors import InvalidParams
from ..utils.matrix_codec import format_float
from .disturbance import disturbance_report, theorem_one_report
from .ensembles import average_state
from .info_gain import quantum_info_gain
from .instruments import von_neumann_instrument
from .recovery import RecoveryOptimizer

logger = logging.getLogger(__name__)

QUANTITY_COLUMNS = (
    "eta",
    "zeta",
    "f_av",
    "f_e",
    "delta",
    "iota",
    "delta_chi",
    "slack_17",
    "slack_18",
    "rhs_flag",
)

FAMILIES = {
    "two-state-angle": "uniform {|0>, cos t|0> + sin t|1>} under the computational measurement",
    "two-state-weight": "{|0>, |+>} with the prior of |+> swept down from 1/2",
}


@dataclass(frozen=True)
class ScanRow:
    """One scan point with every column of the CSV."""

    parameter: float
    eta: float
    zeta: float
    f_av: float
    f_e: float
    delta: float
    iota: float
    delta_chi: float
    slack_17: float
    slack_18: float
    rhs_flag: bool
    chain_holds: bool

    @property
    def violations(self) -> list[str]:
        found = []
        if self.slack_17 < -1e-7:
            found.append("slack_17")
        if self.slack_18 < -1e-9:
            found.append("slack_18")
        if not self.chain_holds:
            found.append("chain")
        return found

    def cells(self) -> list[str]:
        values = [format_float(getattr(self, c)) for c in QUANTITY_COLUMNS[:-1]]
        return [format_float(self.parameter), *values, "1" if self.rhs_flag else "0"]


@dataclass(frozen=True)
class ScanResult:
    family: str
    rows: tuple[ScanRow, ...]

    @property
    def header(self) -> tuple[str, ...]:
        first = "theta" if self.family == "two-state-angle" else "weight"
        return (first, *QUANTITY_COLUMNS)

    @property
    def violations(self) -> list[tuple[int, list[str]]]:
        return [(i, row.violations) for i, row in enumerate(self.rows) if row.violations]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow(row.cells())
        return buffer.getvalue()


def family_point(family: str, parameter: float) -> tuple[Ensemble, QuantumInstrument]:
    """Ensemble and instrument of one scan point."""
    zero = np.array([1.0, 0.0])
    if family == "two-state-angle":
        second = np.array([np.cos(parameter), np.sin(parameter)])
        ensemble = Ensemble.from_vectors(["0", "theta"], [0.5, 0.5], [zero, second])
    elif family == "two-state-weight":
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        ensemble = Ensemble.from_vectors(["0", "+"], [1.0 - parameter, parameter], [zero, plus])
    else:
        raise InvalidParams(f"unknown scan family {family!r}; known: {', '.join(FAMILIES)}")
    return ensemble, von_neumann_instrument(2)


def family_parameters(family: str, steps: int) -> np.ndarray:
    """Angles pi/2 down to pi/(2 steps), or weights 1/2 down to 1/(2 steps)."""
    if family not in FAMILIES:
        raise InvalidParams(f"unknown scan family {family!r}; known: {', '.join(FAMILIES)}")
    if isinstance(steps, bool) or not isinstance(steps, (int, np.integer)) or steps < 1:
        raise InvalidParams(f"steps must be a positive integer, got {steps!r}")
    top = np.pi / 2 if family == "two-state-angle" else 0.5
    return top * np.arange(steps, 0, -1) / steps


def scan_point(
    family: str, parameter: float, optimizer: Optional[RecoveryOptimizer] = None
) -> ScanRow:
    ensemble, instr = family_point(family, parameter)
    disturbance = disturbance_report(ensemble, instr, optimizer)
    chain = theorem_one_report(ensemble, instr, disturbance=disturbance)
    iota = quantum_info_gain(average_state(ensemble), instr)
    f_e = min(1.0, disturbance.f_e)
    row = ScanRow(
        parameter=float(parameter),
        eta=chain.irreducibility.eta,
        zeta=chain.irreducibility.zeta,
        f_av=disturbance.f_av,
        f_e=disturbance.f_e,
        delta=disturbance.delta,
        iota=iota,
        delta_chi=disturbance.delta_chi,
        slack_17=disturbance.delta - (1.0 - f_e) ** 2 / 4,
        slack_18=disturbance.delta - iota,
        rhs_flag=chain.rhs_applicable,
        chain_holds=chain.holds,
    )
    logger.debug("%s point %.6f: %s", family, parameter, row)
    return row


def run_scan(
    family: str,
    steps: int,
    optimizer: Optional[RecoveryOptimizer] = None,
    threads: int = 1,
) -> ScanResult:
    """Evaluate every point of a family; rows keep the parameter order."""
    parameters = family_parameters(family, steps)
    if threads > 1 and len(parameters) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda t: scan_point(family, t, optimizer), parameters))
    else:
        rows = [scan_point(family, t, optimizer) for t in parameters]
    result = ScanResult(family, tuple(rows))
    for index, names in result.violations:
        logger.error("%s row %d violates %s", family, index, ", ".join(names))
    return result
