"""Result records for information gain, disturbance and the tradeoff chain.

Every report serializes with ``to_dict``; inapplicable quantities are ``None``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..utils.matrix_codec import encode_matrix, json_float
from ..utils.tolerances import TAU_PROB
from .ensemble import IrreducibilityResult, Povm
from .instrument import Channel


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > TAU_PROB]
    return float(-np.sum(p * np.log2(p)))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint table p(x, m) over ensemble labels x and outcome labels m."""

    table: np.ndarray
    x_labels: tuple[str, ...]
    m_labels: tuple[str, ...]

    @property
    def p_x(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def p_m(self) -> np.ndarray:
        return self.table.sum(axis=0)

    def entropy_x(self) -> float:
        return _entropy_bits(self.p_x)

    def entropy_m(self) -> float:
        return _entropy_bits(self.p_m)

    def mutual_information(self) -> float:
        """I(X:M) in bits; cells below TAU_PROB contribute nothing."""
        table = self.table
        outer = np.outer(self.p_x, self.p_m)
        mask = table > TAU_PROB
        value = float(np.sum(table[mask] * np.log2(table[mask] / outer[mask])))
        return max(0.0, value)

    def to_dict(self) -> dict:
        return {
            "x_labels": list(self.x_labels),
            "m_labels": list(self.m_labels),
            "table": self.table.tolist(),
        }


@dataclass(frozen=True, eq=False)
class DualFrame:
    """Info-complete POVM with canonical duals K_m and c = max_m ||K_m||_1."""

    povm: Povm
    duals: tuple[np.ndarray, ...]
    frame_const: float

    def reconstruct(self, x: np.ndarray) -> np.ndarray:
        """sum_m Tr[X P_m] K_m"""
        x = np.asarray(x, dtype=complex)
        return sum(np.vdot(p, x) * k for p, k in zip(self.povm.operators, self.duals))

    @property
    def analytic_const(self) -> int:
        """2d - 1, the constant of the continuous covariant frame."""
        return 2 * self.povm.dim - 1


@dataclass(frozen=True)
class InfoReport:
    """Information equivalence chain: I_acc estimate <= iota <= t(c sqrt(2 I_frame))."""

    iota: float
    i_acc_lower: float
    i_acc_upper: float
    t_bound: float
    frame_const: float
    analytic_frame_const: int
    frame_mutual_info: float
    bound_argument: float
    bound_saturated: bool
    norm_sum: float
    norm_bound: float
    mutual_info: Optional[float] = None

    @property
    def holevo_slack(self) -> float:
        return self.i_acc_upper - self.i_acc_lower

    @property
    def upper_slack(self) -> float:
        return self.t_bound - self.iota

    @property
    def norm_slack(self) -> float:
        return self.norm_bound - self.norm_sum

    def to_dict(self) -> dict:
        return {
            "mutual_info": json_float(self.mutual_info),
            "iota": self.iota,
            "i_acc_lower": self.i_acc_lower,
            "i_acc_upper": self.i_acc_upper,
            "t_bound": self.t_bound,
            "frame_const": self.frame_const,
            "analytic_frame_const": self.analytic_frame_const,
            "frame_mutual_info": self.frame_mutual_info,
            "bound_argument": self.bound_argument,
            "bound_saturated": self.bound_saturated,
            "norm_sum": self.norm_sum,
            "norm_bound": self.norm_bound,
            "slacks": {
                "holevo": self.holevo_slack,
                "upper": None if self.bound_saturated else self.upper_slack,
                "norm": self.norm_slack,
            },
        }


class RecoveryProvenance(Enum):
    """Where a recovery channel came from."""

    OPTIMIZED = "optimized"
    PETZ = "petz"
    IDENTITY = "identity"
    SUPPLIED = "supplied"


@dataclass(frozen=True)
class BranchRecovery:
    """Recovery channel R_m for one outcome with its objective value."""

    label: str
    channel: Channel
    provenance: RecoveryProvenance
    value: float
    iterations: int = 0
    converged: bool = True


@dataclass(frozen=True)
class RecoveryChannel:
    """Per-outcome correcting channels R_m: Q' -> Q."""

    branches: tuple[BranchRecovery, ...]
    objective: str

    def channel(self, label: str) -> Channel:
        for b in self.branches:
            if b.label == label:
                return b.channel
        raise KeyError(label)

    @property
    def converged(self) -> bool:
        return all(b.converged for b in self.branches)

    def to_dict(self, include_choi: bool = False) -> dict:
        out = {
            "objective": self.objective,
            "converged": self.converged,
            "branches": [
                {
                    "label": b.label,
                    "provenance": b.provenance.value,
                    "value": b.value,
                    "iterations": b.iterations,
                    "converged": b.converged,
                }
                for b in self.branches
            ],
        }
        if include_choi:
            for entry, b in zip(out["branches"], self.branches):
                entry["choi"] = encode_matrix(b.channel.choi())
        return out


@dataclass(frozen=True)
class ChiDecomposition:
    """chi(M(s)) = I(X:X-hat) + sum_m p(m) chi(s_m), plus the loss in two forms."""

    chi_input: float
    chi_output: float
    mutual_info: float
    conditional_chis: dict[str, float]
    outcome_probs: dict[str, float]
    weighted_conditional_chi: float
    identity_residual: float
    delta_chi_alt: float

    def to_dict(self) -> dict:
        return {
            "chi_input": self.chi_input,
            "chi_output": self.chi_output,
            "mutual_info": self.mutual_info,
            "conditional_chis": dict(self.conditional_chis),
            "outcome_probs": dict(self.outcome_probs),
            "weighted_conditional_chi": self.weighted_conditional_chi,
            "identity_residual": self.identity_residual,
            "delta_chi_alt": self.delta_chi_alt,
        }


@dataclass(frozen=True)
class DisturbanceReport:
    """Fidelities, coherent-information disturbance and entropy-defect loss."""

    f_e: float
    delta: float
    delta_chi: float
    chi_complement: float
    entanglement_recovery: RecoveryChannel
    f_av: Optional[float] = None
    average_recovery: Optional[RecoveryChannel] = None
    delta_exceeds_entropy: bool = False

    def to_dict(self, include_choi: bool = False) -> dict:
        return {
            "f_av": json_float(self.f_av),
            "f_e": self.f_e,
            "delta": self.delta,
            "delta_chi": self.delta_chi,
            "chi_complement": self.chi_complement,
            "delta_exceeds_entropy": self.delta_exceeds_entropy,
            "recovery": {
                "entanglement": self.entanglement_recovery.to_dict(include_choi),
                "average": (
                    self.average_recovery.to_dict(include_choi)
                    if self.average_recovery is not None
                    else None
                ),
            },
        }


@dataclass(frozen=True)
class BoundCheck:
    """One bound evaluation: value <= bound when applicable."""

    value: float
    bound: Optional[float]
    applicable: bool
    argument: Optional[float] = None

    @property
    def slack(self) -> Optional[float]:
        if not self.applicable or self.bound is None:
            return None
        return self.bound - self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "bound": json_float(self.bound),
            "argument": json_float(self.argument),
            "applicable": self.applicable,
            "slack": json_float(self.slack),
        }


@dataclass(frozen=True)
class TheoremOneReport:
    """(1-F_av)^2/4 <= (1-F_e)^2/4 <= delta <= f(sqrt(1-F_av)/zeta)."""

    lhs1: float
    lhs2: float
    delta: float
    f_av: float
    f_e: float
    irreducibility: IrreducibilityResult
    rhs: Optional[float]
    x: Optional[float]
    zeta_positive: bool
    x_within_domain: bool
    fidelity_condition: bool
    at_limit: bool
    lemma2: BoundCheck
    lemma3: BoundCheck
    delta_chi: float
    chi_complement: float
    tolerance: float = 1e-7
    notes: list[str] = field(default_factory=list)

    @property
    def rhs_applicable(self) -> bool:
        return self.zeta_positive and self.x_within_domain and self.fidelity_condition

    @property
    def slack_fidelities(self) -> float:
        return self.lhs2 - self.lhs1

    @property
    def slack_disturbance(self) -> float:
        return self.delta - self.lhs2

    @property
    def slack_rhs(self) -> Optional[float]:
        if not self.rhs_applicable or self.rhs is None:
            return None
        return self.rhs - self.delta

    @property
    def holds(self) -> bool:
        ok = self.slack_fidelities >= -self.tolerance and self.slack_disturbance >= -self.tolerance
        if self.slack_rhs is not None:
            ok = ok and self.slack_rhs >= -self.tolerance
        return ok

    def to_dict(self) -> dict:
        return {
            "lhs1": self.lhs1,
            "lhs2": self.lhs2,
            "delta": self.delta,
            "f_av": self.f_av,
            "f_e": self.f_e,
            "rhs": json_float(self.rhs),
            "x": json_float(self.x),
            "irreducibility": self.irreducibility.to_dict(),
            "flags": {
                "zeta_positive": self.zeta_positive,
                "x_within_domain": self.x_within_domain,
                "fidelity_condition": self.fidelity_condition,
                "rhs_applicable": self.rhs_applicable,
                "at_limit": self.at_limit,
            },
            "slacks": {
                "fidelities": self.slack_fidelities,
                "disturbance": self.slack_disturbance,
                "rhs": json_float(self.slack_rhs),
            },
            "lemma2": self.lemma2.to_dict(),
            "lemma3": self.lemma3.to_dict(),
            "holds": self.holds,
            "notes": list(self.notes),
        }


# Keys of TradeoffReport.flat(), the quantities scenario checks may name.
REPORT_QUANTITIES = (
    "entropy",
    "chi",
    "mutual_info",
    "iota",
    "delta",
    "f_e",
    "f_av",
    "delta_chi",
    "chi_complement",
    "delta_exceeds_entropy",
    "slack_17",
    "slack_18",
    "single_kraus",
    "eq22_residual",
    "eta",
    "zeta",
    "theorem1_holds",
    "rhs_applicable",
    "lemma1_slack",
    "cw_lower_slack",
    "cw_upper_slack",
    "i_acc_lower",
    "holevo_slack",
    "norm_slack",
)


@dataclass(frozen=True)
class TradeoffReport:
    """Everything ``analyze`` computes for one (ensemble, instrument) instance."""

    name: str
    dim: int
    n_states: int
    n_outcomes: int
    pure_ensemble: bool
    single_kraus: bool
    entropy: float
    chi: float
    mutual_info: float
    iota: float
    disturbance: DisturbanceReport
    decomposition: ChiDecomposition
    slack_17: float
    slack_18: float
    irreducibility: Optional[IrreducibilityResult] = None
    theorem_one: Optional[TheoremOneReport] = None
    info: Optional[InfoReport] = None
    cw_slacks: Optional[tuple[float, float]] = None
    lemma1_slack: Optional[float] = None

    def flat(self) -> dict:
        """Named scalar quantities used by scenario checks."""
        values = {
            "entropy": self.entropy,
            "chi": self.chi,
            "mutual_info": self.mutual_info,
            "iota": self.iota,
            "delta": self.disturbance.delta,
            "f_e": self.disturbance.f_e,
            "f_av": self.disturbance.f_av,
            "delta_chi": self.disturbance.delta_chi,
            "chi_complement": self.disturbance.chi_complement,
            "delta_exceeds_entropy": self.disturbance.delta_exceeds_entropy,
            "slack_17": self.slack_17,
            "slack_18": self.slack_18,
            "single_kraus": self.single_kraus,
            "eq22_residual": self.decomposition.identity_residual,
            "eta": None,
            "zeta": None,
            "theorem1_holds": None,
            "rhs_applicable": None,
            "lemma1_slack": self.lemma1_slack,
            "cw_lower_slack": None,
            "cw_upper_slack": None,
            "i_acc_lower": None,
            "holevo_slack": None,
            "norm_slack": None,
        }
        if self.irreducibility is not None:
            values["eta"] = self.irreducibility.eta
            values["zeta"] = self.irreducibility.zeta
        if self.theorem_one is not None:
            values["theorem1_holds"] = self.theorem_one.holds
            values["rhs_applicable"] = self.theorem_one.rhs_applicable
        if self.cw_slacks is not None:
            values["cw_lower_slack"], values["cw_upper_slack"] = self.cw_slacks
        if self.info is not None:
            values["i_acc_lower"] = self.info.i_acc_lower
            values["holevo_slack"] = self.info.holevo_slack
            values["norm_slack"] = self.info.norm_slack
        return values

    def to_dict(self, include_choi: bool = False) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "n_states": self.n_states,
            "n_outcomes": self.n_outcomes,
            "pure_ensemble": self.pure_ensemble,
            "single_kraus": self.single_kraus,
            "entropy": self.entropy,
            "chi": self.chi,
            "mutual_info": self.mutual_info,
            "iota": self.iota,
            "disturbance": self.disturbance.to_dict(include_choi),
            "decomposition": self.decomposition.to_dict(),
            "irreducibility": (
                self.irreducibility.to_dict() if self.irreducibility is not None else None
            ),
            "theorem_one": self.theorem_one.to_dict() if self.theorem_one is not None else None,
            "info": self.info.to_dict() if self.info is not None else None,
            "slacks": {
                "eq17": self.slack_17,
                "eq18": self.slack_18,
                "cw_lower": None if self.cw_slacks is None else self.cw_slacks[0],
                "cw_upper": None if self.cw_slacks is None else self.cw_slacks[1],
                "lemma1": json_float(self.lemma1_slack),
            },
        }
