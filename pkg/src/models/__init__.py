"""Data models for tradeoff-lab."""

from .ensemble import CompletePath, Ensemble, EnsembleEntry, IrreducibilityResult, Povm
from .instrument import Channel, OutcomeBranch, QuantumInstrument, StinespringDilation
from .reports import (
    REPORT_QUANTITIES,
    BoundCheck,
    BranchRecovery,
    ChiDecomposition,
    DisturbanceReport,
    DualFrame,
    InfoReport,
    JointDistribution,
    RecoveryChannel,
    RecoveryProvenance,
    TheoremOneReport,
    TradeoffReport,
)
from .scenario import (
    CheckOp,
    CheckOutcome,
    CheckSpec,
    Instance,
    Scenario,
    ScenarioRun,
    SuiteResult,
    TrialResult,
)
from .states import BipartitePureState, DensityOperator, PureState

__all__ = [
    "DensityOperator",
    "PureState",
    "BipartitePureState",
    "OutcomeBranch",
    "QuantumInstrument",
    "Channel",
    "StinespringDilation",
    "Ensemble",
    "EnsembleEntry",
    "Povm",
    "CompletePath",
    "IrreducibilityResult",
    "JointDistribution",
    "DualFrame",
    "InfoReport",
    "RecoveryProvenance",
    "BranchRecovery",
    "RecoveryChannel",
    "ChiDecomposition",
    "DisturbanceReport",
    "BoundCheck",
    "TheoremOneReport",
    "TradeoffReport",
    "REPORT_QUANTITIES",
    "Instance",
    "CheckOp",
    "CheckSpec",
    "CheckOutcome",
    "Scenario",
    "ScenarioRun",
    "TrialResult",
    "SuiteResult",
]
