"""Utility modules for tradeoff-lab."""

from .errors import (
    ConvergenceFailure,
    DegenerateBranch,
    DimMismatch,
    DomainError,
    InstanceValidationError,
    InternalError,
    InvalidInstrument,
    InvalidParams,
    InvalidState,
    MixedStates,
    NonHermitian,
    NotInfoComplete,
    RankDeficient,
    TradeoffLabError,
)
from .matrix_codec import FORMAT_TAG, format_float
from .randomness import make_rng, trial_seed

__all__ = [
    "TradeoffLabError",
    "NonHermitian",
    "InvalidState",
    "DimMismatch",
    "InvalidParams",
    "InvalidInstrument",
    "MixedStates",
    "RankDeficient",
    "NotInfoComplete",
    "DomainError",
    "DegenerateBranch",
    "InstanceValidationError",
    "InternalError",
    "ConvergenceFailure",
    "FORMAT_TAG",
    "format_float",
    "make_rng",
    "trial_seed",
]
