"""Exception hierarchy for tradeoff-lab."""


class TradeoffLabError(Exception):
    """Base class for every error raised by the library."""


class NonHermitian(TradeoffLabError, ValueError):
    """A matrix expected to be Hermitian is not, beyond TAU_HERM."""


class InvalidState(TradeoffLabError, ValueError):
    """Matrix is not a density operator (Hermitian, PSD, unit trace)."""


class DimMismatch(TradeoffLabError, ValueError):
    """Operands live on spaces of different dimension."""


class InvalidParams(TradeoffLabError, ValueError):
    """Numeric parameters out of their allowed range."""


class InvalidInstrument(TradeoffLabError, ValueError):
    """Kraus data does not form a normalized instrument or channel."""


class MixedStates(TradeoffLabError, ValueError):
    """An operation that needs a pure-state ensemble received mixed states."""


class RankDeficient(TradeoffLabError, ValueError):
    """A full-rank state was required."""


class NotInfoComplete(TradeoffLabError, ValueError):
    """POVM elements do not span the operator space."""


class DomainError(TradeoffLabError, ValueError):
    """Bound function evaluated outside its validity range."""


class DegenerateBranch(TradeoffLabError, ValueError):
    """Instrument branch has (numerically) zero probability."""


class InstanceValidationError(TradeoffLabError, ValueError):
    """Instance or scenario JSON failed schema validation.

    Attributes:
        path: JSON path of the offending value, e.g. ``$.ensemble.entries[0].p``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class InternalError(TradeoffLabError, RuntimeError):
    """An identity that must hold by construction was violated numerically."""


class ConvergenceFailure(TradeoffLabError, RuntimeError):
    """Iterative optimizer stopped at its iteration cap."""
