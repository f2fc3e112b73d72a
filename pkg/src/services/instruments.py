"""Instrument operations: branch application, channelization, dilations, factories."""

import logging
from typing import Optional, Sequence, Union

import numpy as np

from ..models.instrument import Channel, OutcomeBranch, QuantumInstrument, StinespringDilation
from ..models.states import DensityOperator, check_dim
from ..utils.errors import DimMismatch, InternalError, InvalidParams
from ..utils.randomness import haar_isometry, make_rng
from ..utils.tolerances import TAU_PROB, TAU_RANK
from .qmat import StateLike, require_state

logger = logging.getLogger(__name__)

# Off-register-block weight of a channelized output above this is a bug.
REGISTER_LEAKAGE_TOL = 1e-9


def apply_branch(
    instr: QuantumInstrument, m: Union[str, int], rho: StateLike
) -> tuple[float, Optional[DensityOperator]]:
    """Probability of outcome ``m`` and the normalized post-measurement state.

    Returns:
        Tuple of (p(m|rho), sigma_m) with sigma_m None when p < TAU_PROB.
    """
    state = require_state(rho, instr.in_dim, "input state")
    out = instr.branch(m).apply(state.matrix)
    p = float(np.clip(np.trace(out).real, 0.0, 1.0))
    if p < TAU_PROB:
        return p, None
    return p, DensityOperator(out / p)


def outcome_distribution(instr: QuantumInstrument, rho: StateLike) -> np.ndarray:
    """p(m|rho) for every outcome, in instrument order."""
    state = require_state(rho, instr.in_dim, "input state")
    return np.array(
        [np.clip(np.real(np.vdot(b.effect(), state.matrix)), 0.0, 1.0) for b in instr.outcomes]
    )


def channelize(instr: QuantumInstrument) -> Channel:
    """Channel Q -> Q' (x) X-hat with Kraus operators E_{m,k} (x) |m>."""
    n = instr.n_outcomes
    kraus = []
    for m, branch in enumerate(instr.outcomes):
        register = np.zeros((n, 1), dtype=complex)
        register[m, 0] = 1.0
        kraus.extend(np.kron(k, register) for k in branch.kraus)
    return Channel(tuple(kraus), instr.in_dim, instr.out_dim * n)


def register_leakage(output: np.ndarray, out_dim: int, n_outcomes: int) -> float:
    """Largest off-diagonal register block entry of an operator on Q' (x) X-hat."""
    t = np.asarray(output).reshape(out_dim, n_outcomes, out_dim, n_outcomes)
    off = t.copy()
    for m in range(n_outcomes):
        off[:, m, :, m] = 0.0
    return float(np.max(np.abs(off))) if off.size else 0.0


def apply_channelized(instr: QuantumInstrument, rho: np.ndarray) -> np.ndarray:
    """Output of the channelized instrument, checked for register coherence."""
    out = channelize(instr).apply(rho)
    leakage = register_leakage(out, instr.out_dim, instr.n_outcomes)
    if leakage > REGISTER_LEAKAGE_TOL:
        raise InternalError(f"classical register leaked coherence {leakage:.3e}")
    return out


def stinespring(ch: Channel) -> StinespringDilation:
    """Isometry V with rows indexed (o, k): V[o*r + k, i] = K_k[o, i]."""
    kraus = np.stack(ch.kraus)
    r = kraus.shape[0]
    v = kraus.transpose(1, 0, 2).reshape(ch.out_dim * r, ch.in_dim)
    return StinespringDilation(v, ch.in_dim, ch.out_dim, r)


def complement_channel(dil: StinespringDilation) -> Channel:
    """Complementary channel Q -> A, rho -> Tr_Q'[V rho V^dagger]."""
    v = dil.isometry.reshape(dil.out_dim, dil.anc_dim, dil.in_dim)
    return Channel(tuple(v[o] for o in range(dil.out_dim)), dil.in_dim, dil.anc_dim)


def output_channel_of(dil: StinespringDilation) -> Channel:
    """Channel rebuilt from a dilation by tracing out the ancilla."""
    v = dil.isometry.reshape(dil.out_dim, dil.anc_dim, dil.in_dim)
    return Channel(tuple(v[:, k, :] for k in range(dil.anc_dim)), dil.in_dim, dil.out_dim)


def is_single_kraus(instr: QuantumInstrument) -> bool:
    """True iff every branch has Choi rank <= 1 at TAU_RANK."""
    return all(b.kraus_rank(TAU_RANK) <= 1 for b in instr.outcomes)


def random_instrument(
    rng_seed: Union[int, np.random.Generator],
    d: int,
    n_outcomes: int,
    kraus_per_outcome: int,
    out_dim: Optional[int] = None,
) -> QuantumInstrument:
    """Haar-random instrument cut out of an isometry Q -> Q' (x) X-hat (x) K.

    Args:
        rng_seed: Seed or an existing generator.
        d: Input dimension.
        n_outcomes: Number of outcomes.
        kraus_per_outcome: Kraus operators per outcome.
        out_dim: Output dimension (defaults to ``d``).
    """
    for name, value in (
        ("d", d),
        ("n_outcomes", n_outcomes),
        ("kraus_per_outcome", kraus_per_outcome),
    ):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise InvalidParams(f"{name} must be a positive integer, got {value!r}")
    d_out = d if out_dim is None else check_dim(out_dim, "out_dim")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else make_rng(rng_seed)
    rows = d_out * n_outcomes * kraus_per_outcome
    if rows < d:
        # Too few Kraus slots to hold an isometry of this size.
        raise InvalidParams(
            f"isometry into dimension {rows} cannot embed a {d}-dimensional input"
        )
    v = haar_isometry(rng, rows, d).reshape(n_outcomes, kraus_per_outcome, d_out, d)
    outcomes = tuple(
        OutcomeBranch(str(m), tuple(v[m, k] for k in range(kraus_per_outcome)))
        for m in range(n_outcomes)
    )
    return QuantumInstrument(outcomes, d, d_out)


def identity_instrument(d: int) -> QuantumInstrument:
    return QuantumInstrument((OutcomeBranch("0", (np.eye(check_dim(d)),)),), d, d)


def channel_instrument(channel: Channel, label: str = "0") -> QuantumInstrument:
    """Single-outcome instrument wrapping a channel."""
    return QuantumInstrument(
        (OutcomeBranch(label, channel.kraus),), channel.in_dim, channel.out_dim
    )


def von_neumann_instrument(
    d: int, basis: Optional[np.ndarray] = None, labels: Optional[Sequence[str]] = None
) -> QuantumInstrument:
    """Projective instrument E_m(rho) = P_m rho P_m on the columns of ``basis``."""
    d = check_dim(d)
    basis = np.eye(d, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if basis.shape != (d, d):
        raise DimMismatch(f"basis has shape {basis.shape}, expected {d}x{d}")
    labels = [str(i) for i in range(d)] if labels is None else list(labels)
    outcomes = tuple(
        OutcomeBranch(label, (np.outer(basis[:, i], basis[:, i].conj()),))
        for i, label in enumerate(labels)
    )
    return QuantumInstrument(outcomes, d, d)


def unitary_branch_instrument(
    weights: Sequence[float], unitaries: Sequence[np.ndarray]
) -> QuantumInstrument:
    """E_m(rho) = q_m U_m rho U_m^dagger; perfectly reversible given m."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise InvalidParams("unitary branch weights must be positive and sum to 1")
    outcomes = tuple(
        OutcomeBranch(str(m), (np.sqrt(q) * np.asarray(u, dtype=complex),))
        for m, (q, u) in enumerate(zip(weights, unitaries))
    )
    d = outcomes[0].in_dim
    return QuantumInstrument(outcomes, d, d)


def weak_measurement_instrument(d: int, strength: float) -> QuantumInstrument:
    """Two-outcome diagonal weak measurement with single Kraus per outcome.

    Outcome "0" has Kraus diag(sqrt(s), sqrt(1-s), ...) alternating along the
    diagonal; outcome "1" the complementary weights.
    """
    d = check_dim(d)
    if not 0.0 <= strength <= 1.0:
        raise InvalidParams(f"strength must lie in [0, 1], got {strength}")
    w = np.array([strength if i % 2 == 0 else 1.0 - strength for i in range(d)])
    return QuantumInstrument(
        (
            OutcomeBranch("0", (np.diag(np.sqrt(w)).astype(complex),)),
            OutcomeBranch("1", (np.diag(np.sqrt(1.0 - w)).astype(complex),)),
        ),
        d,
        d,
    )


def depolarizing_channel(d: int, p: float) -> Channel:
    """rho -> (1-p) rho + p I/d via the Weyl-Heisenberg Kraus set."""
    d = check_dim(d)
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"depolarizing probability must lie in [0, 1], got {p}")
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    kraus = []
    for a in range(d):
        for b in range(d):
            weight = 1.0 - p + p / d**2 if (a, b) == (0, 0) else p / d**2
            if weight > 0:
                op = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
                kraus.append(np.sqrt(weight) * op)
    return Channel(tuple(kraus), d, d)


def split_kraus(instr: QuantumInstrument, label: str) -> QuantumInstrument:
    """Same instrument with the Kraus list of ``label`` split as E -> {E/sqrt2, E/sqrt2}."""
    outcomes = []
    for b in instr.outcomes:
        if b.label == label:
            kraus = tuple(k / np.sqrt(2) for k in b.kraus for _ in range(2))
            outcomes.append(OutcomeBranch(b.label, kraus))
        else:
            outcomes.append(b)
    return QuantumInstrument(tuple(outcomes), instr.in_dim, instr.out_dim)
