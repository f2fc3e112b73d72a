"""Disturbance quantities and the information-disturbance inequality chain."""

import logging
from typing import Optional

import numpy as np

from ..models.ensemble import Ensemble
from ..models.instrument import QuantumInstrument
from ..models.reports import BoundCheck, ChiDecomposition, DisturbanceReport, TheoremOneReport
from ..utils.errors import DimMismatch, DomainError, InternalError, InvalidParams, MixedStates
from ..utils.tolerances import TAU_PROB
from .ensembles import average_state, christandl_winter_ensemble, entropy_defect, holevo_chi
from .info_gain import quantum_info_gain
from .instruments import (
    REGISTER_LEAKAGE_TOL,
    channelize,
    complement_channel,
    is_single_kraus,
    register_leakage,
    stinespring,
)
from .irreducibility import zeta
from .qmat import StateLike, entropy_of_matrix, purify, require_state
from .recovery import (
    SATURATION_TOL,
    RecoveryOptimizer,
    optimize_recovery_average,
    optimize_recovery_entanglement,
)

logger = logging.getLogger(__name__)

# Identities that hold exactly are checked to this precision.
IDENTITY_TOL = 1e-9

# Largest eps for which the refined continuity bound f1 applies.
F1_DOMAIN_MAX = 2.0 / np.e**2


def _check_dims(dim: int, instr: QuantumInstrument) -> None:
    if dim != instr.in_dim:
        raise DimMismatch(f"state dimension {dim} does not match instrument input {instr.in_dim}")


def coherent_information(rho_s: StateLike, instr: QuantumInstrument) -> float:
    """I_c = S(Q'X-hat) - S(RQ'X-hat) on (I (x) channelize(instr))(Psi)."""
    state = require_state(rho_s, instr.in_dim, "input state")
    a = purify(state).as_matrix()
    channel = channelize(instr)
    d_b = channel.out_dim
    joint = np.zeros((a.shape[0] * d_b,) * 2, dtype=complex)
    marginal = np.zeros((d_b, d_b), dtype=complex)
    for k in channel.kraus:
        steered = a @ k.T
        vec = steered.reshape(-1)
        joint += np.outer(vec, vec.conj())
        marginal += steered.T @ steered.conj()
    leakage = register_leakage(marginal, instr.out_dim, instr.n_outcomes)
    if leakage > REGISTER_LEAKAGE_TOL:
        raise InternalError(f"classical register leaked coherence {leakage:.3e}")
    return entropy_of_matrix(marginal) - entropy_of_matrix(joint)


def quantum_disturbance(rho_s: StateLike, instr: QuantumInstrument) -> float:
    """delta = S(rho_s) - I_c(R -> Q'X-hat), in bits.

    Raises:
        InternalError: If delta < -1e-9. Values above S(rho_s) are logged, not raised.
    """
    state = require_state(rho_s, instr.in_dim, "input state")
    entropy = entropy_of_matrix(state.matrix)
    delta = entropy - coherent_information(state, instr)
    if delta < -IDENTITY_TOL:
        raise InternalError(f"negative quantum disturbance {delta:.3e}")
    if delta > entropy + IDENTITY_TOL:
        logger.warning(
            "quantum disturbance %.9f exceeds the input entropy %.9f", delta, entropy
        )
    return max(0.0, delta)


def _branch_outputs(s: Ensemble, instr: QuantumInstrument) -> list[list[np.ndarray]]:
    return [[b.apply(m) for b in instr.outcomes] for m in s.matrices]


def entropy_defect_loss(s: Ensemble, instr: QuantumInstrument) -> tuple[float, ChiDecomposition]:
    """Delta chi = chi(s) - chi(M(s)) with the conditional decomposition of chi(M(s)).

    chi(M(s)) is computed on the block-diagonal channelized outputs and checked
    against I(X:X-hat) + sum_m p(m) chi(s_m), where s_m is the ensemble of
    normalized branch outputs conditioned on m.

    Raises:
        InternalError: If the decomposition or the sign of Delta chi fails by more than 1e-9.
    """
    _check_dims(s.dim, instr)
    probs = s.probabilities
    chi_in = entropy_defect(s)
    channel = channelize(instr)
    outputs = [channel.apply(m) for m in s.matrices]
    chi_out = holevo_chi(probs, outputs)

    branch = _branch_outputs(s, instr)
    joint = np.array([[p * np.trace(o).real for o in row] for p, row in zip(probs, branch)])
    joint = np.clip(joint, 0.0, None)
    p_m = joint.sum(axis=0)
    outer = np.outer(probs, p_m)
    cells = joint > TAU_PROB
    mutual = max(0.0, float(np.sum(joint[cells] * np.log2(joint[cells] / outer[cells]))))

    conditional, weights = {}, {}
    weighted = 0.0
    alt = -mutual
    for m, label in enumerate(instr.labels):
        weights[label] = float(p_m[m])
        if p_m[m] < TAU_PROB:
            continue
        xs = [x for x in range(len(s)) if joint[x, m] > TAU_PROB]
        cond_p = joint[xs, m] / p_m[m]
        cond_states = [branch[x][m] / branch[x][m].trace().real for x in xs]
        chi_m = holevo_chi(cond_p, cond_states)
        conditional[label] = chi_m
        weighted += p_m[m] * chi_m
        alt += p_m[m] * (chi_in - chi_m)

    residual = abs(chi_out - mutual - weighted)
    if residual > IDENTITY_TOL:
        raise InternalError(f"output entropy-defect decomposition off by {residual:.3e}")
    delta_chi = chi_in - chi_out
    if delta_chi < -IDENTITY_TOL:
        raise InternalError(f"entropy defect increased under the instrument by {-delta_chi:.3e}")
    decomposition = ChiDecomposition(
        chi_input=chi_in,
        chi_output=chi_out,
        mutual_info=mutual,
        conditional_chis=conditional,
        outcome_probs=weights,
        weighted_conditional_chi=weighted,
        identity_residual=residual,
        delta_chi_alt=alt,
    )
    return max(0.0, delta_chi), decomposition


def complement_ensemble_chi(s: Ensemble, instr: QuantumInstrument) -> float:
    """chi of the ensemble pushed through the complement of the channelized instrument."""
    _check_dims(s.dim, instr)
    complement = complement_channel(stinespring(channelize(instr)))
    return holevo_chi(s.probabilities, [complement.apply(m) for m in s.matrices])


def lemma1_identity_check(s: Ensemble, instr: QuantumInstrument) -> float:
    """|delta - Delta chi - chi(complement(s))|, zero for pure ensembles.

    Raises:
        MixedStates: If the ensemble is not pure.
    """
    if not s.is_pure:
        raise MixedStates("the disturbance identity needs a pure-state ensemble")
    delta = quantum_disturbance(average_state(s), instr)
    delta_chi, _ = entropy_defect_loss(s, instr)
    return abs(delta - delta_chi - complement_ensemble_chi(s, instr))


def _check_count(value: int, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidParams(f"{name} must be a positive integer, got {value!r}")


def bound_f1(eps: float, k: int, d: int) -> float:
    """f1(eps) = 2K sqrt(eps) log2(d/eps), valid for 0 <= eps <= 2/e^2."""
    _check_count(k, "K")
    _check_count(d, "d")
    if not np.isfinite(eps) or eps < 0 or eps > F1_DOMAIN_MAX:
        raise DomainError(f"f1 is defined for 0 <= eps <= 2/e^2, got {eps}")
    if eps == 0:
        return 0.0
    return float(2 * k * np.sqrt(eps) * np.log2(d / eps))


def bound_f2(eps_prime: float, n: int, d: int) -> float:
    """f2(eps') = 4N sqrt(eps') log2(d/eps'), valid for 0 <= eps' <= 1."""
    _check_count(n, "N")
    _check_count(d, "d")
    if not np.isfinite(eps_prime) or eps_prime < 0 or eps_prime > 1:
        raise DomainError(f"f2 is defined for 0 <= eps' <= 1, got {eps_prime}")
    if eps_prime == 0:
        return 0.0
    return float(4 * n * np.sqrt(eps_prime) * np.log2(d / eps_prime))


def bound_f(x: float, n: int, d: int) -> float:
    """f(x) = 6N sqrt(x) log2(d/x), valid for 0 <= x <= 1."""
    _check_count(n, "N")
    _check_count(d, "d")
    if not np.isfinite(x) or x < 0 or x > 1:
        raise DomainError(f"f is defined for 0 <= x <= 1, got {x}")
    if x == 0:
        return 0.0
    return float(6 * n * np.sqrt(x) * np.log2(d / x))


def disturbance_report(
    s: Ensemble, instr: QuantumInstrument, optimizer: Optional[RecoveryOptimizer] = None
) -> DisturbanceReport:
    """Fidelities, delta and the entropy-defect loss for one instance.

    f_av is computed only for pure ensembles.
    """
    _check_dims(s.dim, instr)
    optimizer = optimizer or RecoveryOptimizer()
    rho_s = average_state(s)
    ent_recovery, f_e = optimize_recovery_entanglement(rho_s, instr, optimizer=optimizer)
    avg_recovery, f_av = None, None
    if s.is_pure:
        avg_recovery, f_av = optimize_recovery_average(
            s, instr, optimizer=optimizer, warm_start=ent_recovery
        )
    delta = quantum_disturbance(rho_s, instr)
    delta_chi, _ = entropy_defect_loss(s, instr)
    return DisturbanceReport(
        f_e=f_e,
        delta=delta,
        delta_chi=delta_chi,
        chi_complement=complement_ensemble_chi(s, instr),
        entanglement_recovery=ent_recovery,
        f_av=f_av,
        average_recovery=avg_recovery,
        delta_exceeds_entropy=delta > entropy_of_matrix(rho_s.matrix) + IDENTITY_TOL,
    )


def theorem_one_report(
    s: Ensemble,
    instr: QuantumInstrument,
    optimizer: Optional[RecoveryOptimizer] = None,
    disturbance: Optional[DisturbanceReport] = None,
    n_max: Optional[int] = None,
) -> TheoremOneReport:
    """Evaluate (1-F_av)^2/4 <= (1-F_e)^2/4 <= delta <= f(sqrt(1-F_av)/zeta).

    The right-hand side is only applicable when zeta > 0 and
    x = sqrt(1-F_av)/zeta <= 1. The two component bounds (Delta chi against
    f1(1-F_av), chi of the complement ensemble against f2(x)) are reported
    alongside.

    Raises:
        MixedStates: If the ensemble is not pure.
    """
    if not s.is_pure:
        raise MixedStates("the tradeoff chain needs a pure-state ensemble")
    irreducibility = zeta(s, n_max)
    if disturbance is None:
        disturbance = disturbance_report(s, instr, optimizer)
    f_av = float(np.clip(disturbance.f_av, 0.0, 1.0))
    f_e = float(np.clip(disturbance.f_e, 0.0, 1.0))
    eps = 1.0 - f_av
    if eps < SATURATION_TOL:
        eps = 0.0
    k, d = len(s), s.dim
    n = max(1, irreducibility.witness_path.length)
    notes = []

    zeta_positive = irreducibility.zeta > 0
    x, rhs = None, None
    x_within, fidelity_condition, at_limit = False, False, False
    if zeta_positive:
        x = float(np.sqrt(eps) / irreducibility.zeta)
        x_within = x <= 1.0
        fidelity_condition = f_av >= 1.0 - irreducibility.zeta**2
        at_limit = x == 0.0
        if x_within:
            rhs = bound_f(x, n, d)
        else:
            notes.append("x = sqrt(1 - f_av)/zeta exceeds 1; upper bound not applicable")
    else:
        notes.append("reducible ensemble (zeta = 0); upper bound not applicable")
    if disturbance.delta_exceeds_entropy:
        notes.append("delta exceeds S(rho_s)")

    lemma2_ok = eps <= F1_DOMAIN_MAX
    lemma2 = BoundCheck(
        value=disturbance.delta_chi,
        bound=bound_f1(eps, k, d) if lemma2_ok else None,
        applicable=lemma2_ok,
        argument=eps,
    )
    lemma3 = BoundCheck(
        value=disturbance.chi_complement,
        bound=bound_f2(x, n, d) if x_within else None,
        applicable=x_within,
        argument=x,
    )
    return TheoremOneReport(
        lhs1=(1.0 - f_av) ** 2 / 4,
        lhs2=(1.0 - f_e) ** 2 / 4,
        delta=disturbance.delta,
        f_av=f_av,
        f_e=f_e,
        irreducibility=irreducibility,
        rhs=rhs,
        x=x,
        zeta_positive=zeta_positive,
        x_within_domain=x_within,
        fidelity_condition=fidelity_condition,
        at_limit=at_limit,
        lemma2=lemma2,
        lemma3=lemma3,
        delta_chi=disturbance.delta_chi,
        chi_complement=disturbance.chi_complement,
        notes=notes,
    )


def eq17_lower_check(
    rho_s: StateLike, instr: QuantumInstrument, optimizer: Optional[RecoveryOptimizer] = None
) -> float:
    """delta - (1 - F_e)^2 / 4; nonnegative."""
    state = require_state(rho_s, instr.in_dim, "input state")
    _, f_e = optimize_recovery_entanglement(state, instr, optimizer=optimizer)
    return quantum_disturbance(state, instr) - (1.0 - min(1.0, f_e)) ** 2 / 4


def eq18_check(rho_s: StateLike, instr: QuantumInstrument) -> tuple[float, bool]:
    """(delta - iota, single-Kraus flag); equality is expected for single-Kraus instruments."""
    state = require_state(rho_s, instr.in_dim, "input state")
    slack = quantum_disturbance(state, instr) - quantum_info_gain(state, instr)
    return slack, is_single_kraus(instr)


def cw_sandwich_check(rho: StateLike, instr: QuantumInstrument) -> tuple[float, float]:
    """(delta - Delta chi, 2 Delta chi - delta) on the Christandl-Winter ensemble of rho.

    Raises:
        RankDeficient: If rho is not full rank.
    """
    state = require_state(rho, instr.in_dim, "input state")
    ensemble = christandl_winter_ensemble(state)
    delta = quantum_disturbance(state, instr)
    delta_chi, _ = entropy_defect_loss(ensemble, instr)
    return delta - delta_chi, 2 * delta_chi - delta
