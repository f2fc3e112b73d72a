"""Recovery-channel optimization for entanglement and average output fidelity.

For a fixed outcome m both fidelities are linear in the Choi matrix J of the
correcting channel R_m: Q' -> Q, value = Re sum_ij J_ij W_ij with a positive
weight matrix W built from the instrument and the input. Each branch is solved
by projected ascent on J, projecting onto the CPTP set with Dykstra's
alternating projections (eigenvalue clipping for positivity, an affine shift
for the partial-trace constraint). Every iterate is repaired into an exactly
trace-preserving channel before it is scored, so reported values are always
attained by an actual channel.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from ..models.ensemble import Ensemble
from ..models.instrument import Channel, OutcomeBranch, QuantumInstrument
from ..models.reports import BranchRecovery, RecoveryChannel, RecoveryProvenance
from ..utils.errors import ConvergenceFailure, DegenerateBranch, DimMismatch, InvalidParams
from ..utils.tolerances import TAU_EIG, TAU_PROB
from .qmat import StateLike, inv_sqrt_psd, partial_trace_matrix, purify, require_state, sqrt_psd

logger = logging.getLogger(__name__)

# A branch value within this of its probability cannot be improved.
SATURATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BranchProblem:
    """Maximize Re sum(J * weight) over Choi matrices of channels in_dim -> out_dim."""

    label: str
    weight: np.ndarray
    in_dim: int
    out_dim: int
    upper: float

    def value(self, channel: Channel) -> float:
        return float(np.real(np.sum(channel.choi() * self.weight)))


def _replacement_channel(in_dim: int, out_dim: int) -> Channel:
    """sigma -> Tr[sigma] |0><0|"""
    kraus = []
    for a in range(in_dim):
        k = np.zeros((out_dim, in_dim), dtype=complex)
        k[0, a] = 1.0
        kraus.append(k)
    return Channel(tuple(kraus), in_dim, out_dim)


def entanglement_problems(rho_s: StateLike, instr: QuantumInstrument) -> list[BranchProblem]:
    """Per-branch weights of <Psi|(I (x) R_m E_m)(Psi)|Psi> on the canonical purification."""
    state = require_state(rho_s, instr.in_dim, "input state")
    a = purify(state).as_matrix()
    problems = []
    for branch in instr.outcomes:
        weight = np.zeros((instr.out_dim * instr.in_dim,) * 2, dtype=complex)
        prob = 0.0
        for k in branch.kraus:
            steered = a @ k.T
            prob += float(np.real(np.vdot(steered, steered)))
            b = (steered.T @ a.conj()).reshape(-1)
            weight += np.outer(b, b.conj())
        problems.append(BranchProblem(branch.label, weight, instr.out_dim, instr.in_dim, prob))
    return problems


def average_problems(s: Ensemble, instr: QuantumInstrument) -> list[BranchProblem]:
    """Per-branch weights of sum_x p(x) <psi_x|R_m(E_m(psi_x))|psi_x>.

    Raises:
        MixedStates: If the ensemble is not pure.
    """
    if s.dim != instr.in_dim:
        raise DimMismatch(f"ensemble dimension {s.dim} does not match instrument {instr.in_dim}")
    vectors = s.pure_vectors()
    probs = s.probabilities
    problems = []
    for branch in instr.outcomes:
        weight = np.zeros((instr.out_dim * instr.in_dim,) * 2, dtype=complex)
        prob = 0.0
        for p, psi in zip(probs, vectors):
            for k in branch.kraus:
                out = k @ psi
                prob += p * float(np.real(np.vdot(out, out)))
                b = np.kron(out, psi.conj())
                weight += p * np.outer(b, b.conj())
        problems.append(BranchProblem(branch.label, weight, instr.out_dim, instr.in_dim, prob))
    return problems


def project_psd(choi: np.ndarray) -> np.ndarray:
    vals, vecs = scipy.linalg.eigh((choi + choi.conj().T) / 2)
    return (vecs * np.clip(vals, 0.0, None)) @ vecs.conj().T


def project_trace_preserving(choi: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    """Affine projection onto Tr_out J = I_in."""
    reduced = partial_trace_matrix(choi, (in_dim, out_dim), "A")
    return choi - np.kron((reduced - np.eye(in_dim)) / out_dim, np.eye(out_dim))


def project_cptp(
    choi: np.ndarray, in_dim: int, out_dim: int, max_iter: int = 300, tol: float = 1e-10
) -> np.ndarray:
    """Dykstra projection onto {J >= 0, Tr_out J = I} with the Birgin-Raydan stopping rule."""
    old_cp_change = np.zeros_like(choi)
    old_tp_change = np.zeros_like(choi)
    last_cp_projection = np.zeros_like(choi)
    last_state = choi
    new_state = choi
    for _ in range(max_iter):
        pre_cp = last_state - old_cp_change
        cp_projection = project_psd(pre_cp)
        new_cp_change = cp_projection - pre_cp

        pre_tp = cp_projection - old_tp_change
        new_state = project_trace_preserving(pre_tp, in_dim, out_dim)
        new_tp_change = new_state - pre_tp

        criterion = (
            np.linalg.norm(new_cp_change - old_cp_change) ** 2
            + np.linalg.norm(new_tp_change - old_tp_change) ** 2
            + 2 * abs(np.vdot(old_tp_change, new_state - last_state))
            + 2 * abs(np.vdot(old_cp_change, cp_projection - last_cp_projection))
        )
        if criterion < tol:
            break
        old_cp_change = new_cp_change
        old_tp_change = new_tp_change
        last_cp_projection = cp_projection
        last_state = new_state
    return new_state


def petz_recovery(rho_s: StateLike, branch: OutcomeBranch) -> Channel:
    """Transpose channel sigma -> sqrt(rho) E^dagger(S^-1/2 sigma S^-1/2) sqrt(rho), S = E(rho).

    Outside the support of S the channel prepares ``rho_s``, which makes it
    exactly trace preserving.

    Raises:
        DegenerateBranch: If Tr E(rho_s) < TAU_PROB.
    """
    state = require_state(rho_s, branch.in_dim, "input state")
    out = branch.apply(state.matrix)
    prob = float(np.trace(out).real)
    if prob < TAU_PROB:
        raise DegenerateBranch(f"outcome {branch.label!r} has probability {prob:.3e}")
    root = sqrt_psd(state.matrix)
    s_inv = inv_sqrt_psd(out)
    kraus = [root @ k.conj().T @ s_inv for k in branch.kraus]

    vals, vecs = scipy.linalg.eigh((out + out.conj().T) / 2)
    kernel = vecs[:, vals <= TAU_EIG]
    if kernel.shape[1]:
        r_vals, r_vecs = scipy.linalg.eigh(state.matrix)
        for val, u in zip(r_vals, r_vecs.T):
            if val <= TAU_EIG:
                continue
            for w in kernel.T:
                kraus.append(np.sqrt(val) * np.outer(u, w.conj()))
    total = sum(k.conj().T @ k for k in kraus)
    # Round-off of the pseudo-inverse is absorbed exactly.
    correction = inv_sqrt_psd(total, tol=0.5)
    return Channel(tuple(k @ correction for k in kraus), branch.out_dim, branch.in_dim)


class RecoveryOptimizer:
    """Projected ascent over CPTP recovery channels, one branch at a time.

    Args:
        tol: Stop when the best value improved by less than this over ``patience`` iterations.
        max_iter: Iteration cap per branch.
        patience: Window of the improvement test.
        max_workers: Branches solved concurrently when > 1.
        strict: Raise ConvergenceFailure at the cap instead of flagging the result.
    """

    def __init__(
        self,
        tol: float = 1e-5,
        max_iter: int = 5000,
        patience: int = 50,
        max_workers: int = 1,
        strict: bool = False,
        projection_iter: int = 100,
    ):
        if tol <= 0 or max_iter < 1 or patience < 1:
            raise InvalidParams("tol must be positive and max_iter, patience at least 1")
        self.tol = tol
        self.max_iter = max_iter
        self.patience = patience
        self.max_workers = max(1, int(max_workers))
        self.strict = strict
        self.projection_iter = projection_iter

    def solve(
        self,
        problems: Sequence[BranchProblem],
        starts: Sequence[Sequence[tuple[RecoveryProvenance, Channel]]],
        objective: str,
    ) -> RecoveryChannel:
        jobs = list(zip(problems, starts))
        if self.max_workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                branches = list(pool.map(lambda job: self.solve_branch(*job), jobs))
        else:
            branches = [self.solve_branch(p, s) for p, s in jobs]
        return RecoveryChannel(tuple(branches), objective)

    def solve_branch(
        self, problem: BranchProblem, starts: Sequence[tuple[RecoveryProvenance, Channel]]
    ) -> BranchRecovery:
        best_value, best_channel, provenance = -np.inf, None, RecoveryProvenance.SUPPLIED
        for origin, channel in starts:
            value = problem.value(channel)
            if value > best_value:
                best_value, best_channel, provenance = value, channel, origin
        if best_channel is None:
            best_channel = _replacement_channel(problem.in_dim, problem.out_dim)
            best_value = problem.value(best_channel)

        if best_value >= problem.upper - SATURATION_TOL or problem.upper < TAU_PROB:
            return BranchRecovery(problem.label, best_channel, provenance, best_value)

        gradient = problem.weight.conj()
        scale = np.linalg.norm(gradient, 2)
        step, max_step = 1.0 / scale, 30.0 / scale
        choi = best_channel.choi()
        history = [best_value]
        converged = False
        iterations = 0
        for iterations in range(1, self.max_iter + 1):
            projected = project_cptp(
                choi + step * gradient, problem.in_dim, problem.out_dim, self.projection_iter
            )
            channel = Channel.from_choi(projected, problem.in_dim, problem.out_dim)
            choi = channel.choi()
            value = problem.value(channel)
            if value > best_value:
                best_value, best_channel = value, channel
                provenance = RecoveryProvenance.OPTIMIZED
            history.append(best_value)
            if best_value >= problem.upper - SATURATION_TOL:
                converged = True
                break
            if iterations >= self.patience and history[-1] - history[-1 - self.patience] < self.tol:
                converged = True
                break
            step = min(2.0 * step, max_step)
        logger.debug(
            "branch %s: value %.10f after %d iterations (bound %.10f)",
            problem.label,
            best_value,
            iterations,
            problem.upper,
        )
        if not converged:
            message = f"recovery for outcome {problem.label!r} hit {self.max_iter} iterations"
            if self.strict:
                raise ConvergenceFailure(message)
            logger.warning("%s; returning best channel found", message)
        return BranchRecovery(
            problem.label, best_channel, provenance, best_value, iterations, converged
        )


def _default_starts(
    rho_s: StateLike, instr: QuantumInstrument, extra: Optional[RecoveryChannel] = None
) -> list[list[tuple[RecoveryProvenance, Channel]]]:
    starts = []
    for branch in instr.outcomes:
        candidates = []
        try:
            candidates.append((RecoveryProvenance.PETZ, petz_recovery(rho_s, branch)))
        except DegenerateBranch:
            pass
        if instr.in_dim == instr.out_dim:
            candidates.append((RecoveryProvenance.IDENTITY, Channel.identity(instr.in_dim)))
        if extra is not None:
            for b in extra.branches:
                if b.label == branch.label:
                    candidates.append((b.provenance, b.channel))
        starts.append(candidates)
    return starts


def entanglement_fidelity(
    rho_s: StateLike, instr: QuantumInstrument, recovery: RecoveryChannel
) -> float:
    """sum_m <Psi|(I (x) R_m E_m)(Psi)|Psi>, evaluated directly from Kraus operators."""
    state = require_state(rho_s, instr.in_dim, "input state")
    a = purify(state).as_matrix()
    total = 0.0
    for branch in instr.outcomes:
        for r in recovery.channel(branch.label).kraus:
            for k in branch.kraus:
                total += abs(np.vdot(a, a @ (r @ k).T)) ** 2
    return float(total)


def average_fidelity(s: Ensemble, instr: QuantumInstrument, recovery: RecoveryChannel) -> float:
    """sum_x p(x) sum_m <psi_x|R_m(E_m(psi_x))|psi_x> for a pure ensemble."""
    vectors = s.pure_vectors()
    total = 0.0
    for p, psi in zip(s.probabilities, vectors):
        for branch in instr.outcomes:
            for r in recovery.channel(branch.label).kraus:
                for k in branch.kraus:
                    total += p * abs(np.vdot(psi, r @ (k @ psi))) ** 2
    return float(total)


def optimize_recovery_entanglement(
    rho_s: StateLike,
    instr: QuantumInstrument,
    tol: float = 1e-5,
    optimizer: Optional[RecoveryOptimizer] = None,
) -> tuple[RecoveryChannel, float]:
    """Best correcting channels for the entanglement fidelity.

    Returns:
        Tuple of (recovery, f_e) where f_e is re-evaluated directly from the
        returned channels.
    """
    optimizer = optimizer or RecoveryOptimizer(tol=tol)
    state = require_state(rho_s, instr.in_dim, "input state")
    recovery = optimizer.solve(
        entanglement_problems(state, instr), _default_starts(state, instr), "entanglement"
    )
    return recovery, entanglement_fidelity(state, instr, recovery)


def optimize_recovery_average(
    s: Ensemble,
    instr: QuantumInstrument,
    tol: float = 1e-5,
    optimizer: Optional[RecoveryOptimizer] = None,
    warm_start: Optional[RecoveryChannel] = None,
) -> tuple[RecoveryChannel, float]:
    """Best correcting channels for the average output fidelity of a pure ensemble.

    The entanglement-optimal channels are always among the starting points,
    so f_av never falls below f_e.

    Raises:
        MixedStates: If the ensemble is not pure.
    """
    optimizer = optimizer or RecoveryOptimizer(tol=tol)
    problems = average_problems(s, instr)
    rho_s = sum(p * m for p, m in zip(s.probabilities, s.matrices))
    if warm_start is None:
        warm_start, _ = optimize_recovery_entanglement(rho_s, instr, optimizer=optimizer)
    recovery = optimizer.solve(problems, _default_starts(rho_s, instr, warm_start), "average")
    return recovery, average_fidelity(s, instr, recovery)
