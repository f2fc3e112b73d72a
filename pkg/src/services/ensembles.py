"""Ensemble operations: average state, entropy defect, steering from POVMs on a purification."""

import logging

import numpy as np

from ..models.ensemble import Ensemble, EnsembleEntry, Povm
from ..models.states import BipartitePureState, DensityOperator, PureState
from ..utils.errors import DimMismatch, RankDeficient
from ..utils.tolerances import TAU_EIG, TAU_PROB, TAU_RANK
from .qmat import (
    StateLike,
    eig_hermitian,
    entropy_of_matrix,
    purify,
    reference_marginal,
    require_state,
)

logger = logging.getLogger(__name__)


def average_state(s: Ensemble) -> DensityOperator:
    """rho_s = sum_x p(x) rho_x"""
    return DensityOperator(average_matrix(s.probabilities, s.matrices))


def average_matrix(probs, matrices) -> np.ndarray:
    return sum(p * m for p, m in zip(probs, matrices))


def holevo_chi(probs, matrices) -> float:
    """S(sum p rho) - sum p S(rho) for trusted (probability, state-matrix) pairs."""
    probs = np.asarray(probs, dtype=float)
    avg = average_matrix(probs, matrices)
    return entropy_of_matrix(avg) - float(
        sum(p * entropy_of_matrix(m) for p, m in zip(probs, matrices))
    )


def entropy_defect(s: Ensemble) -> float:
    """chi(s) = S(rho_s) - sum_x p(x) S(rho_x), in bits."""
    if s.is_pure:
        return entropy_of_matrix(average_matrix(s.probabilities, s.matrices))
    return holevo_chi(s.probabilities, s.matrices)


def _rank_one_vector(op: np.ndarray) -> np.ndarray | None:
    """Return b with op = |b><b| when ``op`` is rank one, else None."""
    vals, vecs = np.linalg.eigh(op)
    if vals[-1] <= TAU_EIG or np.any(np.abs(vals[:-1]) > TAU_RANK):
        return None
    return np.sqrt(vals[-1]) * vecs[:, -1]


def ensemble_from_povm(psi: BipartitePureState, povm: Povm) -> Ensemble:
    """Ensemble on Q steered by measuring ``povm`` on R: p(x) rho_x = Tr_R[(R_x (x) I) Psi].

    Rank-one elements produce pure entries stored as vectors. Elements with
    probability below TAU_PROB are dropped.
    """
    if povm.dim != psi.d_r:
        raise DimMismatch(f"POVM acts on dimension {povm.dim}, reference has {psi.d_r}")
    a = psi.as_matrix()
    entries = []
    for label, op in povm.elements:
        b = _rank_one_vector(op)
        if b is not None:
            # R = |b><b| gives p rho = u u^dagger with u = psi^T conj(b).
            u = a.T @ b.conj()
            p = float(np.real(np.vdot(u, u)))
            if p < TAU_PROB:
                continue
            pure = PureState(u / np.sqrt(p))
            entries.append(EnsembleEntry(label, p, pure.density(), pure.amplitudes))
        else:
            block = a.T @ op.T @ a.conj()
            p = float(np.real(np.trace(block)))
            if p < TAU_PROB:
                continue
            entries.append(EnsembleEntry(label, p, DensityOperator(block / p)))
    total = sum(e.p for e in entries)
    # Dropped elements carry at most TAU_PROB each; renormalize away the loss.
    entries = [EnsembleEntry(e.label, e.p / total, e.state, e.vector) for e in entries]
    return Ensemble(tuple(entries), psi.d_q)


def fourier_basis(d: int) -> np.ndarray:
    """Columns f_k[j] = omega^(jk) / sqrt(d), unbiased to the computational basis."""
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * j * k / d) / np.sqrt(d)


def christandl_winter_povm(psi: BipartitePureState) -> Povm:
    """Eigenbasis of Tr_Q[Psi] and its Fourier-conjugate basis, each scaled by 1/2."""
    _, eigvecs = eig_hermitian(reference_marginal(psi))
    mub = eigvecs @ fourier_basis(psi.d_r)
    elements = [
        (f"e{i}", 0.5 * np.outer(eigvecs[:, i], eigvecs[:, i].conj())) for i in range(psi.d_r)
    ]
    elements += [(f"f{k}", 0.5 * np.outer(mub[:, k], mub[:, k].conj())) for k in range(psi.d_r)]
    return Povm(tuple(elements), psi.d_r)


def christandl_winter_ensemble(rho: StateLike) -> Ensemble:
    """2d-element pure ensemble steered from the canonical purification of ``rho``.

    Raises:
        RankDeficient: If ``rho`` has an eigenvalue below TAU_EIG.
    """
    state = require_state(rho)
    lowest = state.eigenvalues()[0]
    if lowest < TAU_EIG:
        raise RankDeficient(
            "Christandl-Winter construction needs a full-rank state "
            f"(lowest eigenvalue {lowest:.3e})"
        )
    psi = purify(state)
    return ensemble_from_povm(psi, christandl_winter_povm(psi))
