"""Informationally complete POVMs and their canonical dual frames."""

import logging
from typing import Optional

import numpy as np

from ..models.ensemble import Ensemble, Povm
from ..models.reports import DualFrame, JointDistribution
from ..models.states import check_dim
from ..utils.errors import InvalidParams, NotInfoComplete
from ..utils.randomness import haar_isometry, make_rng
from ..utils.tolerances import TAU_RANK
from .qmat import trace_norm

logger = logging.getLogger(__name__)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


def mub_bases(d: int) -> list[np.ndarray]:
    """A complete set of d+1 mutually unbiased bases (columns) for prime d."""
    d = check_dim(d)
    if d == 2:
        s = 1 / np.sqrt(2)
        return [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
        ]
    if not _is_prime(d):
        raise InvalidParams(f"complete MUB construction needs a prime dimension, got {d}")
    omega = np.exp(2j * np.pi / d)
    n = np.arange(d)
    bases = [np.eye(d, dtype=complex)]
    for k in range(d):
        columns = [omega ** ((k * n * n + j * n) % d) / np.sqrt(d) for j in range(d)]
        bases.append(np.array(columns).T)
    return bases


def basis_povm(basis: np.ndarray, weight: float = 1.0, prefix: str = "b") -> Povm:
    """Rank-one POVM from the columns of an orthonormal basis."""
    d = basis.shape[0]
    return Povm.from_vectors([f"{prefix}{i}" for i in range(d)], basis.T, weight)


def mub_povm(d: int, n_bases: Optional[int] = None) -> Povm:
    """Uniform mixture of the first ``n_bases`` MUBs (all d+1 by default)."""
    bases = mub_bases(d)
    n_bases = len(bases) if n_bases is None else n_bases
    if not 1 <= n_bases <= len(bases):
        raise InvalidParams(f"n_bases must be in 1..{len(bases)}, got {n_bases}")
    elements = []
    for b, basis in enumerate(bases[:n_bases]):
        for i in range(d):
            v = basis[:, i]
            elements.append((f"m{b}_{i}", np.outer(v, v.conj()) / n_bases))
    return Povm(tuple(elements), d)


def sic_vectors(d: int) -> list[np.ndarray]:
    """SIC fiducial orbit for d = 2 (tetrahedron) and d = 3 (Hesse)."""
    if d == 2:
        a, b = 1 / np.sqrt(3), np.sqrt(2 / 3)
        vectors = [np.array([1.0, 0.0], dtype=complex)]
        for phase in (0.0, -2 * np.pi / 3, 2 * np.pi / 3):
            vectors.append(np.array([a, b * np.exp(1j * phase)]))
        return vectors
    if d == 3:
        fiducial = np.array([0.0, 1.0, -1.0], dtype=complex) / np.sqrt(2)
        omega = np.exp(2j * np.pi / 3)
        shift = np.roll(np.eye(3), 1, axis=0)
        clock = np.diag(omega ** np.arange(3))
        return [
            np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b) @ fiducial
            for a in range(3)
            for b in range(3)
        ]
    raise InvalidParams(f"no built-in SIC POVM for dimension {d}")


def sic_povm(d: int) -> Povm:
    vectors = sic_vectors(d)
    return Povm.from_vectors([f"s{i}" for i in range(len(vectors))], vectors, 1.0 / d)


def random_info_complete_povm(d: int, seed: int = 0) -> Povm:
    """d^2 rank-one elements from the rows of a Haar isometry C^d -> C^(d^2)."""
    d = check_dim(d)
    rows = haar_isometry(make_rng(seed), d * d, d)
    return Povm(
        tuple((f"r{j}", np.outer(row.conj(), row)) for j, row in enumerate(rows)), d
    )


def default_frame_povm(d: int, seed: int = 0) -> Povm:
    """SIC where built in, otherwise complete MUBs for prime d, otherwise random."""
    if d in (2, 3):
        return sic_povm(d)
    if _is_prime(d):
        return mub_povm(d)
    return random_info_complete_povm(d, seed)


def build_dual_frame(povm: Povm) -> DualFrame:
    """Canonical duals K_m = F^{-1}(P_m) with F(X) = sum_m Tr[X P_m] P_m.

    Raises:
        NotInfoComplete: If the frame operator has rank below d^2.
    """
    d = povm.dim
    vecs = np.array([op.reshape(-1) for op in povm.operators]).T
    frame_op = vecs @ vecs.conj().T
    rank = int(np.sum(np.linalg.eigvalsh(frame_op) > TAU_RANK))
    if rank < d * d:
        raise NotInfoComplete(f"POVM spans {rank} of {d * d} operator dimensions")
    dual_vecs = np.linalg.solve(frame_op, vecs)
    duals = []
    for j in range(len(povm)):
        k = dual_vecs[:, j].reshape(d, d)
        k = (k + k.conj().T) / 2
        k.setflags(write=False)
        duals.append(k)
    frame_const = max(trace_norm(k) for k in duals)
    logger.debug("dual frame for %d-element POVM: c = %.6f", len(povm), frame_const)
    return DualFrame(povm, tuple(duals), float(frame_const))


def measured_joint(probs, states, povm: Povm, x_labels=None) -> JointDistribution:
    """Joint p(x, g) = p(x) Tr[P_g rho_x] of an ensemble measured by ``povm``."""
    table = np.array(
        [[p * np.real(np.vdot(op, rho)) for op in povm.operators] for p, rho in zip(probs, states)]
    )
    table = np.clip(table, 0.0, None)
    labels = tuple(x_labels) if x_labels is not None else tuple(str(i) for i in range(len(table)))
    return JointDistribution(table, labels, tuple(povm.labels))


def frame_norm_bound(s: Ensemble, frame: DualFrame) -> tuple[float, float]:
    """(sum_x p(x) ||rho_x - rho_s||_1, c sqrt(2 I(X:G))) for the frame POVM G."""
    probs, states = s.probabilities, s.matrices
    avg = sum(p * m for p, m in zip(probs, states))
    lhs = float(sum(p * trace_norm(m - avg) for p, m in zip(probs, states)))
    info = measured_joint(probs, states, frame.povm, s.labels).mutual_information()
    return lhs, frame.frame_const * float(np.sqrt(2.0 * info))
