"""Dense complex-matrix primitives: spectra, entropies, distances, partial traces.

Every function is pure. Functions accept either a ``DensityOperator`` or a raw
matrix where that is convenient; raw matrices are validated as states when the
operation is only defined on states.
"""

from typing import Literal, Union

import numpy as np
import scipy.linalg

from ..models.states import BipartitePureState, DensityOperator
from ..utils.errors import DimMismatch, NonHermitian
from ..utils.tolerances import TAU_EIG, TAU_HERM, TAU_PSD

StateLike = Union[DensityOperator, np.ndarray]


def _matrix(x: StateLike) -> np.ndarray:
    if isinstance(x, DensityOperator):
        return x.matrix
    return np.asarray(x, dtype=complex)


def _state(x: StateLike) -> DensityOperator:
    if isinstance(x, DensityOperator):
        return x
    return DensityOperator(x)


def _check_square(m: np.ndarray, what: str = "matrix") -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch(f"{what} must be square, got shape {m.shape}")


def eig_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        m: Square matrix, Hermitian within TAU_HERM.

    Returns:
        Tuple of (ascending real eigenvalues, orthonormal eigenvector columns).

    Raises:
        NonHermitian: If ``m`` deviates from its adjoint by more than TAU_HERM.
    """
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    if m.size and np.max(np.abs(m - m.conj().T)) > TAU_HERM:
        raise NonHermitian("matrix is not Hermitian within tolerance")
    vals, vecs = scipy.linalg.eigh((m + m.conj().T) / 2)
    return vals, vecs


def clamped_spectrum(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a (near-)state with round-off negatives clamped and renormalized."""
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    vals = np.where((vals < 0) & (vals >= -TAU_PSD), 0.0, vals)
    vals = np.clip(vals, 0.0, None)
    total = vals.sum()
    return vals / total if total > 0 else vals


def shannon_entropy(probs) -> float:
    """Shannon entropy in bits; zero entries contribute nothing."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > TAU_EIG]
    return float(-np.sum(p * np.log2(p)))


def entropy_of_matrix(m: np.ndarray) -> float:
    """Von Neumann entropy of a trusted positive matrix, normalized first.

    Internal fast path; use ``von_neumann_entropy`` for validated input.
    """
    vals = clamped_spectrum(np.asarray(m, dtype=complex))
    return max(0.0, shannon_entropy(vals))


def von_neumann_entropy(rho: StateLike) -> float:
    """S(rho) = -Tr[rho log2 rho] in bits."""
    return entropy_of_matrix(_state(rho).matrix)


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Square root of a positive semidefinite matrix via its eigendecomposition."""
    vals, vecs = scipy.linalg.eigh((m + m.conj().T) / 2)
    vals = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * vals) @ vecs.conj().T


def inv_sqrt_psd(m: np.ndarray, tol: float = TAU_EIG) -> np.ndarray:
    """Pseudo-inverse square root; eigenvalues at or below ``tol`` map to 0."""
    vals, vecs = scipy.linalg.eigh((m + m.conj().T) / 2)
    inv = np.zeros_like(vals)
    keep = vals > tol
    inv[keep] = 1.0 / np.sqrt(vals[keep])
    return (vecs * inv) @ vecs.conj().T


def _pure_vector(m: np.ndarray) -> np.ndarray | None:
    vals, vecs = np.linalg.eigh(m)
    if vals[-1] >= 1.0 - TAU_PSD and np.all(np.abs(vals[:-1]) <= TAU_PSD):
        return vecs[:, -1]
    return None


def fidelity(rho: StateLike, sigma: StateLike) -> float:
    """Uhlmann fidelity F = (Tr|sqrt(rho) sqrt(sigma)|)^2.

    When either argument is pure the closed form <psi|other|psi> is used.
    """
    a, b = _state(rho).matrix, _state(sigma).matrix
    if a.shape != b.shape:
        raise DimMismatch(f"fidelity of {a.shape[0]}- and {b.shape[0]}-dimensional states")
    for pure, other in ((b, a), (a, b)):
        psi = _pure_vector(pure)
        if psi is not None:
            value = np.real(np.vdot(psi, other @ psi))
            return float(np.clip(value, 0.0, 1.0))
    root = sqrt_psd(a)
    eigs = np.linalg.eigvalsh(root @ b @ root)
    value = np.sum(np.sqrt(np.clip(eigs, 0.0, None))) ** 2
    return float(np.clip(value, 0.0, 1.0))


def trace_norm(m: np.ndarray) -> float:
    """||m||_1, the sum of singular values."""
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    if m.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def relative_entropy(rho: StateLike, sigma: StateLike) -> float:
    """D(rho || sigma) in bits; +inf when supp(rho) is not inside supp(sigma)."""
    a, b = _state(rho).matrix, _state(sigma).matrix
    if a.shape != b.shape:
        raise DimMismatch(
            f"relative entropy of {a.shape[0]}- and {b.shape[0]}-dimensional states"
        )
    s_vals, s_vecs = scipy.linalg.eigh(b)
    support = s_vals > TAU_EIG
    kernel = s_vecs[:, ~support]
    if kernel.size and np.real(np.trace(kernel.conj().T @ a @ kernel)) > TAU_EIG:
        return float("inf")
    weights = np.real(np.einsum("ij,ik,kj->j", s_vecs.conj(), a, s_vecs))
    cross = float(np.sum(weights[support] * np.log2(s_vals[support])))
    value = -entropy_of_matrix(a) - cross
    return max(0.0, value)


def partial_trace_matrix(
    m: np.ndarray, dims: tuple[int, int], keep: Literal["A", "B"]
) -> np.ndarray:
    """Partial trace of an operator on A (x) B without state validation."""
    d_a, d_b = dims
    m = np.asarray(m, dtype=complex)
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimMismatch(f"operator of shape {m.shape} does not factor as {d_a} x {d_b}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_trace(
    state: StateLike, dims: tuple[int, int], keep: Literal["A", "B"]
) -> DensityOperator:
    """Reduced state on the kept factor of A (x) B."""
    return DensityOperator(partial_trace_matrix(_matrix(state), dims, keep))


def purify(rho: StateLike) -> BipartitePureState:
    """Canonical purification |Psi> = sum_i sqrt(l_i) |i>_R |v_i>_Q.

    Eigenvalues are taken in ascending order (lowest index first on ties), so a
    pure input yields |d-1>_R (x) |psi>.
    """
    state = _state(rho)
    vals, vecs = scipy.linalg.eigh(state.matrix)
    vals = np.clip(vals, 0.0, None)
    vals = vals / vals.sum()
    psi = (vecs * np.sqrt(vals)).T
    return BipartitePureState(psi.ravel(), (state.dim, state.dim))


def reference_marginal(psi: BipartitePureState) -> np.ndarray:
    """Tr_Q |Psi><Psi| as a matrix."""
    a = psi.as_matrix()
    return a @ a.conj().T


def system_marginal(psi: BipartitePureState) -> np.ndarray:
    """Tr_R |Psi><Psi| as a matrix."""
    a = psi.as_matrix()
    return a.T @ a.conj()


def require_state(rho: StateLike, dim: int | None = None, what: str = "state") -> DensityOperator:
    """Coerce to a DensityOperator and optionally check its dimension."""
    state = _state(rho)
    if dim is not None and state.dim != dim:
        raise DimMismatch(f"{what} has dimension {state.dim}, expected {dim}")
    return state
