"""Quantum state data models: density operators and pure states."""

from dataclasses import dataclass

import numpy as np

from ..utils.errors import DimMismatch, InvalidParams, InvalidState
from ..utils.matrix_codec import decode_matrix, decode_vector, encode_matrix, encode_vector
from ..utils.tolerances import TAU_HERM, TAU_PSD, TAU_PURE, TAU_TR


def check_dim(d: int, name: str = "dim") -> int:
    """Validate a Hilbert-space dimension (positive integer)."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 1:
        raise InvalidParams(f"{name} must be a positive integer, got {d!r}")
    return int(d)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive, unit-trace Hermitian matrix.

    The stored matrix is the Hermitian part of the input and is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidState(f"density operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidState("density operator has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > TAU_HERM:
            raise InvalidState("density operator is not Hermitian")
        m = (m + m.conj().T) / 2
        trace = np.trace(m).real
        if abs(trace - 1.0) > TAU_TR:
            raise InvalidState(f"density operator trace is {trace:.12g}, expected 1")
        lowest = np.linalg.eigvalsh(m)[0]
        if lowest < -TAU_PSD:
            raise InvalidState(f"density operator has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    @property
    def is_pure(self) -> bool:
        return 1.0 - self.purity <= TAU_PURE

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues."""
        return np.linalg.eigvalsh(self.matrix)

    @classmethod
    def from_vector(cls, amplitudes: np.ndarray) -> "DensityOperator":
        return PureState(amplitudes).density()

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityOperator":
        d = check_dim(d)
        return cls(np.eye(d) / d)

    @classmethod
    def basis_state(cls, d: int, index: int) -> "DensityOperator":
        vec = np.zeros(check_dim(d), dtype=complex)
        vec[index] = 1.0
        return cls(np.outer(vec, vec.conj()))

    def to_dict(self) -> dict:
        return {"matrix": encode_matrix(self.matrix)}

    @classmethod
    def from_dict(cls, data: dict, path: str = "$") -> "DensityOperator":
        return cls(decode_matrix(data.get("matrix"), f"{path}.matrix"))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector in C^d."""

    amplitudes: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex).ravel()
        if vec.size < 1:
            raise InvalidState("pure state needs at least one amplitude")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > TAU_TR:
            raise InvalidState(f"pure state has norm {norm:.12g}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(vec / norm))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> float:
        """|<self|other>|"""
        if other.dim != self.dim:
            raise DimMismatch(f"overlap of states with dims {self.dim} and {other.dim}")
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        """Build from an unnormalized nonzero vector."""
        vec = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InvalidState("cannot normalize the zero vector")
        return cls(vec / norm)

    def to_dict(self) -> dict:
        return {"vector": encode_vector(self.amplitudes)}

    @classmethod
    def from_dict(cls, data: dict, path: str = "$") -> "PureState":
        return cls(decode_vector(data.get("vector"), f"{path}.vector"))


@dataclass(frozen=True, eq=False)
class BipartitePureState:
    """Unit vector on R (x) Q, R index major (numpy ``kron`` order)."""

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        d_r, d_q = (check_dim(d, "dims") for d in self.dims)
        vec = np.asarray(self.amplitudes, dtype=complex).ravel()
        if vec.size != d_r * d_q:
            raise DimMismatch(f"{vec.size} amplitudes do not factor as {d_r} x {d_q}")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > TAU_TR:
            raise InvalidState(f"bipartite state has norm {norm:.12g}, expected 1")
        object.__setattr__(self, "dims", (d_r, d_q))
        object.__setattr__(self, "amplitudes", _frozen(vec / norm))

    @property
    def d_r(self) -> int:
        return self.dims[0]

    @property
    def d_q(self) -> int:
        return self.dims[1]

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as a ``(d_R, d_Q)`` matrix psi with Psi = sum psi[r, q] |r>|q>."""
        return self.amplitudes.reshape(self.dims)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def schmidt_coefficients(self) -> np.ndarray:
        """Descending Schmidt coefficients."""
        return np.linalg.svd(self.as_matrix(), compute_uv=False)

    def apply_reference_unitary(self, unitary: np.ndarray) -> "BipartitePureState":
        """(U (x) I)|Psi>; leaves the Q marginal unchanged."""
        u = np.asarray(unitary, dtype=complex)
        if u.shape != (self.d_r, self.d_r):
            raise DimMismatch(f"reference unitary has shape {u.shape}, expected {self.d_r}")
        return BipartitePureState((u @ self.as_matrix()).ravel(), self.dims)
