"""Quantum instruments, channels and Stinespring dilations in Kraus form.

Choi matrices use the input-first convention
``J = sum_ij |i><j| (x) K(|i><j|)`` of shape ``(d_in*d_out, d_in*d_out)``.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

from ..utils.errors import (
    DimMismatch,
    InstanceValidationError,
    InvalidInstrument,
    InvalidParams,
)
from ..utils.matrix_codec import decode_matrix, encode_matrix
from ..utils.tolerances import TAU_RANK, TAU_TR
from .states import check_dim


def _kraus_tuple(kraus, what: str) -> tuple[np.ndarray, ...]:
    ops = tuple(np.array(k, dtype=complex) for k in kraus)
    if not ops:
        raise InvalidInstrument(f"{what} needs at least one Kraus operator")
    shape = ops[0].shape
    for op in ops:
        if op.ndim != 2 or op.shape != shape:
            raise InvalidInstrument(f"{what} Kraus operators must share one 2-D shape")
        if not np.all(np.isfinite(op)):
            raise InvalidInstrument(f"{what} has non-finite Kraus entries")
        op.setflags(write=False)
    return ops


def kraus_to_choi(kraus, d_in: int, d_out: int) -> np.ndarray:
    """Choi matrix (input first) of the CP map with the given Kraus operators."""
    choi = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in kraus:
        v = np.asarray(k).T.reshape(-1)
        choi += np.outer(v, v.conj())
    return choi


def choi_to_kraus(
    choi: np.ndarray, d_in: int, d_out: int, tol: float = TAU_RANK
) -> list[np.ndarray]:
    """Kraus operators from the eigenvectors of a (PSD-clipped) Choi matrix."""
    vals, vecs = scipy.linalg.eigh((choi + choi.conj().T) / 2)
    kraus = []
    for val, vec in zip(vals[::-1], vecs.T[::-1]):
        if val <= tol:
            break
        kraus.append(np.sqrt(val) * vec.reshape(d_in, d_out).T)
    if not kraus:
        kraus.append(np.zeros((d_out, d_in), dtype=complex))
    return kraus


def apply_kraus(kraus, rho: np.ndarray) -> np.ndarray:
    """sum_k K rho K^dagger (unnormalized)."""
    return sum(k @ rho @ k.conj().T for k in kraus)


@dataclass(frozen=True, eq=False)
class OutcomeBranch:
    """One outcome m of an instrument with its Kraus operators E_{m,k}."""

    label: str
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise InvalidInstrument("outcome label must be a non-empty string")
        object.__setattr__(self, "kraus", _kraus_tuple(self.kraus, f"outcome {self.label!r}"))

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    def effect(self) -> np.ndarray:
        """POVM effect sum_k E^dagger E."""
        return sum(k.conj().T @ k for k in self.kraus)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Unnormalized branch output E_m(rho)."""
        return apply_kraus(self.kraus, rho)

    def choi(self) -> np.ndarray:
        return kraus_to_choi(self.kraus, self.in_dim, self.out_dim)

    def kraus_rank(self, tol: float = TAU_RANK) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.choi()) > tol))

    def to_dict(self) -> dict:
        return {"label": self.label, "kraus": [encode_matrix(k) for k in self.kraus]}

    @classmethod
    def from_dict(cls, data: dict, path: str = "$") -> "OutcomeBranch":
        kraus = data.get("kraus")
        if not isinstance(kraus, list) or not kraus:
            raise InstanceValidationError(f"{path}.kraus", "expected a non-empty list of matrices")
        return cls(
            label=str(data.get("label", "")),
            kraus=tuple(decode_matrix(k, f"{path}.kraus[{i}]") for i, k in enumerate(kraus)),
        )


@dataclass(frozen=True, eq=False)
class QuantumInstrument:
    """Outcome-indexed CP maps whose sum is trace preserving."""

    outcomes: tuple[OutcomeBranch, ...]
    in_dim: int
    out_dim: int

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        d_in = check_dim(self.in_dim, "in_dim")
        d_out = check_dim(self.out_dim, "out_dim")
        if not outcomes:
            raise InvalidInstrument("instrument needs at least one outcome")
        labels = [b.label for b in outcomes]
        if len(set(labels)) != len(labels):
            raise InvalidInstrument(f"duplicate outcome labels in {labels}")
        for branch in outcomes:
            if (branch.out_dim, branch.in_dim) != (d_out, d_in):
                raise InvalidInstrument(
                    f"outcome {branch.label!r} has Kraus shape "
                    f"{branch.out_dim}x{branch.in_dim}, expected {d_out}x{d_in}"
                )
        total = sum(b.effect() for b in outcomes)
        deviation = np.max(np.abs(total - np.eye(d_in)))
        if deviation > TAU_TR:
            raise InvalidInstrument(
                f"sum of effects deviates from identity by {deviation:.3e}"
            )
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "in_dim", d_in)
        object.__setattr__(self, "out_dim", d_out)

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.outcomes]

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    def branch(self, m: Union[str, int]) -> OutcomeBranch:
        """Branch by label or by position."""
        if isinstance(m, str):
            for b in self.outcomes:
                if b.label == m:
                    return b
            raise InvalidParams(f"unknown outcome label {m!r}")
        if isinstance(m, (int, np.integer)) and 0 <= m < len(self.outcomes):
            return self.outcomes[m]
        raise InvalidParams(f"outcome index {m!r} out of range")

    def to_dict(self) -> dict:
        return {
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "outcomes": [b.to_dict() for b in self.outcomes],
        }

    @classmethod
    def from_kraus(cls, branches: dict[str, list]) -> "QuantumInstrument":
        """Build from ``{label: [kraus, ...]}`` in insertion order."""
        outcomes = tuple(OutcomeBranch(label, tuple(kraus)) for label, kraus in branches.items())
        if not outcomes:
            raise InvalidInstrument("instrument needs at least one outcome")
        return cls(outcomes, outcomes[0].in_dim, outcomes[0].out_dim)


@dataclass(frozen=True, eq=False)
class Channel:
    """Trace-preserving CP map in Kraus form."""

    kraus: tuple[np.ndarray, ...]
    in_dim: int
    out_dim: int

    def __post_init__(self):
        kraus = _kraus_tuple(self.kraus, "channel")
        d_in = check_dim(self.in_dim, "in_dim")
        d_out = check_dim(self.out_dim, "out_dim")
        if kraus[0].shape != (d_out, d_in):
            raise DimMismatch(f"Kraus shape {kraus[0].shape} does not match {d_out}x{d_in}")
        total = sum(k.conj().T @ k for k in kraus)
        deviation = np.max(np.abs(total - np.eye(d_in)))
        if deviation > TAU_TR:
            raise InvalidInstrument(f"channel is not trace preserving (deviation {deviation:.3e})")
        object.__setattr__(self, "kraus", kraus)
        object.__setattr__(self, "in_dim", d_in)
        object.__setattr__(self, "out_dim", d_out)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply_kraus(self.kraus, np.asarray(rho, dtype=complex))

    def choi(self) -> np.ndarray:
        return kraus_to_choi(self.kraus, self.in_dim, self.out_dim)

    @classmethod
    def identity(cls, d: int) -> "Channel":
        return cls((np.eye(check_dim(d)),), d, d)

    @classmethod
    def unitary(cls, u: np.ndarray) -> "Channel":
        u = np.asarray(u, dtype=complex)
        return cls((u,), u.shape[1], u.shape[0])

    @classmethod
    def from_choi(cls, choi: np.ndarray, in_dim: int, out_dim: int) -> "Channel":
        """Repair a Choi matrix into a valid channel.

        Negative eigenvalues are clipped, then the Kraus operators are
        renormalized K -> K S^(-1/2) with S = sum K^dagger K, which makes the
        result exactly trace preserving.
        """
        kraus = choi_to_kraus(choi, in_dim, out_dim)
        total = sum(k.conj().T @ k for k in kraus)
        vals, vecs = scipy.linalg.eigh((total + total.conj().T) / 2)
        if vals[0] <= TAU_RANK:
            raise InvalidInstrument("Choi matrix is too far from trace preserving to repair")
        s_inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
        return cls(tuple(k @ s_inv_sqrt for k in kraus), in_dim, out_dim)

    def to_dict(self) -> dict:
        return {
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "kraus": [encode_matrix(k) for k in self.kraus],
        }


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """Isometry V: Q -> Q' (x) A with V|phi> = sum_k (K_k|phi>) (x) |k>_A."""

    isometry: np.ndarray
    in_dim: int
    out_dim: int
    anc_dim: int

    def __post_init__(self):
        v = np.array(self.isometry, dtype=complex)
        if v.shape != (self.out_dim * self.anc_dim, self.in_dim):
            raise DimMismatch(
                f"isometry shape {v.shape} does not match "
                f"({self.out_dim}*{self.anc_dim}) x {self.in_dim}"
            )
        deviation = np.max(np.abs(v.conj().T @ v - np.eye(self.in_dim)))
        if deviation > TAU_TR:
            raise InvalidInstrument(f"V is not an isometry (deviation {deviation:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "isometry", v)

    def apply_joint(self, rho: np.ndarray) -> np.ndarray:
        """V rho V^dagger on Q' (x) A."""
        return self.isometry @ np.asarray(rho, dtype=complex) @ self.isometry.conj().T

