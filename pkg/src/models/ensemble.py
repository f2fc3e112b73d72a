"""Ensembles, POVMs, complete paths and irreducibility results."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..utils.errors import (
    DimMismatch,
    InstanceValidationError,
    InvalidParams,
    InvalidState,
    MixedStates,
)
from ..utils.matrix_codec import (
    decode_matrix,
    decode_vector,
    encode_matrix,
    encode_vector,
    is_matrix_data,
)
from ..utils.tolerances import TAU_PSD, TAU_TR
from .states import DensityOperator, PureState, check_dim


@dataclass(frozen=True, eq=False)
class EnsembleEntry:
    """One (label, p(x), state) triple. ``vector`` is kept for pure entries."""

    label: str
    p: float
    state: DensityOperator
    vector: Optional[np.ndarray] = None

    @property
    def is_pure(self) -> bool:
        return self.vector is not None or self.state.is_pure


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability-weighted list of states on a common space."""

    entries: tuple[EnsembleEntry, ...]
    dim: int

    def __post_init__(self):
        entries = tuple(self.entries)
        d = check_dim(self.dim)
        if not entries:
            raise InvalidParams("ensemble needs at least one entry")
        labels = [e.label for e in entries]
        if len(set(labels)) != len(labels):
            raise InvalidParams(f"duplicate ensemble labels in {labels}")
        for e in entries:
            if not (e.p > 0):
                raise InvalidParams(f"entry {e.label!r} has non-positive probability {e.p}")
            if e.state.dim != d:
                raise DimMismatch(f"entry {e.label!r} has dimension {e.state.dim}, expected {d}")
        total = sum(e.p for e in entries)
        if abs(total - 1.0) > TAU_TR:
            raise InvalidParams(f"probabilities sum to {total:.12g}, expected 1")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dim", d)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.p for e in self.entries], dtype=float)

    @property
    def matrices(self) -> list[np.ndarray]:
        return [e.state.matrix for e in self.entries]

    @property
    def is_pure(self) -> bool:
        return all(e.is_pure for e in self.entries)

    def pure_vectors(self) -> list[np.ndarray]:
        """State vectors of a pure ensemble.

        Raises:
            MixedStates: If any entry is not pure within tolerance.
        """
        vectors = []
        for e in self.entries:
            if e.vector is not None:
                vectors.append(e.vector)
                continue
            if not e.state.is_pure:
                raise MixedStates(f"entry {e.label!r} is not a pure state")
            vals, vecs = np.linalg.eigh(e.state.matrix)
            vectors.append(vecs[:, -1])
        return vectors

    @classmethod
    def from_vectors(cls, labels, probs, vectors) -> "Ensemble":
        entries = []
        for label, p, vec in zip(labels, probs, vectors):
            pure = PureState.normalized(vec)
            entries.append(EnsembleEntry(str(label), float(p), pure.density(), pure.amplitudes))
        if not entries:
            raise InvalidParams("ensemble needs at least one entry")
        return cls(tuple(entries), entries[0].state.dim)

    @classmethod
    def from_states(cls, labels, probs, matrices) -> "Ensemble":
        entries = [
            EnsembleEntry(str(label), float(p), DensityOperator(m))
            for label, p, m in zip(labels, probs, matrices)
        ]
        if not entries:
            raise InvalidParams("ensemble needs at least one entry")
        return cls(tuple(entries), entries[0].state.dim)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [
                {
                    "label": e.label,
                    "p": e.p,
                    "state": (
                        encode_vector(e.vector)
                        if e.vector is not None
                        else encode_matrix(e.state.matrix)
                    ),
                }
                for e in self.entries
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "$") -> "Ensemble":
        """Decode the ensemble schema; vectors are accepted for pure states."""
        if not isinstance(data, dict):
            raise InstanceValidationError(path, "expected an object")
        dim = data.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise InstanceValidationError(f"{path}.dim", "expected a positive integer")
        raw_entries = data.get("entries")
        if not isinstance(raw_entries, list) or not raw_entries:
            raise InstanceValidationError(f"{path}.entries", "expected a non-empty list")
        entries = []
        for i, raw in enumerate(raw_entries):
            where = f"{path}.entries[{i}]"
            if not isinstance(raw, dict):
                raise InstanceValidationError(where, "expected an object")
            p = raw.get("p")
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not p > 0:
                raise InstanceValidationError(f"{where}.p", "expected a positive number")
            label = raw.get("label", f"x{i}")
            state_data = raw.get("state")
            try:
                if is_matrix_data(state_data):
                    matrix = decode_matrix(state_data, f"{where}.state")
                    if matrix.shape != (dim, dim):
                        raise InstanceValidationError(
                            f"{where}.state", f"expected a {dim}x{dim} matrix"
                        )
                    entries.append(EnsembleEntry(str(label), float(p), DensityOperator(matrix)))
                else:
                    vec = decode_vector(state_data, f"{where}.state")
                    if vec.size != dim:
                        raise InstanceValidationError(
                            f"{where}.state", f"expected {dim} amplitudes, got {vec.size}"
                        )
                    pure = PureState(vec)
                    entries.append(
                        EnsembleEntry(str(label), float(p), pure.density(), pure.amplitudes)
                    )
            except InvalidState as exc:
                raise InstanceValidationError(f"{where}.state", str(exc)) from exc
        try:
            return cls(tuple(entries), dim)
        except (InvalidParams, DimMismatch) as exc:
            raise InstanceValidationError(f"{path}.entries", str(exc)) from exc


@dataclass(frozen=True, eq=False)
class Povm:
    """Outcome-indexed positive operators summing to the identity."""

    elements: tuple[tuple[str, np.ndarray], ...]
    dim: int

    def __post_init__(self):
        d = check_dim(self.dim)
        elements = []
        for label, op in self.elements:
            op = np.array(op, dtype=complex)
            if op.shape != (d, d):
                raise DimMismatch(f"POVM element {label!r} has shape {op.shape}, expected {d}")
            op = (op + op.conj().T) / 2
            if np.linalg.eigvalsh(op)[0] < -TAU_PSD:
                raise InvalidParams(f"POVM element {label!r} is not positive semidefinite")
            op.setflags(write=False)
            elements.append((str(label), op))
        if not elements:
            raise InvalidParams("POVM needs at least one element")
        total = sum(op for _, op in elements)
        deviation = np.max(np.abs(total - np.eye(d)))
        if deviation > TAU_TR:
            raise InvalidParams(f"POVM elements sum to identity only within {deviation:.3e}")
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "dim", d)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.elements]

    @property
    def operators(self) -> list[np.ndarray]:
        return [op for _, op in self.elements]

    @classmethod
    def from_vectors(cls, labels, vectors, weight: float = 1.0) -> "Povm":
        """Rank-one POVM ``{weight * |v><v|}``."""
        elements = []
        for label, v in zip(labels, vectors):
            v = np.asarray(v, dtype=complex)
            elements.append((label, weight * np.outer(v, v.conj())))
        return cls(tuple(elements), len(np.asarray(vectors[0])))


@dataclass(frozen=True)
class CompletePath:
    """Walk over ensemble labels that visits every label at least once."""

    sequence: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.sequence)

    def covers(self, labels) -> bool:
        return set(labels) <= set(self.sequence)


@dataclass(frozen=True)
class IrreducibilityResult:
    """eta(s), zeta(s) = eta * min_p and the path attaining eta."""

    eta: float
    zeta: float
    min_p: float
    witness_path: CompletePath = field(default_factory=lambda: CompletePath(()))
    bottleneck: float = 0.0
    n_max: int = 0

    @property
    def irreducible(self) -> bool:
        return self.eta > 0

    def to_dict(self) -> dict:
        return {
            "eta": self.eta,
            "zeta": self.zeta,
            "min_p": self.min_p,
            "witness_path": list(self.witness_path.sequence),
            "path_length": self.witness_path.length,
            "bottleneck": self.bottleneck,
            "n_max": self.n_max,
        }
