"""Seeded random states, unitaries and isometries."""

import numpy as np
import scipy.linalg

from .errors import InvalidParams


def make_rng(seed: int | None) -> np.random.Generator:
    """Create the generator every random construction draws from."""
    return np.random.default_rng(seed)


def trial_seed(seed: int, index: int) -> int:
    """Per-trial seed: the suite seed XOR the trial index."""
    return int(seed) ^ int(index)


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Complex Gaussian matrix with unit-variance entries."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Haar-distributed isometry C^cols -> C^rows (QR of a Ginibre matrix, phase fixed).

    Args:
        rng: Random generator.
        rows: Output dimension.
        cols: Input dimension, at most ``rows``.

    Returns:
        ``rows x cols`` matrix V with V^dagger V = I.
    """
    if rows < 1 or cols < 1 or cols > rows:
        raise InvalidParams(f"isometry needs 1 <= cols <= rows, got {rows}x{cols}")
    q, r = scipy.linalg.qr(ginibre(rng, rows, cols), mode="economic")
    diag = np.diag(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phases[np.newaxis, :]


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    return haar_isometry(rng, d, d)


def random_pure_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    vec = ginibre(rng, d, 1)[:, 0]
    return vec / np.linalg.norm(vec)


def random_density_matrix(
    rng: np.random.Generator, d: int, rank: int | None = None
) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure.

    ``rank`` defaults to ``d``, which gives a full-rank state almost surely.
    """
    rank = d if rank is None else rank
    if rank < 1 or d < 1:
        raise InvalidParams(f"rank and dimension must be >= 1, got rank={rank}, d={d}")
    g = ginibre(rng, d, rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = ginibre(rng, d, d)
    return (g + g.conj().T) / 2
