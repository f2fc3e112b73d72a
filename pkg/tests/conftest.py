"""Shared fixtures: seeded generators, standard qubit states and instruments."""

import numpy as np
import pytest

from src.models import DensityOperator, Ensemble
from src.services.instruments import von_neumann_instrument
from src.services.recovery import RecoveryOptimizer

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def zero_plus():
    """Uniform {|0>, |+>}."""
    return Ensemble.from_vectors(["0", "+"], [0.5, 0.5], [KET0, KET_PLUS])


@pytest.fixture
def orthogonal_pair():
    """Uniform {|0>, |1>}."""
    return Ensemble.from_vectors(["0", "1"], [0.5, 0.5], [KET0, KET1])


@pytest.fixture
def mixed_qubit():
    return DensityOperator.maximally_mixed(2)


@pytest.fixture
def vn_qubit():
    """Computational-basis projective instrument on a qubit."""
    return von_neumann_instrument(2)


@pytest.fixture
def optimizer():
    return RecoveryOptimizer(tol=1e-7, max_iter=3000)
