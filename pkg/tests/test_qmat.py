"""Tests for the matrix primitives."""

import numpy as np
import pytest

from src.models import DensityOperator
from src.services.qmat import (
    eig_hermitian,
    fidelity,
    partial_trace,
    purify,
    relative_entropy,
    require_state,
    shannon_entropy,
    system_marginal,
    trace_norm,
    von_neumann_entropy,
)
from src.utils.errors import DimMismatch, InvalidState, NonHermitian
from src.utils.randomness import haar_unitary, random_density_matrix, random_hermitian

from .conftest import KET0, KET_PLUS


class TestSpectra:
    def test_eig_hermitian_reconstructs(self, rng):
        m = random_hermitian(rng, 4)
        vals, vecs = eig_hermitian(m)
        assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, m, atol=1e-10)
        assert np.allclose(vecs.conj().T @ vecs, np.eye(4), atol=1e-10)
        assert np.all(np.diff(vals) >= 0)

    def test_eig_hermitian_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_density_operator_rejects_bad_trace(self):
        with pytest.raises(InvalidState):
            DensityOperator(np.eye(2))


class TestEntropy:
    def test_diagonal_state(self):
        rho = DensityOperator(np.diag([0.25, 0.75]))
        assert von_neumann_entropy(rho) == pytest.approx(0.8112781244591328, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_maximally_mixed(self, d):
        assert von_neumann_entropy(DensityOperator.maximally_mixed(d)) == pytest.approx(np.log2(d))

    def test_pure_state_has_zero_entropy(self):
        assert von_neumann_entropy(DensityOperator.from_vector(KET_PLUS)) == pytest.approx(0.0)

    def test_shannon_ignores_zeros(self):
        assert shannon_entropy([0.5, 0.5, 0.0]) == pytest.approx(1.0)

    def test_unitary_invariance(self, rng):
        rho = random_density_matrix(rng, 3)
        u = haar_unitary(rng, 3)
        assert von_neumann_entropy(u @ rho @ u.conj().T) == pytest.approx(
            von_neumann_entropy(rho), abs=1e-10
        )

    def test_concavity(self, rng):
        for _ in range(100):
            d = int(rng.integers(2, 5))
            rho, sigma = random_density_matrix(rng, d), random_density_matrix(rng, d)
            mixed = von_neumann_entropy((rho + sigma) / 2)
            average = (von_neumann_entropy(rho) + von_neumann_entropy(sigma)) / 2
            assert mixed >= average - 1e-9


class TestDistances:
    def test_fidelity_of_pure_states(self):
        a = DensityOperator.from_vector(KET0)
        b = DensityOperator.from_vector(KET_PLUS)
        assert fidelity(a, b) == pytest.approx(0.5, abs=1e-12)

    def test_fidelity_of_mixed_states(self):
        value = fidelity(np.eye(2) / 2, np.diag([0.25, 0.75]))
        expected = (np.sqrt(0.125) + np.sqrt(0.375)) ** 2
        assert value == pytest.approx(expected, abs=1e-10)

    def test_fidelity_is_symmetric(self, rng):
        a, b = random_density_matrix(rng, 3), random_density_matrix(rng, 3)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-9)

    def test_trace_norm(self):
        assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0)

    def test_relative_entropy_support_violation(self):
        assert relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])) == float("inf")

    def test_relative_entropy_of_equal_states(self, rng):
        rho = random_density_matrix(rng, 3)
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(DimMismatch):
            fidelity(np.eye(2) / 2, np.eye(3) / 3)


class TestBipartite:
    def test_partial_trace_of_product(self, rng):
        a, b = random_density_matrix(rng, 2), random_density_matrix(rng, 3)
        joint = np.kron(a, b)
        assert np.allclose(partial_trace(joint, (2, 3), "A").matrix, a, atol=1e-12)
        assert np.allclose(partial_trace(joint, (2, 3), "B").matrix, b, atol=1e-12)

    def test_purification_reproduces_state(self, rng):
        rho = random_density_matrix(rng, 3)
        assert np.allclose(system_marginal(purify(rho)), rho, atol=1e-10)

    def test_pure_input_purifies_on_last_reference_vector(self):
        psi = purify(DensityOperator.from_vector(KET0))
        amplitudes = np.abs(psi.as_matrix())
        assert np.allclose(amplitudes, [[0.0, 0.0], [1.0, 0.0]], atol=1e-12)

    def test_require_state_checks_dimension(self):
        with pytest.raises(DimMismatch):
            require_state(np.eye(2) / 2, 3)
