"""Tests for mutual information, accessible information and the quantum information gain."""

import numpy as np
import pytest

from src.models import DensityOperator
from src.services.ensembles import average_state
from src.services.info_gain import (
    AccessibleInfoSearch,
    accessible_info_lower,
    fibonacci_sphere,
    info_equivalence_report,
    mutual_information,
    quantum_info_gain,
    reference_ensemble,
    t_bound,
    t_envelope,
)
from src.services.instruments import (
    channel_instrument,
    depolarizing_channel,
    identity_instrument,
    random_instrument,
)
from src.services.qmat import purify, von_neumann_entropy
from src.utils.errors import DimMismatch, DomainError, InvalidParams
from src.utils.randomness import haar_unitary, random_density_matrix


class TestMutualInformation:
    def test_joint_table(self, zero_plus, vn_qubit):
        joint, _ = mutual_information(zero_plus, vn_qubit)
        assert np.allclose(joint.table, [[0.5, 0.0], [0.25, 0.25]])
        assert joint.x_labels == ("0", "+")
        assert joint.m_labels == ("0", "1")

    def test_value(self, zero_plus, vn_qubit):
        _, bits = mutual_information(zero_plus, vn_qubit)
        assert bits == pytest.approx(0.3112781245, abs=1e-9)

    def test_orthogonal_states_are_distinguished(self, orthogonal_pair, vn_qubit):
        assert mutual_information(orthogonal_pair, vn_qubit)[1] == pytest.approx(1.0)

    def test_dimension_mismatch(self, zero_plus):
        with pytest.raises(DimMismatch):
            mutual_information(zero_plus, identity_instrument(3))


class TestQuantumInfoGain:
    def test_rank_one_measurement_gains_the_entropy(self, zero_plus, vn_qubit):
        rho = average_state(zero_plus)
        assert quantum_info_gain(rho, vn_qubit) == pytest.approx(von_neumann_entropy(rho))

    def test_identity_gains_nothing(self, rng):
        rho = random_density_matrix(rng, 3)
        assert quantum_info_gain(rho, identity_instrument(3)) == pytest.approx(0.0, abs=1e-10)

    def test_single_outcome_channel_gains_nothing(self, mixed_qubit):
        instr = channel_instrument(depolarizing_channel(2, 0.4))
        assert quantum_info_gain(mixed_qubit, instr) == pytest.approx(0.0, abs=1e-10)

    def test_independent_of_purification(self, rng):
        rho = DensityOperator(random_density_matrix(rng, 2))
        instr = random_instrument(rng, 2, 3, 1)
        psi = purify(rho).apply_reference_unitary(haar_unitary(rng, 2))
        assert quantum_info_gain(rho, instr, psi) == pytest.approx(
            quantum_info_gain(rho, instr), abs=1e-10
        )

    def test_foreign_purification_is_rejected(self, vn_qubit):
        psi = purify(DensityOperator.basis_state(2, 0))
        with pytest.raises(DimMismatch):
            reference_ensemble(np.eye(2) / 2, vn_qubit, psi)

    def test_reference_weights_are_outcome_probabilities(self, zero_plus, vn_qubit):
        ref = reference_ensemble(average_state(zero_plus), vn_qubit)
        assert np.allclose(ref.weights, [0.75, 0.25])


class TestAccessibleInformation:
    def test_maximally_mixed_qubit_reaches_one_bit(self, mixed_qubit, vn_qubit):
        assert accessible_info_lower(mixed_qubit, vn_qubit, search_budget=100) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_lies_between_ensemble_information_and_iota(self, zero_plus, vn_qubit):
        rho = average_state(zero_plus)
        estimate = AccessibleInfoSearch(search_budget=200).run(rho, vn_qubit)
        assert estimate.bits >= 0.3112781245 - 1e-6
        assert estimate.bits <= quantum_info_gain(rho, vn_qubit) + 1e-9
        assert estimate.candidates >= 202

    def test_search_is_seeded(self, rng):
        rho = random_density_matrix(rng, 3)
        instr = random_instrument(rng, 3, 2, 2)
        first = accessible_info_lower(rho, instr, search_budget=50, seed=4)
        second = accessible_info_lower(rho, instr, search_budget=50, seed=4)
        assert first == second
        assert first <= quantum_info_gain(rho, instr) + 1e-9

    def test_budget_must_be_positive(self):
        with pytest.raises(InvalidParams):
            AccessibleInfoSearch(search_budget=0)

    def test_fibonacci_sphere_covers_the_poles(self):
        points = fibonacci_sphere(100)
        assert points.shape == (100, 2)
        assert points[0, 0] < 0.2
        assert points[-1, 0] > np.pi - 0.2


class TestUpperBound:
    def test_values(self):
        assert t_bound(0.0, 2) == 0.0
        assert t_bound(1.0, 2) == pytest.approx(1.0)
        assert t_bound(0.5, 2) == pytest.approx(1.0)
        assert t_bound(1.0, 5) == pytest.approx(2.0)

    @pytest.mark.parametrize("x, d", [(1.5, 2), (-0.1, 2), (0.5, 1)])
    def test_domain(self, x, d):
        with pytest.raises(DomainError):
            t_bound(x, d)

    def test_envelope_is_flat_past_the_peak(self):
        peak_value = 2.0 / (np.e * np.log(2.0))
        assert t_envelope(1.0, 2) == pytest.approx(peak_value)
        assert t_envelope(0.9, 2) == pytest.approx(peak_value)
        assert t_envelope(0.5, 2) == pytest.approx(t_bound(0.5, 2))

    def test_envelope_is_nondecreasing(self):
        xs = np.linspace(0.0, 1.0, 101)
        values = [t_envelope(x, 3) for x in xs]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


class TestEquivalenceReport:
    def test_maximally_mixed_qubit(self, mixed_qubit, vn_qubit, orthogonal_pair):
        report = info_equivalence_report(
            mixed_qubit, vn_qubit, ensemble=orthogonal_pair, search_budget=100
        )
        assert report.iota == pytest.approx(1.0)
        assert report.i_acc_lower == pytest.approx(1.0, abs=1e-9)
        assert report.holevo_slack >= -1e-9
        assert report.frame_const == pytest.approx(3.0, abs=1e-9)
        assert report.bound_saturated
        assert report.t_bound >= report.iota
        assert report.norm_sum == pytest.approx(1.0)
        assert report.norm_slack >= 0.0
        assert report.mutual_info == pytest.approx(1.0)
        assert report.to_dict()["slacks"]["upper"] is None

    def test_random_instrument_respects_the_chain(self, rng):
        rho = random_density_matrix(rng, 3)
        instr = random_instrument(rng, 3, 3, 1)
        report = info_equivalence_report(rho, instr, search_budget=100)
        assert report.i_acc_lower <= report.iota + 1e-9
        assert report.t_bound >= report.iota - 1e-9
        assert report.norm_slack >= -1e-9
        assert report.mutual_info is None
