"""Tests for instrument models and operations."""

import numpy as np
import pytest

from src.models import Channel, DensityOperator, OutcomeBranch, QuantumInstrument
from src.services.instruments import (
    apply_branch,
    apply_channelized,
    channel_instrument,
    channelize,
    complement_channel,
    depolarizing_channel,
    identity_instrument,
    is_single_kraus,
    outcome_distribution,
    output_channel_of,
    random_instrument,
    register_leakage,
    split_kraus,
    stinespring,
    unitary_branch_instrument,
    von_neumann_instrument,
    weak_measurement_instrument,
)
from src.services.qmat import partial_trace_matrix
from src.utils.errors import DimMismatch, InvalidInstrument, InvalidParams, InvalidState
from src.utils.randomness import (
    haar_unitary,
    random_density_matrix,
    random_hermitian,
    random_pure_vector,
)

from .conftest import KET_PLUS


class TestValidation:
    def test_incomplete_instrument_is_rejected(self):
        with pytest.raises(InvalidInstrument):
            QuantumInstrument((OutcomeBranch("0", (np.diag([1.0, 0.0]),)),), 2, 2)

    def test_duplicate_labels_are_rejected(self):
        half = np.eye(2) / np.sqrt(2)
        with pytest.raises(InvalidInstrument):
            QuantumInstrument(
                (OutcomeBranch("a", (half,)), OutcomeBranch("a", (half,))), 2, 2
            )

    def test_mismatched_kraus_shape(self):
        with pytest.raises(InvalidInstrument):
            QuantumInstrument.from_kraus({"a": [np.eye(2) / np.sqrt(2)], "b": [np.eye(3)]})

    def test_branch_lookup(self, vn_qubit):
        assert vn_qubit.branch("1") is vn_qubit.outcomes[1]
        assert vn_qubit.branch(0).label == "0"
        with pytest.raises(InvalidParams):
            vn_qubit.branch("2")


class TestBranches:
    def test_projective_branch_on_plus(self, vn_qubit):
        p, post = apply_branch(vn_qubit, "1", DensityOperator.from_vector(KET_PLUS))
        assert p == pytest.approx(0.5)
        assert np.allclose(post.matrix, np.diag([0.0, 1.0]))

    def test_impossible_branch_has_no_state(self, vn_qubit):
        p, post = apply_branch(vn_qubit, "1", DensityOperator.basis_state(2, 0))
        assert p == pytest.approx(0.0)
        assert post is None

    def test_input_dimension_is_checked(self, vn_qubit):
        with pytest.raises(DimMismatch):
            apply_branch(vn_qubit, "0", DensityOperator.maximally_mixed(3))

    def test_input_must_be_state(self, vn_qubit):
        with pytest.raises(InvalidState):
            outcome_distribution(vn_qubit, np.eye(2))

    def test_distribution_sums_to_one(self, rng):
        instr = random_instrument(rng, 3, 3, 2)
        probs = outcome_distribution(instr, random_density_matrix(rng, 3))
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.all(probs >= 0)


class TestChannelization:
    def test_output_is_block_diagonal(self, rng):
        instr = random_instrument(rng, 2, 3, 2)
        rho = random_density_matrix(rng, 2)
        out = apply_channelized(instr, rho)
        assert out.shape == (6, 6)
        assert register_leakage(out, 2, 3) < 1e-12
        assert np.trace(out).real == pytest.approx(1.0)

    def test_register_blocks_match_branches(self, rng):
        instr = random_instrument(rng, 2, 2, 1)
        rho = random_density_matrix(rng, 2)
        blocks = apply_channelized(instr, rho).reshape(2, 2, 2, 2)
        for m, branch in enumerate(instr.outcomes):
            assert np.allclose(blocks[:, m, :, m], branch.apply(rho), atol=1e-12)

    def test_leakage_detects_coherence(self):
        out = np.full((4, 4), 0.25)
        assert register_leakage(out, 2, 2) == pytest.approx(0.25)

    def test_channelize_dims(self, vn_qubit):
        ch = channelize(vn_qubit)
        assert (ch.in_dim, ch.out_dim) == (2, 4)


class TestDilations:
    def test_stinespring_reproduces_channel(self, rng):
        ch = channelize(random_instrument(rng, 2, 2, 2))
        dil = stinespring(ch)
        rebuilt = output_channel_of(dil)
        rho = random_density_matrix(rng, 2)
        assert np.allclose(rebuilt.apply(rho), ch.apply(rho), atol=1e-12)

    @pytest.mark.parametrize("d, outcomes, kraus", [(2, 2, 2), (3, 2, 1), (2, 3, 2)])
    def test_complement_shares_the_output_spectrum(self, rng, d, outcomes, kraus):
        dil = stinespring(channelize(random_instrument(rng, d, outcomes, kraus)))
        joint = dil.apply_joint(DensityOperator.from_vector(random_pure_vector(rng, d)).matrix)
        dims = (dil.out_dim, dil.anc_dim)
        output = np.sort(np.linalg.eigvalsh(partial_trace_matrix(joint, dims, "A")))[::-1]
        environment = np.sort(np.linalg.eigvalsh(partial_trace_matrix(joint, dims, "B")))[::-1]
        n = min(output.size, environment.size)
        assert np.allclose(output[:n], environment[:n], atol=1e-10)
        assert np.allclose(output[n:], 0.0, atol=1e-10)
        assert np.allclose(environment[n:], 0.0, atol=1e-10)

    def test_from_choi_repairs_a_perturbed_channel(self, rng):
        ch = channelize(random_instrument(rng, 2, 2, 1))
        noisy = ch.choi() + 1e-3 * random_hermitian(rng, ch.in_dim * ch.out_dim)
        repaired = Channel.from_choi(noisy, ch.in_dim, ch.out_dim)
        total = sum(k.conj().T @ k for k in repaired.kraus)
        assert np.allclose(total, np.eye(ch.in_dim), atol=1e-10)
        assert np.allclose(Channel.from_choi(ch.choi(), 2, 4).choi(), ch.choi(), atol=1e-10)

    def test_from_choi_rejects_a_map_without_trace(self):
        with pytest.raises(InvalidInstrument):
            Channel.from_choi(np.zeros((4, 4)), 2, 2)

    def test_complement_of_identity_is_trivial(self):
        comp = complement_channel(stinespring(Channel.identity(2)))
        assert comp.out_dim == 1
        assert np.allclose(comp.apply(np.eye(2) / 2), [[1.0]])

    def test_complement_of_measurement_is_dephasing(self, vn_qubit):
        comp = complement_channel(stinespring(channelize(vn_qubit)))
        rho = DensityOperator.from_vector(KET_PLUS).matrix
        env = comp.apply(rho)
        assert np.trace(env).real == pytest.approx(1.0)
        assert np.linalg.matrix_rank(env, tol=1e-9) == 2


class TestFactories:
    def test_identity_is_single_kraus(self):
        assert is_single_kraus(identity_instrument(3))

    def test_split_kraus_keeps_the_maps(self, vn_qubit):
        split = split_kraus(vn_qubit, "0")
        assert len(split.branch("0").kraus) == 2
        assert np.allclose(split.branch("0").choi(), vn_qubit.branch("0").choi(), atol=1e-12)
        assert is_single_kraus(split)

    def test_depolarizing_full_noise(self, rng):
        ch = depolarizing_channel(3, 1.0)
        assert np.allclose(ch.apply(random_density_matrix(rng, 3)), np.eye(3) / 3, atol=1e-12)

    def test_depolarizing_rejects_bad_probability(self):
        with pytest.raises(InvalidParams):
            depolarizing_channel(2, 1.5)

    def test_channel_instrument_wraps_channel(self):
        instr = channel_instrument(depolarizing_channel(2, 0.5))
        assert instr.n_outcomes == 1
        assert not is_single_kraus(instr)

    def test_unitary_branches(self, rng):
        us = [haar_unitary(rng, 2), haar_unitary(rng, 2)]
        instr = unitary_branch_instrument([0.3, 0.7], us)
        assert is_single_kraus(instr)
        probs = outcome_distribution(instr, random_density_matrix(rng, 2))
        assert np.allclose(probs, [0.3, 0.7])

    def test_unitary_branches_need_normalized_weights(self):
        with pytest.raises(InvalidParams):
            unitary_branch_instrument([0.3, 0.3], [np.eye(2), np.eye(2)])

    def test_weak_measurement(self):
        instr = weak_measurement_instrument(2, 0.75)
        probs = outcome_distribution(instr, DensityOperator.basis_state(2, 0))
        assert np.allclose(probs, [0.75, 0.25])

    def test_weak_measurement_strength_range(self):
        with pytest.raises(InvalidParams):
            weak_measurement_instrument(2, -0.1)

    def test_von_neumann_in_custom_basis(self):
        basis = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
        instr = von_neumann_instrument(2, basis, labels=["+", "-"])
        probs = outcome_distribution(instr, DensityOperator.from_vector(KET_PLUS))
        assert instr.labels == ["+", "-"]
        assert np.allclose(probs, [1.0, 0.0])

    def test_random_instrument_is_reproducible(self):
        a = random_instrument(7, 2, 2, 2)
        b = random_instrument(7, 2, 2, 2)
        for ba, bb in zip(a.outcomes, b.outcomes):
            assert all(np.allclose(x, y) for x, y in zip(ba.kraus, bb.kraus))

    def test_random_instrument_needs_room(self):
        with pytest.raises(InvalidParams):
            random_instrument(0, 4, 1, 1, out_dim=2)

    def test_random_instrument_output_dim(self, rng):
        instr = random_instrument(rng, 2, 2, 1, out_dim=3)
        assert (instr.in_dim, instr.out_dim) == (2, 3)
