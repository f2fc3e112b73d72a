"""Tests for recovery-channel optimization."""

import numpy as np
import pytest

from src.models import Channel, Ensemble, RecoveryProvenance
from src.models.reports import BranchRecovery, RecoveryChannel
from src.services.ensembles import average_state
from src.services.instruments import (
    channel_instrument,
    depolarizing_channel,
    identity_instrument,
    random_instrument,
    unitary_branch_instrument,
)
from src.services.qmat import partial_trace_matrix
from src.services.recovery import (
    RecoveryOptimizer,
    entanglement_fidelity,
    entanglement_problems,
    optimize_recovery_average,
    optimize_recovery_entanglement,
    petz_recovery,
    project_cptp,
    project_psd,
)
from src.utils.errors import ConvergenceFailure, DegenerateBranch, InvalidParams
from src.utils.randomness import haar_unitary, random_density_matrix, random_hermitian


class TestProjections:
    def test_psd_projection_clips_negative_eigenvalues(self):
        projected = project_psd(np.diag([1.0, -0.5]))
        assert np.allclose(projected, np.diag([1.0, 0.0]))

    def test_cptp_projection(self, rng):
        choi = random_hermitian(rng, 4)
        projected = project_cptp(choi, 2, 2, max_iter=2000)
        assert np.linalg.eigvalsh(projected)[0] >= -1e-3
        assert np.allclose(partial_trace_matrix(projected, (2, 2), "A"), np.eye(2), atol=1e-6)

    def test_channel_choi_is_a_fixed_point(self, rng):
        choi = Channel.unitary(haar_unitary(rng, 2)).choi()
        assert np.allclose(project_cptp(choi, 2, 2), choi, atol=1e-8)


class TestPetz:
    def test_petz_undoes_a_unitary(self, rng):
        u = haar_unitary(rng, 2)
        instr = unitary_branch_instrument([1.0], [u])
        rho = random_density_matrix(rng, 2)
        recovery = petz_recovery(rho, instr.outcomes[0])
        sigma = random_density_matrix(rng, 2)
        assert np.allclose(recovery.apply(u @ sigma @ u.conj().T), sigma, atol=1e-8)

    def test_petz_on_impossible_branch(self, vn_qubit):
        with pytest.raises(DegenerateBranch):
            petz_recovery(np.diag([1.0, 0.0]), vn_qubit.branch("1"))

    def test_petz_is_trace_preserving_off_support(self, vn_qubit):
        recovery = petz_recovery(np.eye(2) / 2, vn_qubit.branch("0"))
        total = sum(k.conj().T @ k for k in recovery.kraus)
        assert np.allclose(total, np.eye(2), atol=1e-9)


class TestOptimizer:
    def test_invalid_parameters(self):
        with pytest.raises(InvalidParams):
            RecoveryOptimizer(tol=0.0)

    def test_unitary_branches_are_perfectly_recoverable(self, rng, optimizer):
        instr = unitary_branch_instrument([0.4, 0.6], [haar_unitary(rng, 2), haar_unitary(rng, 2)])
        recovery, f_e = optimize_recovery_entanglement(
            random_density_matrix(rng, 2), instr, optimizer=optimizer
        )
        assert f_e == pytest.approx(1.0, abs=1e-8)
        assert recovery.converged

    def test_identity_needs_no_work(self, mixed_qubit, optimizer):
        recovery, f_e = optimize_recovery_entanglement(
            mixed_qubit, identity_instrument(2), optimizer=optimizer
        )
        assert f_e == pytest.approx(1.0)
        assert recovery.branches[0].iterations == 0

    def test_projective_measurement_on_maximally_mixed(self, mixed_qubit, vn_qubit, optimizer):
        _, f_e = optimize_recovery_entanglement(mixed_qubit, vn_qubit, optimizer=optimizer)
        assert f_e == pytest.approx(0.5, abs=1e-3)

    def test_full_depolarizing(self, orthogonal_pair, optimizer):
        instr = channel_instrument(depolarizing_channel(2, 1.0))
        _, f_e = optimize_recovery_entanglement(
            average_state(orthogonal_pair), instr, optimizer=optimizer
        )
        _, f_av = optimize_recovery_average(orthogonal_pair, instr, optimizer=optimizer)
        assert f_e == pytest.approx(0.25, abs=1e-3)
        assert f_av == pytest.approx(0.5, abs=1e-3)

    def test_average_fidelity_of_two_states(self, zero_plus, vn_qubit, optimizer):
        recovery, f_av = optimize_recovery_average(zero_plus, vn_qubit, optimizer=optimizer)
        assert f_av == pytest.approx(0.375 + np.sqrt(0.078125) + 0.25, abs=1e-4)
        assert recovery.objective == "average"

    def test_average_never_below_entanglement(self, rng, optimizer):
        instr = random_instrument(rng, 2, 2, 2)
        vectors = [np.array([1.0, 0.0]), np.array([0.6, 0.8])]
        s = Ensemble.from_vectors(["a", "b"], [0.5, 0.5], vectors)
        _, f_e = optimize_recovery_entanglement(average_state(s), instr, optimizer=optimizer)
        _, f_av = optimize_recovery_average(s, instr, optimizer=optimizer)
        assert f_av >= f_e - 1e-9

    def test_values_are_attained_by_the_returned_channels(self, rng, optimizer):
        rho = random_density_matrix(rng, 2)
        instr = random_instrument(rng, 2, 2, 2)
        recovery, f_e = optimize_recovery_entanglement(rho, instr, optimizer=optimizer)
        problems = entanglement_problems(rho, instr)
        total = sum(p.value(recovery.channel(p.label)) for p in problems)
        assert total == pytest.approx(f_e, abs=1e-9)
        assert f_e <= 1.0 + 1e-9

    @pytest.mark.parametrize("d, outcomes, kraus", [(2, 2, 1), (2, 2, 2), (3, 2, 2)])
    def test_beats_petz_and_identity(self, rng, optimizer, d, outcomes, kraus):
        rho = random_density_matrix(rng, d)
        instr = random_instrument(rng, d, outcomes, kraus)
        _, f_e = optimize_recovery_entanglement(rho, instr, optimizer=optimizer)
        petz = RecoveryChannel(
            tuple(
                BranchRecovery(b.label, petz_recovery(rho, b), RecoveryProvenance.PETZ, 0.0)
                for b in instr.outcomes
            ),
            "entanglement",
        )
        identity = RecoveryChannel(
            tuple(
                BranchRecovery(b.label, Channel.identity(d), RecoveryProvenance.IDENTITY, 0.0)
                for b in instr.outcomes
            ),
            "entanglement",
        )
        assert f_e >= entanglement_fidelity(rho, instr, petz) - 1e-9
        assert f_e >= entanglement_fidelity(rho, instr, identity) - 1e-9

    def test_strict_mode_raises_at_the_cap(self, rng):
        instr = random_instrument(rng, 2, 2, 2)
        strict = RecoveryOptimizer(max_iter=1, strict=True)
        with pytest.raises(ConvergenceFailure):
            optimize_recovery_entanglement(random_density_matrix(rng, 2), instr, optimizer=strict)

    def test_cap_is_flagged_when_not_strict(self, rng):
        instr = random_instrument(rng, 2, 2, 2)
        lenient = RecoveryOptimizer(max_iter=1)
        recovery, _ = optimize_recovery_entanglement(
            random_density_matrix(rng, 2), instr, optimizer=lenient
        )
        assert not recovery.converged

    def test_parallel_branches_match_serial(self, rng):
        rho = random_density_matrix(rng, 2)
        instr = random_instrument(rng, 2, 3, 1)
        serial = RecoveryOptimizer(tol=1e-6, max_iter=500)
        parallel = RecoveryOptimizer(tol=1e-6, max_iter=500, max_workers=3)
        _, a = optimize_recovery_entanglement(rho, instr, optimizer=serial)
        _, b = optimize_recovery_entanglement(rho, instr, optimizer=parallel)
        assert a == pytest.approx(b, abs=1e-12)


def test_direct_fidelity_of_identity_recovery(mixed_qubit):
    instr = identity_instrument(2)
    branch = BranchRecovery("0", Channel.identity(2), RecoveryProvenance.IDENTITY, 1.0)
    recovery = RecoveryChannel((branch,), "entanglement")
    assert entanglement_fidelity(mixed_qubit, instr, recovery) == pytest.approx(1.0)
