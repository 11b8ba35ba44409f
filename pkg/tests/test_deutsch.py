"""Tests for the quantum fixed-point (Deutsch) CTC solver."""

import numpy as np
import pytest

from ctclab import linalg
from ctclab.deutsch import (
    DeutschChannel,
    apply_channel,
    bell_swap_scenario,
    fixed_point_set,
    max_entropy_fixed_point,
    perturbation_entropy_check,
    run_deutsch_circuit,
    superoperator_matrix,
)
from ctclab.linalg import (
    CNOT,
    PAULI_X,
    SWAP,
    check_density_matrix,
    haar_random_unitary,
    ket,
    maximally_mixed,
    projector,
    random_density_matrix,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

RNG = np.random.default_rng(987654321)


def qubit_channel(unitary, rho_cr):
    return DeutschChannel(unitary=unitary, rho_cr_in=rho_cr, d_cr=2, d_ctc=2)


KET1 = projector(ket(1, 2))


class TestChannelConstruction:
    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            DeutschChannel(unitary=np.eye(4, dtype=complex),
                           rho_cr_in=maximally_mixed(2), d_cr=2, d_ctc=4)

    def test_rejects_invalid_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            DeutschChannel(unitary=np.zeros((4, 4)), rho_cr_in=maximally_mixed(2),
                           d_cr=2, d_ctc=2)

    def test_json_round_trip(self):
        ch = qubit_channel(SWAP.copy(), maximally_mixed(2))
        again = DeutschChannel.from_json(ch.to_json())
        np.testing.assert_array_equal(again.unitary, ch.unitary)
        np.testing.assert_array_equal(again.rho_cr_in, ch.rho_cr_in)


class TestApplyChannel:
    def test_swap_returns_cr_input(self):
        rho = random_density_matrix(2, RNG)
        ch = qubit_channel(SWAP.copy(), rho)
        for _ in range(5):
            sigma = random_density_matrix(2, RNG)
            np.testing.assert_allclose(apply_channel(ch, sigma), rho, atol=1e-12)

    def test_identity_returns_sigma(self):
        ch = qubit_channel(np.eye(4, dtype=complex), random_density_matrix(2, RNG))
        sigma = random_density_matrix(2, RNG)
        np.testing.assert_allclose(apply_channel(ch, sigma), sigma, atol=1e-12)

    def test_cnot_conjugates_by_x(self):
        # oracle: direct 4x4 computation of the traced conjugation
        ch = qubit_channel(CNOT.copy(), KET1)
        for _ in range(5):
            sigma = random_density_matrix(2, RNG)
            joint = CNOT @ tensor(KET1, sigma) @ CNOT.conj().T
            oracle = linalg.partial_trace(joint, (2, 2), keep=1)
            np.testing.assert_allclose(apply_channel(ch, sigma), oracle, atol=1e-14)
            np.testing.assert_allclose(apply_channel(ch, sigma),
                                       PAULI_X @ sigma @ PAULI_X, atol=1e-12)

    def test_maps_states_to_states(self):
        for _ in range(20):
            ch = qubit_channel(haar_random_unitary(4, RNG), random_density_matrix(2, RNG))
            out = apply_channel(ch, random_density_matrix(2, RNG))
            assert abs(np.trace(out).real - 1) <= 1e-10
            assert np.linalg.eigvalsh(out).min() >= -1e-9

    def test_wrong_sigma_dimension(self):
        ch = qubit_channel(SWAP.copy(), maximally_mixed(2))
        with pytest.raises(ValueError, match="dimension"):
            apply_channel(ch, np.eye(3) / 3)


class TestSuperoperator:
    def test_identity_unitary_gives_identity_superoperator(self):
        ch = qubit_channel(np.eye(4, dtype=complex), random_density_matrix(2, RNG))
        np.testing.assert_allclose(superoperator_matrix(ch), np.eye(4), atol=1e-12)

    def test_swap_gives_rank_one_range(self):
        rho = random_density_matrix(2, RNG)
        s = superoperator_matrix(qubit_channel(SWAP.copy(), rho))
        for _ in range(5):
            sigma = random_density_matrix(2, RNG)
            got = s @ sigma.reshape(-1)
            np.testing.assert_allclose(got, rho.reshape(-1) * np.trace(sigma),
                                       atol=1e-12)

    def test_agrees_with_apply_channel_on_operator_basis(self):
        ch = qubit_channel(haar_random_unitary(4, RNG), random_density_matrix(2, RNG))
        s = superoperator_matrix(ch)
        for k in range(4):
            unit = np.zeros((2, 2), dtype=complex)
            unit[k // 2, k % 2] = 1.0
            np.testing.assert_allclose((s @ unit.reshape(-1)).reshape(2, 2),
                                       apply_channel(ch, unit), atol=1e-12)

    def test_agrees_on_random_states(self):
        ch = qubit_channel(haar_random_unitary(4, RNG), random_density_matrix(2, RNG))
        s = superoperator_matrix(ch)
        for _ in range(10):
            sigma = random_density_matrix(2, RNG)
            np.testing.assert_allclose((s @ sigma.reshape(-1)).reshape(2, 2),
                                       apply_channel(ch, sigma), atol=1e-12)


class TestFixedPointSet:
    def test_swap_with_maximally_mixed(self):
        fps = fixed_point_set(qubit_channel(SWAP.copy(), maximally_mixed(2)))
        assert fps.dimension == 0
        assert fps.residual <= 1e-9
        np.testing.assert_allclose(fps.particular, maximally_mixed(2), atol=1e-9)

    def test_identity_fixes_everything(self):
        fps = fixed_point_set(qubit_channel(np.eye(4, dtype=complex),
                                            random_density_matrix(2, RNG)))
        assert fps.dimension == 3
        np.testing.assert_allclose(fps.particular, maximally_mixed(2), atol=1e-9)

    def test_cnot_family_is_x_axis(self):
        fps = fixed_point_set(qubit_channel(CNOT.copy(), KET1))
        assert fps.dimension == 1
        # the only traceless Hermitian fixed direction is sigma_x
        b = fps.basis[0]
        overlap = abs(np.trace(b.conj().T @ PAULI_X)) / np.sqrt(2)
        assert overlap == pytest.approx(1.0, abs=1e-9)

    def test_basis_elements_are_fixed_and_traceless(self):
        for _ in range(10):
            ch = qubit_channel(haar_random_unitary(4, RNG), random_density_matrix(2, RNG))
            fps = fixed_point_set(ch)
            for b in fps.basis:
                np.testing.assert_allclose(apply_channel(ch, b), b, atol=1e-8)
                assert abs(np.trace(b)) <= 1e-10

    def test_existence_on_random_channels(self):
        for _ in range(40):
            ch = qubit_channel(haar_random_unitary(4, RNG), random_density_matrix(2, RNG))
            fps = fixed_point_set(ch)
            assert fps.residual <= 1e-8
            check_density_matrix(fps.particular, tol_trace=1e-9, tol_psd=1e-9)

    def test_pure_cr_through_swap_fixes_that_state(self):
        psi = haar_random_unitary(2, RNG) @ ket(0, 2)
        rho = projector(psi)
        fps = fixed_point_set(qubit_channel(SWAP.copy(), rho))
        assert fps.dimension == 0
        np.testing.assert_allclose(fps.particular, rho, atol=1e-9)


class TestMaxEntropy:
    def test_zero_dimensional_set_returns_particular(self):
        fps = fixed_point_set(qubit_channel(SWAP.copy(), maximally_mixed(2)))
        np.testing.assert_array_equal(max_entropy_fixed_point(fps), fps.particular)

    def test_cnot_family_maximum_is_maximally_mixed(self):
        fps = fixed_point_set(qubit_channel(CNOT.copy(), KET1))
        best = max_entropy_fixed_point(fps)
        assert trace_distance(best, maximally_mixed(2)) <= 1e-9

    def test_identity_unitary_maximum_is_maximally_mixed(self):
        fps = fixed_point_set(qubit_channel(np.eye(4, dtype=complex),
                                            random_density_matrix(2, RNG)))
        best = max_entropy_fixed_point(fps)
        assert trace_distance(best, maximally_mixed(2)) <= 1e-9

    def test_perturbations_do_not_raise_entropy(self):
        fps = fixed_point_set(qubit_channel(CNOT.copy(), KET1))
        best = max_entropy_fixed_point(fps)
        assert perturbation_entropy_check(fps, best, epsilon=1e-3) <= 1e-9

    def test_unique_maximizer_from_different_starts(self):
        fps = fixed_point_set(qubit_channel(CNOT.copy(), KET1))
        a = max_entropy_fixed_point(fps, initial_coefficients=[0.45])
        b = max_entropy_fixed_point(fps, initial_coefficients=[-0.45])
        assert trace_distance(a, b) <= 1e-6

    def test_random_channels_give_valid_maximizers(self):
        for _ in range(10):
            ch = qubit_channel(haar_random_unitary(4, RNG), random_density_matrix(2, RNG))
            fps = fixed_point_set(ch)
            best = max_entropy_fixed_point(fps)
            np.testing.assert_allclose(apply_channel(ch, best), best, atol=1e-8)
            check_density_matrix(best, tol_psd=1e-8)


class TestRunCircuit:
    def test_identity_passes_cr_through(self):
        rho = random_density_matrix(2, RNG)
        res = run_deutsch_circuit(qubit_channel(np.eye(4, dtype=complex), rho))
        np.testing.assert_allclose(res.rho_cr_out, rho, atol=1e-9)

    def test_swap_with_pure_cr(self):
        psi = haar_random_unitary(2, RNG) @ ket(0, 2)
        rho = projector(psi)
        res = run_deutsch_circuit(qubit_channel(SWAP.copy(), rho))
        np.testing.assert_allclose(res.rho_ctc, rho, atol=1e-9)
        np.testing.assert_allclose(res.rho_cr_out, rho, atol=1e-9)
        assert res.entropy_ctc == pytest.approx(0.0, abs=1e-8)

    def test_entropy_figures_are_consistent(self):
        ch = qubit_channel(CNOT.copy(), KET1)
        res = run_deutsch_circuit(ch)
        assert res.entropy_ctc == pytest.approx(von_neumann_entropy(res.rho_ctc), abs=1e-12)
        assert res.entropy_cr_out == pytest.approx(
            von_neumann_entropy(res.rho_cr_out), abs=1e-12)
        assert res.joint_out_mutual_information >= -1e-9


class TestBellSwap:
    def test_ctc_state_is_maximally_mixed(self):
        res = bell_swap_scenario()
        assert trace_distance(res.rho_ctc, maximally_mixed(2)) <= 1e-9
        assert res.residual <= 1e-9

    def test_joint_output_is_fully_mixed(self):
        res = bell_swap_scenario()
        assert trace_distance(res.rho_ab_out, maximally_mixed(4)) <= 1e-9

    def test_all_correlation_lost(self):
        res = bell_swap_scenario()
        assert res.mutual_information_before == pytest.approx(2.0, abs=1e-9)
        assert res.mutual_information_after == pytest.approx(0.0, abs=1e-9)
