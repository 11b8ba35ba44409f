"""Tests for the complex linear algebra and quantum-state utilities."""

import numpy as np
import pytest

from ctclab import linalg
from ctclab.linalg import (
    CNOT,
    ID2,
    PAULI_X,
    PAULI_Z,
    SWAP,
    bell_density,
    bell_state,
    check_density_matrix,
    check_hermitian,
    check_unitary,
    haar_random_unitary,
    hermitian_eigendecomposition,
    ket,
    matrix_from_json,
    matrix_to_json,
    maximally_mixed,
    mutual_information,
    partial_trace,
    projector,
    random_density_matrix,
    standard_gates,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

RNG = np.random.default_rng(20240517)


class TestValidation:
    def test_hermitian_accepts_pauli(self):
        for m in (PAULI_X, PAULI_Z, ID2):
            check_hermitian(m)

    def test_hermitian_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            check_hermitian([[0, 1], [0, 0]])

    def test_density_matrix_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.eye(2))

    def test_density_matrix_rejects_negative(self):
        with pytest.raises(ValueError, match="not PSD"):
            check_density_matrix(np.diag([1.5, -0.5]))

    def test_unitary_rejects_projector(self):
        with pytest.raises(ValueError, match="not unitary"):
            check_unitary(np.diag([1.0, 0.0]))

    def test_tolerances_are_adjustable(self):
        almost = np.diag([1.0 + 5e-7, 0.0])
        with pytest.raises(ValueError):
            check_density_matrix(almost)
        check_density_matrix(almost, tol_trace=1e-6)


class TestTensor:
    def test_identity_case(self):
        np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_basis_projectors(self):
        got = tensor(np.diag([1, 0]), np.diag([0, 1]))
        np.testing.assert_array_equal(got, np.diag([0, 1, 0, 0]))

    def test_sigma_x_tensor_squared_is_identity(self):
        # oracle: direct 4x4 multiplication
        xx = tensor(PAULI_X, PAULI_X)
        np.testing.assert_allclose(xx @ xx, np.eye(4), atol=1e-15)


class TestPartialTrace:
    def test_bell_pair_reduces_to_maximally_mixed(self):
        rho_b = partial_trace(bell_density(), (2, 2), keep=1)
        np.testing.assert_allclose(rho_b, maximally_mixed(2), atol=1e-12)

    def test_product_state_recovers_factor(self):
        rho = projector(ket(0, 2))
        sigma = np.diag([0.25, 0.75]).astype(complex)
        np.testing.assert_allclose(partial_trace(tensor(rho, sigma), (2, 2), 0),
                                   rho, atol=1e-12)
        np.testing.assert_allclose(partial_trace(tensor(rho, sigma), (2, 2), 1),
                                   sigma, atol=1e-12)

    def test_random_two_qubit_reduction_is_density_matrix(self):
        for _ in range(25):
            rho = random_density_matrix(4, RNG)
            for keep in (0, 1):
                red = partial_trace(rho, (2, 2), keep)
                check_density_matrix(red)
                assert abs(np.trace(red).real - 1) <= 1e-10

    def test_product_recovery_tolerance_on_random_inputs(self):
        for _ in range(25):
            a = random_density_matrix(2, RNG)
            b = random_density_matrix(3, RNG)
            np.testing.assert_allclose(partial_trace(tensor(a, b), (2, 3), 0),
                                       a, atol=1e-12)

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValueError, match="dimension"):
            partial_trace(np.eye(4) / 4, (2, 3), 0)


class TestEigendecomposition:
    def test_pauli_z_spectrum(self):
        w, _ = hermitian_eigendecomposition(PAULI_Z)
        np.testing.assert_allclose(sorted(w), [-1, 1], atol=1e-12)

    def test_maximally_mixed_spectrum(self):
        w, _ = hermitian_eigendecomposition(maximally_mixed(2))
        np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-12)

    def test_biased_x_state_closed_form(self):
        # closed form for (I + 0.6 sx)/2: eigenvalues (1 +/- 0.6)/2
        rho = (ID2 + 0.6 * PAULI_X) / 2
        w, _ = hermitian_eigendecomposition(rho)
        np.testing.assert_allclose(sorted(w), [0.2, 0.8], atol=1e-12)

    def test_reconstruction(self):
        for dim in (2, 3, 4, 8):
            m = random_density_matrix(dim, RNG)
            w, v = hermitian_eigendecomposition(m)
            np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m,
                                       atol=1e-10 * dim)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            hermitian_eigendecomposition([[0, 1], [0, 0]])


class TestEntropy:
    def test_pure_state_zero(self):
        assert von_neumann_entropy(projector(ket(0, 2))) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_one_bit(self):
        assert von_neumann_entropy(maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)

    def test_biased_diagonal(self):
        # oracle: direct formula, -(0.8 log2 0.8 + 0.2 log2 0.2)
        rho = np.diag([0.8, 0.2]).astype(complex)
        assert von_neumann_entropy(rho) == pytest.approx(0.7219280948873623, abs=1e-12)

    def test_range(self):
        for dim in (2, 4):
            for _ in range(10):
                s = von_neumann_entropy(random_density_matrix(dim, RNG))
                assert -1e-12 <= s <= np.log2(dim) + 1e-12

    def test_unitary_invariance(self):
        for _ in range(20):
            rho = random_density_matrix(4, RNG)
            u = haar_random_unitary(4, RNG)
            s1 = von_neumann_entropy(rho)
            s2 = von_neumann_entropy(u @ rho @ u.conj().T)
            assert abs(s1 - s2) <= 1e-9


class TestMutualInformation:
    def test_bell_pair_two_bits(self):
        assert mutual_information(bell_density(), (2, 2)) == pytest.approx(2.0, abs=1e-9)

    def test_product_state_zero(self):
        rho = tensor(random_density_matrix(2, RNG), random_density_matrix(2, RNG))
        assert mutual_information(rho, (2, 2)) == pytest.approx(0.0, abs=1e-9)

    def test_product_of_maximally_mixed_zero(self):
        rho = tensor(maximally_mixed(2), maximally_mixed(2))
        assert mutual_information(rho, (2, 2)) == pytest.approx(0.0, abs=1e-12)

    def test_nonnegative_on_random_states(self):
        for _ in range(30):
            rho = random_density_matrix(4, RNG)
            assert mutual_information(rho, (2, 2)) >= -1e-9


class TestGateCatalog:
    def test_swap_exchanges_product_vectors(self):
        psi = np.array([1, 2j], dtype=complex) / np.sqrt(5)
        phi = np.array([3, 1], dtype=complex) / np.sqrt(10)
        np.testing.assert_allclose(SWAP @ np.kron(psi, phi), np.kron(phi, psi),
                                   atol=1e-12)

    def test_cnot_flips_target(self):
        np.testing.assert_allclose(CNOT @ ket(2, 4), ket(3, 4), atol=1e-15)

    def test_all_catalog_entries_unitary(self):
        for name, gate in standard_gates().items():
            check_unitary(gate), name

    def test_bell_state_normalized(self):
        v = bell_state()
        assert np.vdot(v, v).real == pytest.approx(1.0, abs=1e-12)


class TestTraceDistance:
    def test_identical_states(self):
        rho = random_density_matrix(3, RNG)
        assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_pure_states(self):
        assert trace_distance(projector(ket(0, 2)),
                              projector(ket(1, 2))) == pytest.approx(1.0, abs=1e-12)


class TestMatrixJson:
    def test_round_trip(self):
        m = random_density_matrix(3, RNG) + 1j * 0  # complex dtype already
        obj = matrix_to_json(m)
        np.testing.assert_array_equal(matrix_from_json(obj), m)

    def test_known_encoding(self):
        obj = matrix_to_json(PAULI_Y)
        assert obj["rows"] == obj["cols"] == 2
        assert obj["entries"] == [[0.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]]

    def test_rejects_wrong_entry_count(self):
        with pytest.raises(ValueError, match="entries"):
            matrix_from_json({"rows": 2, "cols": 2, "entries": [[1, 0]]})

    def test_rejects_missing_fields(self):
        with pytest.raises(ValueError, match="malformed"):
            matrix_from_json({"rows": 2})

    def test_rejects_malformed_entry(self):
        with pytest.raises(ValueError, match="pair"):
            matrix_from_json({"rows": 1, "cols": 1, "entries": [[1, 0, 5]]})
