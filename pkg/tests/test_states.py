import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from asymlab.errors import ResourceError, ValidationError
from asymlab.states import (
    PAULI,
    DensityMatrix,
    StateVector,
    apply_pauli,
    apply_site_matrix,
    basis_state,
    bit_weights,
    entropy_of_probabilities,
    expectation,
    ghz_state,
    plus_state,
    product_state,
    random_density_matrix,
    random_state,
    reduced_density_matrix,
    von_neumann_entropy,
    zero_state,
)


def test_statevector_requires_normalization():
    with pytest.raises(ValidationError):
        StateVector(1, np.array([1.0, 1.0], dtype=complex))
    psi = StateVector(1, np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0))
    assert psi.dim == 2
    assert_allclose(psi.probabilities(), [0.5, 0.5])


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        DensityMatrix(1, np.array([[0.5, 0.5], [0.4, 0.5]]))
    with pytest.raises(ValidationError):
        DensityMatrix(1, np.array([[0.7, 0.0], [0.0, 0.7]]))
    rho = DensityMatrix(1, np.eye(2) / 2.0)
    assert_allclose(rho.purity(), 0.5)


def test_negative_spectrum_rejected_at_entropy_time():
    rho = DensityMatrix(1, np.array([[1.5, 0.0], [0.0, -0.5]]))
    with pytest.raises(ValidationError):
        von_neumann_entropy(rho)


def test_purity_handles_complex_off_diagonals():
    # (|0> + i|1>)/sqrt(2): pure, so purity must be exactly 1
    v = np.array([1.0, 1.0j]) / np.sqrt(2.0)
    rho = DensityMatrix(1, np.outer(v, v.conj()))
    assert_allclose(rho.purity(), 1.0, atol=1e-14)


def test_basis_state_orders_site_zero_first():
    psi = basis_state(3, [1, 0, 0])
    # site 0 is the most significant bit
    assert np.flatnonzero(psi.amplitudes).tolist() == [4]


def test_product_state_matches_kron():
    v0 = np.array([1.0, 0.0])
    v1 = np.array([0.6, 0.8])
    psi = product_state([v0, v1])
    assert isinstance(psi, StateVector)
    assert_allclose(psi.amplitudes, np.kron(v0, v1))


def test_product_state_with_mixed_factor_is_mixed():
    rho = product_state([np.array([1.0, 0.0]), np.eye(2) / 2.0])
    assert isinstance(rho, DensityMatrix)
    assert_allclose(rho.diagonal(), [0.5, 0.5, 0.0, 0.0])


def test_ghz_and_plus_states():
    ghz = ghz_state(3)
    assert_allclose(ghz.probabilities()[[0, 7]], [0.5, 0.5])
    assert_allclose(plus_state(2).probabilities(), np.full(4, 0.25))


def test_bit_weights_matches_popcount():
    w = bit_weights(6)
    ref = np.array([bin(i).count("1") for i in range(64)])
    assert np.array_equal(w, ref)


def test_entropy_of_probabilities():
    assert entropy_of_probabilities(np.array([1.0, 0.0])) == 0.0
    assert_allclose(entropy_of_probabilities(np.full(8, 0.125)), math.log(8))


def test_von_neumann_entropy_pure_and_maximally_mixed():
    assert von_neumann_entropy(random_state(3, 5)) == 0.0
    rho = DensityMatrix(2, np.eye(4) / 4.0)
    assert_allclose(von_neumann_entropy(rho), math.log(4), atol=1e-12)


def test_von_neumann_entropy_spectrum():
    rng = np.random.default_rng(11)
    rho = random_density_matrix(3, rng)
    evals = np.linalg.eigvalsh(rho.matrix)
    expected = -np.sum(evals * np.log(evals))
    assert_allclose(von_neumann_entropy(rho), expected, atol=1e-10)


def test_apply_pauli_on_sites():
    psi = zero_state(2)
    flipped = apply_pauli(psi.amplitudes, 0, "x", 2)
    assert np.flatnonzero(flipped).tolist() == [2]
    flipped = apply_pauli(psi.amplitudes, 1, "x", 2)
    assert np.flatnonzero(flipped).tolist() == [1]


def test_apply_site_matrix_agrees_with_kron():
    rng = np.random.default_rng(3)
    psi = random_state(3, rng)
    u = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    for site, ops in [(0, (u, np.eye(2), np.eye(2))), (2, (np.eye(2), np.eye(2), u))]:
        full = np.kron(np.kron(ops[0], ops[1]), ops[2])
        assert_allclose(
            apply_site_matrix(psi.amplitudes, u, site, 3),
            full @ psi.amplitudes,
            atol=1e-12,
        )


def test_expectation_of_pauli_strings():
    psi = ghz_state(2)
    assert_allclose(expectation(psi, [(1.0, {0: "z", 1: "z"})]).real, 1.0, atol=1e-12)
    assert_allclose(expectation(psi, [(1.0, {0: "z"})]).real, 0.0, atol=1e-12)
    assert_allclose(expectation(psi, [(1.0, {0: "x", 1: "x"})]).real, 1.0, atol=1e-12)
    combo = [(2.0, {}), (0.5, {0: "x", 1: "x"})]
    assert_allclose(expectation(psi, combo).real, 2.5, atol=1e-12)
    rho = psi.to_density_matrix()
    assert_allclose(expectation(rho, [(1.0, {0: "x", 1: "x"})]).real, 1.0, atol=1e-12)


def test_reduced_density_matrix_of_ghz():
    rho1 = reduced_density_matrix(ghz_state(3), [0])
    assert_allclose(rho1, np.eye(2) / 2.0, atol=1e-12)
    rho2 = reduced_density_matrix(ghz_state(3), [0, 2])
    assert_allclose(np.diag(rho2), [0.5, 0.0, 0.0, 0.5], atol=1e-12)


def test_random_states_are_reproducible():
    a = random_state(4, np.random.default_rng(9)).amplitudes
    b = random_state(4, np.random.default_rng(9)).amplitudes
    assert np.array_equal(a, b)


def test_random_density_matrix_rank():
    rho = random_density_matrix(3, np.random.default_rng(1), rank=2)
    evals = np.linalg.eigvalsh(rho.matrix)
    assert np.sum(evals > 1e-12) == 2


def test_statevector_cap_enforced(monkeypatch):
    monkeypatch.setenv("ASYMLAB_MAX_QUBITS", "4")
    with pytest.raises(ResourceError):
        zero_state(5)
    monkeypatch.setenv("ASYMLAB_MAX_QUBITS", "6")
    assert zero_state(5).n_qubits == 5
