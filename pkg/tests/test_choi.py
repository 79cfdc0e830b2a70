import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from spam_tomography_rooms_pkg.utils.choi import (
    ChoiState,
    PauliTransferMatrix,
    apply_choi,
    choi_from_propagator,
    choi_from_unitary,
    choi_to_ptm,
    clamp_psd,
    partial_trace_b,
    pauli_expansion,
    pauli_reconstruct,
    ptm_to_choi,
    random_choi,
    random_unitary,
    rescale_trace_preserving,
)
from spam_tomography_rooms_pkg.utils.errors import InvalidParameterError, InvalidStateError
from spam_tomography_rooms_pkg.utils.qubit import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Z,
    DensityMatrix,
    EvolutionParams,
    lindblad_propagator,
)


class TestChoiState:
    def test_rejects_wrong_trace(self):
        with pytest.raises(InvalidStateError, match="trace"):
            ChoiState(np.eye(4) / 2)

    def test_rejects_non_hermitian(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 0.1
        with pytest.raises(InvalidStateError, match="Hermitian"):
            ChoiState(m)

    def test_unitary_choi_is_physical(self, rng):
        choi = choi_from_unitary(random_unitary(rng))
        assert choi.is_physical
        assert_allclose(partial_trace_b(choi), IDENTITY / 2, atol=1e-12)
        assert choi.eigenvalues[-1] == pytest.approx(1.0)

    def test_non_unitary_rejected(self):
        with pytest.raises(InvalidParameterError, match="not unitary"):
            choi_from_unitary(2 * IDENTITY)

    def test_random_choi_is_physical(self, rng):
        for rank in (1, 2, 4):
            choi = random_choi(rng, rank=rank)
            assert choi.is_physical
            assert np.sum(choi.eigenvalues > 1e-10) == rank
        with pytest.raises(InvalidParameterError):
            random_choi(rng, rank=5)


class TestMaps:
    def test_apply_unitary_choi(self, rng):
        for _ in range(100):
            u = random_unitary(rng)
            r = rng.standard_normal(3)
            rho = DensityMatrix.from_bloch(0.9 * r / np.linalg.norm(r))
            assert_allclose(apply_choi(choi_from_unitary(u), rho).m, u @ rho.m @ u.conj().T, atol=1e-12)

    def test_partial_trace_of_product(self):
        rho_a = np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]])
        assert_allclose(partial_trace_b(np.kron(rho_a, IDENTITY / 2)), rho_a, atol=1e-15)

    def test_propagator_choi_matches_unitary(self):
        ev = EvolutionParams(omega_rot=1.0, t2=math.inf)
        t = 0.7
        expected = choi_from_unitary(expm(0.5j * ev.omega_rot * t * SIGMA_Z))
        actual = choi_from_propagator(lindblad_propagator(t, (0, 0, 1), ev))
        assert_allclose(actual.m, expected.m, atol=1e-8)


class TestPauliRepresentations:
    def test_expansion_of_maximally_mixed(self):
        coefficients = pauli_expansion(np.eye(4) / 4)
        assert coefficients[0] == pytest.approx(1.0)
        assert_allclose(coefficients[1:], 0.0, atol=1e-15)

    def test_expansion_round_trip(self, rng):
        for _ in range(200):
            choi = random_choi(rng)
            assert_allclose(pauli_reconstruct(pauli_expansion(choi)), choi.m, atol=1e-12)

    def test_identity_and_bit_flip_ptm(self):
        assert_allclose(choi_to_ptm(choi_from_unitary(IDENTITY)).t, np.eye(4), atol=1e-12)
        assert_allclose(choi_to_ptm(choi_from_unitary(SIGMA_X)).t, np.diag([1.0, 1.0, -1.0, -1.0]), atol=1e-12)

    def test_ptm_round_trip(self, rng):
        for _ in range(200):
            choi = random_choi(rng)
            assert_allclose(ptm_to_choi(choi_to_ptm(choi)).m, choi.m, atol=1e-12)

    def test_ptm_first_row_enforced(self):
        with pytest.raises(InvalidStateError, match="first row"):
            PauliTransferMatrix(np.eye(4)[::-1])


class TestProjections:
    def test_rescale_restores_trace_preservation(self, rng):
        k = np.kron(np.diag([math.sqrt(1.2), math.sqrt(0.8)]), IDENTITY)
        m = k @ random_choi(rng).m @ k
        assert ChoiState(m).tp_residual > 1e-3
        out = ChoiState(rescale_trace_preserving(m))
        assert out.tp_residual <= 1e-12
        assert out.eigenvalues[0] >= -1e-12

    def test_rescale_rejects_singular_partial_trace(self):
        m = np.zeros((4, 4))
        m[0, 0] = 1.0
        with pytest.raises(InvalidStateError, match="singular"):
            rescale_trace_preserving(m)

    def test_clamp_psd(self):
        out = clamp_psd(np.diag([0.6, 0.5, 0.0, -0.1]))
        assert_allclose(np.diag(out).real, [0.6 / 1.1, 0.5 / 1.1, 0.0, 0.0], atol=1e-15)
