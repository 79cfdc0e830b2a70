"""Choi states of single-qubit maps and their Pauli representations.

Subsystem A is the input leg (untouched half of |Φ⁺⟩), subsystem B is the
output leg, so that ``choi = (I ⊗ E)(|Φ⁺⟩⟨Φ⁺|)`` and the map is trace
preserving iff ``Tr_B(choi) = I/2``. Kronecker products are ordered A ⊗ B.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InvalidParameterError, InvalidStateError
from .qubit import IDENTITY, PAULIS, DensityMatrix

CHOI_ATOL = 1e-10
TP_ATOL = 1e-8
UNITARY_ATOL = 1e-10

PAULI_LABELS = tuple(a + b for a, b in product("IXYZ", repeat=2))
PAULI_BASIS_2Q = np.array([np.kron(a, b) for a, b in product(PAULIS, repeat=2)])
# σ_bᵀ = s_b σ_b
TRANSPOSE_SIGNS = np.array([1.0, 1.0, -1.0, 1.0])
PHI_PLUS = np.eye(2, dtype=complex).reshape(4) / np.sqrt(2.0)


def _hermitian_4x4(m: np.ndarray, what: str) -> np.ndarray:
    m = np.array(m, dtype=complex)
    if m.shape != (4, 4):
        raise InvalidStateError(f"{what} must be 4x4, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError(f"{what} has non-finite entries")
    deviation = np.max(np.abs(m - m.conj().T))
    if deviation > CHOI_ATOL:
        raise InvalidStateError(f"{what} is not Hermitian (max deviation {deviation:.3e})")
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True, eq=False)
class ChoiState:
    """4x4 Hermitian unit-trace operator. Positivity is not required."""

    m: np.ndarray

    def __post_init__(self):
        m = _hermitian_4x4(self.m, "Choi state")
        trace = np.trace(m).real
        if abs(trace - 1.0) > CHOI_ATOL:
            raise InvalidStateError(f"Choi state trace {trace:.15g} is not 1")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.m)

    @property
    def tp_residual(self) -> float:
        return float(np.max(np.abs(partial_trace_b(self.m) - IDENTITY / 2)))

    @property
    def is_physical(self) -> bool:
        return bool(self.eigenvalues[0] >= -CHOI_ATOL and self.tp_residual <= TP_ATOL)


@dataclass(frozen=True, eq=False)
class PauliTransferMatrix:
    """Real 4x4 matrix T[a, b] = ½ Tr(σ_a E(σ_b)) with the first row fixed to (1, 0, 0, 0)."""

    t: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        if t.shape != (4, 4):
            raise InvalidStateError(f"Pauli transfer matrix must be 4x4, got shape {t.shape}")
        if np.max(np.abs(t[0] - [1.0, 0.0, 0.0, 0.0])) > CHOI_ATOL:
            raise InvalidStateError(f"Pauli transfer matrix first row {t[0]} is not (1, 0, 0, 0)")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)


def partial_trace_b(choi: ChoiState | np.ndarray) -> np.ndarray:
    m = choi.m if isinstance(choi, ChoiState) else np.asarray(choi)
    return np.einsum("abcb->ac", m.reshape(2, 2, 2, 2))


def choi_from_unitary(u: np.ndarray) -> ChoiState:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidParameterError(f"unitary must be 2x2, got shape {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - IDENTITY))
    if defect > UNITARY_ATOL:
        raise InvalidParameterError(f"matrix is not unitary (max |U†U − I| = {defect:.3e})")
    psi = np.kron(IDENTITY, u) @ PHI_PLUS
    return ChoiState(np.outer(psi, psi.conj()))


def apply_map(choi: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """E(ρ) = 2 Tr_A[(ρᵀ ⊗ I) choi] on raw matrices."""
    return 2.0 * np.einsum("ca,cbad->bd", rho, np.asarray(choi).reshape(2, 2, 2, 2))


def apply_choi(choi: ChoiState, rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(apply_map(choi.m, rho.m))


def pauli_expansion(op: np.ndarray | ChoiState) -> np.ndarray:
    """Coefficients Tr(M_i ⊗ M_j · op), flattened in the order II, IX, ..., ZZ."""
    m = op.m if isinstance(op, ChoiState) else _hermitian_4x4(op, "operator")
    return np.einsum("kij,ji->k", PAULI_BASIS_2Q, m).real


def pauli_reconstruct(coefficients: np.ndarray) -> np.ndarray:
    c = np.asarray(coefficients, dtype=float).reshape(16)
    return np.einsum("k,kij->ij", c, PAULI_BASIS_2Q) / 4.0


def choi_to_ptm(choi: ChoiState) -> PauliTransferMatrix:
    p = pauli_expansion(choi).reshape(4, 4)
    return PauliTransferMatrix((TRANSPOSE_SIGNS[:, None] * p).T)


def ptm_to_choi(ptm: PauliTransferMatrix | np.ndarray) -> ChoiState:
    t = ptm.t if isinstance(ptm, PauliTransferMatrix) else np.asarray(ptm, dtype=float)
    p = TRANSPOSE_SIGNS[:, None] * t.T
    return ChoiState(pauli_reconstruct(p.reshape(16)))


def rescale_trace_preserving(m: np.ndarray) -> np.ndarray:
    """Congruence (S^{-1/2} ⊗ I) m (S^{-1/2} ⊗ I) with S = 2 Tr_B m.

    Keeps m positive semidefinite and makes Tr_B equal I/2 exactly. Requires
    Tr_B m to be invertible.
    """
    s = 2.0 * partial_trace_b(m)
    w, v = np.linalg.eigh(0.5 * (s + s.conj().T))
    if w[0] <= 0:
        raise InvalidStateError("partial trace is singular, cannot rescale to trace preserving")
    inv_root = np.kron((v / np.sqrt(w)) @ v.conj().T, IDENTITY)
    out = inv_root @ m @ inv_root
    out = out / np.trace(out).real
    return 0.5 * (out + out.conj().T)


def clamp_psd(m: np.ndarray) -> np.ndarray:
    """Nearest unit-trace PSD matrix in the eigenbasis of m."""
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        raise InvalidStateError("matrix has no positive spectrum")
    out = (v * (w / w.sum())) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_choi(rng: np.random.Generator, rank: int = 4) -> ChoiState:
    """Random physical Choi state from a Ginibre matrix of the given Kraus rank."""
    if not 1 <= rank <= 4:
        raise InvalidParameterError(f"Kraus rank must be in [1, 4], got {rank}")
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    x = g @ g.conj().T
    s = partial_trace_b(x)
    w, v = np.linalg.eigh(s)
    inv_root = np.kron((v / np.sqrt(w)) @ v.conj().T, IDENTITY)
    out = 0.5 * inv_root @ x @ inv_root
    return ChoiState(0.5 * (out + out.conj().T))


def choi_from_propagator(propagator: np.ndarray) -> ChoiState:
    """Choi state of the map acting on row-major vec(ρ) as ``propagator``."""
    blocks = np.zeros((2, 2, 2, 2), dtype=complex)
    for k in range(2):
        for l in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[k, l] = 1.0
            blocks[k, :, l, :] = 0.5 * (propagator @ unit.reshape(4)).reshape(2, 2)
    m = blocks.reshape(4, 4)
    return ChoiState(0.5 * (m + m.conj().T))


def choi_to_entries(choi: ChoiState) -> list[list[float]]:
    """Sixteen row-major ``[re, im]`` pairs."""
    return [[float(z.real), float(z.imag)] for z in choi.m.reshape(16)]
