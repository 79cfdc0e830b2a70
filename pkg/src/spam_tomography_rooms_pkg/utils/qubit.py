"""Single-qubit calculus.

States, effects, the Born rule, free evolution under the dephasing master
equation (closed form and fixed-step integration) and Uhlmann fidelity.

Sign convention for the master equation, used everywhere in the package::

    dρ/dt = i(Ω/2)[σ_n, ρ] + (1/2T₂)(σ_n ρ σ_n − ρ)

For n = ẑ this rotates the Bloch vector clockwise about z (x → −y at Ωt = π/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from .errors import InvalidParameterError, InvalidStateError

ATOL = 1e-12
AXIS_ATOL = 1e-10
DET_FLOOR = 1e-15
EIG_FLOOR = 1e-14
STEPS_PER_HALF_TURN = 1000

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


def _frozen(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


def bloch_to_matrix(r: Sequence[float]) -> np.ndarray:
    rx, ry, rz = (float(c) for c in r)
    return 0.5 * (IDENTITY + rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z)


def matrix_to_bloch(m: np.ndarray) -> np.ndarray:
    return np.array([np.trace(p @ m).real for p in PAULIS[1:]])


def pauli_vector(r: Sequence[float]) -> np.ndarray:
    """n·σ for a real 3-vector n."""
    return r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z


def _hermitian_part(m: np.ndarray, atol: float, what: str) -> np.ndarray:
    if m.shape != (2, 2):
        raise InvalidStateError(f"{what} must be 2x2, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError(f"{what} has non-finite entries")
    deviation = np.max(np.abs(m - m.conj().T))
    if deviation > atol:
        raise InvalidStateError(f"{what} is not Hermitian (max deviation {deviation:.3e})")
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class BlochVector:
    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float).reshape(-1)
        if r.shape != (3,):
            raise InvalidStateError(f"Bloch vector needs 3 components, got {r.size}")
        if not np.all(np.isfinite(r)):
            raise InvalidStateError("Bloch vector has non-finite components")
        norm = float(np.linalg.norm(r))
        if norm > 1.0 + ATOL:
            raise InvalidStateError(f"Bloch vector norm {norm:.15g} exceeds 1")
        object.__setattr__(self, "r", _frozen(r))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.r))

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(bloch_to_matrix(self.r))

    @classmethod
    def from_density_matrix(cls, rho: "DensityMatrix") -> "BlochVector":
        return cls(matrix_to_bloch(rho.m))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """2x2 Hermitian, unit-trace, positive semidefinite operator."""

    m: np.ndarray

    def __post_init__(self):
        m = _hermitian_part(np.array(self.m, dtype=complex), ATOL, "density matrix")
        trace = np.trace(m).real
        if abs(trace - 1.0) > ATOL:
            raise InvalidStateError(f"density matrix trace {trace:.15g} is not 1")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -ATOL:
            raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "m", _frozen(m))

    @classmethod
    def from_bloch(cls, r: Sequence[float] | BlochVector) -> "DensityMatrix":
        if isinstance(r, BlochVector):
            r = r.r
        return cls(bloch_to_matrix(r))

    @classmethod
    def pure(cls, ket: Sequence[complex]) -> "DensityMatrix":
        psi = np.asarray(ket, dtype=complex).reshape(2)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def bloch(self) -> np.ndarray:
        return matrix_to_bloch(self.m)


@dataclass(frozen=True, eq=False)
class Effect:
    """Two-outcome POVM element, 0 ≤ E ≤ I."""

    m: np.ndarray

    def __post_init__(self):
        m = _hermitian_part(np.array(self.m, dtype=complex), ATOL, "effect")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] < -ATOL or eigs[-1] > 1.0 + ATOL:
            raise InvalidStateError(
                f"effect eigenvalues {eigs[0]:.3e}, {eigs[-1]:.3e} leave [0, 1]"
            )
        object.__setattr__(self, "m", _frozen(m))

    @classmethod
    def from_bloch(cls, alpha: float, beta: float, direction: Sequence[float]) -> "Effect":
        """E = αI + β R·σ."""
        return cls(alpha * IDENTITY + beta * pauli_vector(np.asarray(direction, dtype=float)))


class EvolutionParams(BaseModel):
    """Rotation rate and dephasing time of the free evolution."""

    model_config = ConfigDict(frozen=True)

    omega_rot: float = Field(..., ge=0.0, description="Angular rotation rate Ω (rad per time unit)")
    t2: float = Field(..., gt=0.0, description="Dephasing time T₂ (time units); inf for no dephasing")


def born_probability(rho: DensityMatrix, e: Effect) -> float:
    p = float(np.trace(e.m @ rho.m).real)
    if -ATOL <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + ATOL:
        return 1.0
    return p


def _decay(t: float, t2: float) -> float:
    return math.exp(-t / t2)


def evolve_state(rho0: DensityMatrix, t: float, ev: EvolutionParams) -> DensityMatrix:
    """Closed-form free evolution about ẑ."""
    if t < 0:
        raise InvalidParameterError(f"evolution time must be non-negative, got {t}")
    envelope = _decay(t, ev.t2)
    c = envelope * math.cos(ev.omega_rot * t)
    s = envelope * math.sin(ev.omega_rot * t)
    m = rho0.m
    out = (
        0.5 * (1.0 + c) * m
        + 0.5 * (1.0 - c) * (SIGMA_Z @ m @ SIGMA_Z)
        + 0.5j * s * (SIGMA_Z @ m - m @ SIGMA_Z)
    )
    return DensityMatrix(out)


def _unit_axis(axis: Sequence[float] | BlochVector) -> np.ndarray:
    n = np.asarray(axis.r if isinstance(axis, BlochVector) else axis, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > AXIS_ATOL:
        raise InvalidParameterError(f"Hamiltonian axis must be a unit vector, got norm {np.linalg.norm(n):.12g}")
    return n


def lindblad_generator(axis: Sequence[float] | BlochVector, ev: EvolutionParams) -> np.ndarray:
    """Liouvillian acting on row-major vec(ρ), where vec(AρB) = (A ⊗ Bᵀ) vec(ρ)."""
    sn = pauli_vector(_unit_axis(axis))
    hamiltonian = 0.5j * ev.omega_rot * (np.kron(sn, IDENTITY) - np.kron(IDENTITY, sn.T))
    dephasing = (np.kron(sn, sn.T) - np.eye(4)) / (2.0 * ev.t2)
    return hamiltonian + dephasing


def default_step_count(t: float, ev: EvolutionParams) -> int:
    rate = max(ev.omega_rot, 1.0 / ev.t2)
    if t == 0 or rate == 0:
        return 1
    return max(1, math.ceil(STEPS_PER_HALF_TURN * t * rate / math.pi))


def lindblad_propagator(
    t: float,
    axis: Sequence[float] | BlochVector,
    ev: EvolutionParams,
    n_steps: int | None = None,
) -> np.ndarray:
    """Fixed-step RK4 propagator on row-major vec(ρ) for duration t."""
    if t < 0:
        raise InvalidParameterError(f"evolution time must be non-negative, got {t}")
    if n_steps is None:
        n_steps = default_step_count(t, ev)
    if n_steps <= 0:
        raise InvalidParameterError(f"step count must be positive, got {n_steps}")
    a = (t / n_steps) * lindblad_generator(axis, ev)
    a2 = a @ a
    a3 = a2 @ a
    step = np.eye(4) + a + a2 / 2.0 + a3 / 6.0 + (a3 @ a) / 24.0
    logger.debug(f"[lindblad_propagator] t={t:.6g} steps={n_steps}")
    return np.linalg.matrix_power(step, n_steps)


def lindblad_integrate(
    rho0: DensityMatrix,
    t: float,
    hamiltonian_axis: Sequence[float] | BlochVector,
    ev: EvolutionParams,
    n_steps: int | None = None,
) -> DensityMatrix:
    propagator = lindblad_propagator(t, hamiltonian_axis, ev, n_steps=n_steps)
    out = (propagator @ rho0.m.reshape(4)).reshape(2, 2)
    return DensityMatrix(0.5 * (out + out.conj().T))


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian matrix with eigenvalues clamped at zero."""
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.where(w > EIG_FLOOR * max(float(w[-1]), 1.0), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def matrix_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Uhlmann fidelity (Tr √(√a b √a))² of two unit-trace PSD matrices."""
    if a.shape == (2, 2) and b.shape == (2, 2):
        det_a = max(float(np.linalg.det(a).real), 0.0)
        det_b = max(float(np.linalg.det(b).real), 0.0)
        det_a = det_a if det_a > DET_FLOOR else 0.0
        det_b = det_b if det_b > DET_FLOOR else 0.0
        f = float(np.trace(a @ b).real) + 2.0 * math.sqrt(det_a * det_b)
        return min(max(f, 0.0), 1.0)
    root = psd_sqrt(a)
    inner = root @ b @ root
    lam = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    lam = np.where(lam > EIG_FLOOR * max(float(lam[-1]), 1.0), lam, 0.0)
    f = float(np.sum(np.sqrt(lam))) ** 2
    return min(max(f, 0.0), 1.0)


def state_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return matrix_fidelity(rho.m, sigma.m)
