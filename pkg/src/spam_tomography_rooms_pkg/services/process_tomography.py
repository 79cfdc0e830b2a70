"""Process reconstruction from calibrated SPAM sets.

Linear inversion solves for the twelve free entries of the Pauli transfer
matrix. The result is projected onto physical Choi states by minimizing

    −ln L(t) = N Σ_k (p_k − q_k(t))² / max(|q_k(1 − q_k)|, 10⁻³)

over the Cholesky parametrization ρ(t) = T†T / Tr(T†T), with the four
trace-preservation constraints Tr_B ρ(t) = I/2 enforced by an augmented
Lagrangian. p and q are Pauli components of the input and the candidate.

Each inner problem is a sum of squares, since

    L(t) + λ·C + ½μ|C|² = Σ_k r_k² + ½μ |C + λ/μ|² − |λ|²/2μ

with r_k = (p_k − q_k)/√den_k, and is solved by Levenberg-Marquardt with an
analytic Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from loguru import logger
from scipy.optimize import least_squares

from ..configuration.sweepconfig import ProcessConfig
from ..utils.choi import (
    PAULI_BASIS_2Q,
    ChoiState,
    PauliTransferMatrix,
    choi_from_propagator,
    choi_from_unitary,
    clamp_psd,
    partial_trace_b,
    pauli_expansion,
    ptm_to_choi,
    rescale_trace_preserving,
)
from ..utils.errors import InvalidParameterError, RankDeficientError, ShapeMismatchError
from ..utils.qubit import (
    HADAMARD,
    PAULIS,
    DensityMatrix,
    Effect,
    EvolutionParams,
    lindblad_propagator,
    matrix_fidelity,
)

HADAMARD_AXIS = np.array([1.0, 0.0, 1.0]) / math.sqrt(2.0)
DENOMINATOR_FLOOR = 1e-3
N_CHOLESKY = 16
INNER_TOL = 1e-14
FEASIBILITY_TOL = 1e-6
_LOWER_ROWS, _LOWER_COLS = np.tril_indices(4, -1)


def _cholesky_basis() -> np.ndarray:
    basis = np.zeros((N_CHOLESKY, 4, 4), dtype=complex)
    for k in range(4):
        basis[k, k, k] = 1.0
    for k, (row, col) in enumerate(zip(_LOWER_ROWS, _LOWER_COLS)):
        basis[4 + 2 * k, row, col] = 1.0
        basis[5 + 2 * k, row, col] = 1j
    return basis


# ∂T/∂t_m
_CHOLESKY_BASIS = _cholesky_basis()

# Hermitian K_c and offsets b_c with C_c = Tr(K_c ρ) − b_c
_CONSTRAINT_OPERATORS = np.array([
    np.kron(np.diag([1.0, 0.0]), PAULIS[0]),
    np.kron(np.diag([0.0, 1.0]), PAULIS[0]),
    np.kron(PAULIS[1] / 2.0, PAULIS[0]),
    np.kron(-PAULIS[2] / 2.0, PAULIS[0]),
])
_CONSTRAINT_OFFSETS = np.array([0.5, 0.5, 0.0, 0.0])


@dataclass(frozen=True, eq=False)
class CholeskyParams:
    """Sixteen reals: the diagonal of T, then (re, im) of the strictly lower entries row by row."""

    t: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=float).reshape(-1)
        if t.shape != (N_CHOLESKY,):
            raise ShapeMismatchError(f"Cholesky parameters need {N_CHOLESKY} entries, got {t.size}")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)


@dataclass
class AugLagState:
    lambdas: np.ndarray = field(default_factory=lambda: np.zeros(4))
    mu: float = 1e3
    iteration: int = 0

    def update(self, residual: np.ndarray, eta: float) -> None:
        self.lambdas = self.lambdas + self.mu * residual
        self.mu *= eta
        self.iteration += 1


@dataclass(frozen=True)
class ProcessEstimate:
    """Projected Choi state with the diagnostics of the constrained fit."""

    choi: ChoiState
    objective_value: float
    converged: bool
    constraint_residual: float
    outer_iterations: int


def _vector(t: CholeskyParams | np.ndarray) -> np.ndarray:
    return t.t if isinstance(t, CholeskyParams) else np.asarray(t, dtype=float)


def cholesky_matrix(t: CholeskyParams | np.ndarray) -> np.ndarray:
    v = _vector(t)
    tri = np.diag(v[:4]).astype(complex)
    tri[_LOWER_ROWS, _LOWER_COLS] = v[4::2] + 1j * v[5::2]
    return tri


def choi_matrix(t: CholeskyParams | np.ndarray) -> np.ndarray:
    tri = cholesky_matrix(t)
    a = tri.conj().T @ tri
    return a / np.trace(a).real


def cholesky_from_choi(m: ChoiState | np.ndarray) -> CholeskyParams:
    """Lower-triangular T with T†T = m for PSD m.

    Uses QR of the reversed square root, so rank-deficient inputs factor too.
    """
    m = m.m if isinstance(m, ChoiState) else np.asarray(m, dtype=complex)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    reverse = np.eye(4)[::-1]
    _, upper = np.linalg.qr(root @ reverse)
    phases = np.diag(upper).copy()
    phases[np.abs(phases) < 1e-300] = 1.0
    upper = (np.conj(phases) / np.abs(phases))[:, None] * upper
    tri = reverse @ upper @ reverse
    values = np.empty(N_CHOLESKY)
    values[:4] = np.diag(tri).real
    lower = tri[_LOWER_ROWS, _LOWER_COLS]
    values[4::2] = lower.real
    values[5::2] = lower.imag
    return CholeskyParams(values)


def _pauli_components(m: np.ndarray) -> np.ndarray:
    return np.einsum("kij,ji->k", PAULI_BASIS_2Q, m).real


def _nll_terms(q: np.ndarray, p: np.ndarray) -> tuple[float, np.ndarray]:
    """Per-shot likelihood and its gradient with respect to q."""
    diff = p - q
    raw = q * (1.0 - q)
    active = np.abs(raw) > DENOMINATOR_FLOOR
    denominator = np.where(active, np.abs(raw), DENOMINATOR_FLOOR)
    value = float(np.sum(diff**2 / denominator))
    d_denominator = np.where(active, np.sign(raw) * (1.0 - 2.0 * q), 0.0)
    grad = -2.0 * diff / denominator - diff**2 * d_denominator / denominator**2
    return value, grad


def process_nll(t: CholeskyParams | np.ndarray, rho_rec: ChoiState, shots: int) -> float:
    value, _ = _nll_terms(_pauli_components(choi_matrix(t)), pauli_expansion(rho_rec))
    return shots * value


def constraints(t: CholeskyParams | np.ndarray) -> np.ndarray:
    """Real components of Tr_B ρ(t) − I/2: two diagonal deviations, then Re and Im of the (0, 1) entry."""
    reduced = partial_trace_b(choi_matrix(t))
    return np.array([
        reduced[0, 0].real - 0.5,
        reduced[1, 1].real - 0.5,
        reduced[0, 1].real,
        reduced[0, 1].imag,
    ])


def _augmented_lagrangian(v: np.ndarray, p: np.ndarray, lambdas: np.ndarray, mu: float) -> tuple[float, np.ndarray]:
    tri = cholesky_matrix(v)
    a = tri.conj().T @ tri
    tau = np.trace(a).real
    rho = a / tau
    value, dq = _nll_terms(_pauli_components(rho), p)
    c = np.einsum("kij,ji->k", _CONSTRAINT_OPERATORS, rho).real - _CONSTRAINT_OFFSETS
    value += float(lambdas @ c + 0.5 * mu * c @ c)

    g = np.einsum("k,kij->ij", dq, PAULI_BASIS_2Q) + np.einsum("k,kij->ij", lambdas + mu * c, _CONSTRAINT_OPERATORS)
    g_tilde = (g - np.trace(g @ rho).real * np.eye(4)) / tau
    w = 2.0 * g_tilde @ tri.conj().T
    grad = np.empty(N_CHOLESKY)
    grad[:4] = np.diag(w).real
    lower = w[_LOWER_COLS, _LOWER_ROWS]
    grad[4::2] = lower.real
    grad[5::2] = -lower.imag
    return value, grad


def _scaled_misfit(q: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """r_k = (p_k − q_k)/√den_k and its derivative with respect to q_k."""
    diff = p - q
    raw = q * (1.0 - q)
    active = np.abs(raw) > DENOMINATOR_FLOOR
    denominator = np.where(active, np.abs(raw), DENOMINATOR_FLOOR)
    root = np.sqrt(denominator)
    d_denominator = np.where(active, np.sign(raw) * (1.0 - 2.0 * q), 0.0)
    return diff / root, -1.0 / root - diff * d_denominator / (2.0 * denominator * root)


def _choi_derivatives(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    tri = cholesky_matrix(v)
    a = tri.conj().T @ tri
    tau = np.trace(a).real
    rho = a / tau
    d_a = np.einsum("mji,jk->mik", _CHOLESKY_BASIS.conj(), tri) + np.einsum("ji,mjk->mik", tri.conj(), _CHOLESKY_BASIS)
    d_tau = np.einsum("mii->m", d_a).real
    return rho, (d_a - d_tau[:, None, None] * rho) / tau


def _inner_residuals(v: np.ndarray, p: np.ndarray, lambdas: np.ndarray, mu: float) -> np.ndarray:
    rho = choi_matrix(v)
    r, _ = _scaled_misfit(_pauli_components(rho), p)
    c = np.einsum("kij,ji->k", _CONSTRAINT_OPERATORS, rho).real - _CONSTRAINT_OFFSETS
    return np.concatenate([r, math.sqrt(0.5 * mu) * (c + lambdas / mu)])


def _inner_jacobian(v: np.ndarray, p: np.ndarray, lambdas: np.ndarray, mu: float) -> np.ndarray:
    rho, d_rho = _choi_derivatives(v)
    _, dr_dq = _scaled_misfit(_pauli_components(rho), p)
    dq = np.einsum("kij,mji->km", PAULI_BASIS_2Q, d_rho).real
    dc = np.einsum("kij,mji->km", _CONSTRAINT_OPERATORS, d_rho).real
    return np.vstack([dr_dq[:, None] * dq, math.sqrt(0.5 * mu) * dc])


def mle_project(rho_rec: ChoiState, shots: int, budget: ProcessConfig | None = None) -> ProcessEstimate:
    """Closest physical Choi state to ``rho_rec`` under the process likelihood.

    ``constraint_residual`` is max|C| after the last outer iteration, before
    the trace-preserving rescale; ``converged`` requires it to be ≤ 1e-6.
    """
    budget = budget or ProcessConfig()
    p = pauli_expansion(rho_rec)
    v = cholesky_from_choi(clamp_psd(rho_rec.m)).t.copy()
    state = AugLagState(mu=budget.mu0)
    converged = True

    for _ in range(budget.outer_iterations):
        res = least_squares(
            _inner_residuals, v, jac=_inner_jacobian, args=(p, state.lambdas, state.mu), method="lm",
            ftol=INNER_TOL, xtol=INNER_TOL, gtol=INNER_TOL, max_nfev=budget.inner_max_iterations,
        )
        if res.status <= 0 or not np.all(np.isfinite(res.x)):
            converged = False
            logger.warning(f"[mle_project] inner solve {state.iteration}: {res.message}")
        if np.all(np.isfinite(res.x)) and np.any(res.x):
            v = res.x / np.linalg.norm(res.x)
        residual = constraints(v)
        merit, _ = _augmented_lagrangian(v, p, state.lambdas, state.mu)
        logger.debug(
            f"[mle_project] outer {state.iteration}: mu={state.mu:.3g} merit={merit:.10g} "
            f"max|C|={np.max(np.abs(residual)):.3e} nfev={res.nfev}"
        )
        state.update(residual, budget.eta)

    pre_polish = float(np.max(np.abs(constraints(v))))
    if pre_polish > FEASIBILITY_TOL:
        converged = False
        logger.warning(f"[mle_project] constraints not met after {state.iteration} outer iterations: max|C|={pre_polish:.3e}")
    m = choi_matrix(v)
    try:
        m = rescale_trace_preserving(m)
    except ValueError as e:
        converged = False
        logger.warning(f"[mle_project] trace-preserving rescale skipped: {e}")
    choi = ChoiState(m)
    objective_value = shots * _nll_terms(_pauli_components(choi.m), p)[0]
    logger.debug(f"[mle_project] done: residual before rescale {pre_polish:.3e}, objective {objective_value:.6g}")
    return ProcessEstimate(
        choi=choi,
        objective_value=objective_value,
        converged=converged,
        constraint_residual=pre_polish,
        outer_iterations=state.iteration,
    )


def linear_invert(
    frequencies: np.ndarray,
    states: Sequence[DensityMatrix],
    effects: Sequence[Effect],
) -> ChoiState:
    """Least-squares Pauli transfer matrix from p_{j|i} = ½ u_jᵀ T v_i, returned as a Choi state."""
    f = np.asarray(frequencies, dtype=float)
    if f.shape != (len(states), len(effects)):
        raise ShapeMismatchError(f"frequency table {f.shape} does not match {len(states)} states x {len(effects)} effects")
    if f.size < 12:
        raise RankDeficientError(f"linear inversion needs at least 12 cells, got {f.size}")
    v = np.array([[np.trace(s @ rho.m).real for s in PAULIS] for rho in states])
    u = np.array([[np.trace(s @ e.m).real for s in PAULIS] for e in effects])

    rows, targets = [], []
    for i in range(len(states)):
        for j in range(len(effects)):
            rows.append(0.5 * np.kron(u[j, 1:], v[i]))
            targets.append(f[i, j] - 0.5 * u[j, 0] * v[i, 0])
    design = np.array(rows)
    solution, _, rank, _ = np.linalg.lstsq(design, np.array(targets), rcond=None)
    if rank < 12:
        raise RankDeficientError(f"design matrix has rank {rank} < 12; the SPAM set is not informationally complete")

    ptm = np.zeros((4, 4))
    ptm[0, 0] = 1.0
    ptm[1:, :] = solution.reshape(3, 4)
    choi = ptm_to_choi(PauliTransferMatrix(ptm))
    lowest = choi.eigenvalues[0]
    if lowest < -1e-10:
        logger.debug(f"[linear_invert] reconstruction is not positive (min eigenvalue {lowest:.3e})")
    return choi


def hadamard_truth(ev: EvolutionParams, n_steps: int | None = None) -> ChoiState:
    """Noisy Hadamard: rotation by π about (x̂ + ẑ)/√2 with dephasing along the same axis."""
    if ev.omega_rot <= 0:
        raise InvalidParameterError("Hadamard truth needs a positive rotation rate")
    duration = math.pi / ev.omega_rot
    return choi_from_propagator(lindblad_propagator(duration, HADAMARD_AXIS, ev, n_steps=n_steps))


def ideal_hadamard() -> ChoiState:
    return choi_from_unitary(HADAMARD)


def process_fidelity(a: ChoiState, b: ChoiState) -> float:
    """State fidelity of Choi states; the second argument is clamped to PSD."""
    return matrix_fidelity(a.m, clamp_psd(b.m))
