"""Seeded brute-force checks of the numerical core.

Each check compares a fast path against an independent slow one on random
cases and reports the worst error against a fixed tolerance.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from ..configuration.sweepconfig import GroundTruthConfig
from ..utils.choi import (
    ChoiState,
    apply_choi,
    choi_from_unitary,
    choi_to_ptm,
    ptm_to_choi,
    random_choi,
    random_unitary,
)
from ..utils.errors import InvalidParameterError
from ..utils.methods import Method
from ..utils.qubit import DensityMatrix, EvolutionParams, born_probability, evolve_state, lindblad_integrate
from ..utils.seeding import derive_seed
from .estimators import probability_jacobian
from .process_tomography import linear_invert, mle_project
from .simulation import make_ground_truth, process_probabilities
from .spam_model import born_table, pack, predict_timeseries, realize, timeseries_by_evolution

Z_AXIS = (0.0, 0.0, 1.0)
IDENTIFIABLE_RANK_C = 22


class OracleCheck(BaseModel):
    check: str = Field(..., description="Name of the property checked")
    cases: int = Field(..., ge=0, description="Number of random cases")
    max_error: float = Field(..., description="Worst observed error")
    tolerance: float = Field(..., description="Largest accepted error")

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_error) and self.max_error <= self.tolerance)


def _random_state(rng: np.random.Generator) -> DensityMatrix:
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    return DensityMatrix.from_bloch(direction * rng.uniform(0.0, 1.0))


def _random_truth(rng: np.random.Generator, method: Method):
    cfg = GroundTruthConfig(seed=int(rng.integers(0, 2**63)))
    return make_ground_truth(cfg, method)


def _evolution_agreement(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        ev = EvolutionParams(omega_rot=rng.uniform(0.1, 3.0), t2=rng.uniform(1.0, 20.0))
        t = rng.uniform(0.0, 5.0 * ev.t2)
        rho = _random_state(rng)
        diff = evolve_state(rho, t, ev).m - lindblad_integrate(rho, t, Z_AXIS, ev).m
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _born_table(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        truth = _random_truth(rng, Method.C)
        states, effects = realize(truth)
        slow = np.array([[born_probability(rho, e) for e in effects] for rho in states])
        worst = max(worst, float(np.max(np.abs(born_table(truth) - slow))))
    return worst


def _choi_round_trips(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        u = random_unitary(rng)
        rho = _random_state(rng)
        direct = u @ rho.m @ u.conj().T
        worst = max(worst, float(np.max(np.abs(apply_choi(choi_from_unitary(u), rho).m - direct))))
        choi = random_choi(rng)
        worst = max(worst, float(np.max(np.abs(ptm_to_choi(choi_to_ptm(choi)).m - choi.m))))
    return worst


def _timeseries_closed_form(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        truth = _random_truth(rng, Method.B)
        times = np.sort(rng.uniform(0.0, 3.0 * truth.evolution.t2, size=8))
        diff = predict_timeseries(truth, times) - timeseries_by_evolution(truth, times)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _linear_inversion(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        truth = _random_truth(rng, Method.C)
        states, effects = realize(truth)
        process = random_choi(rng)
        estimate = linear_invert(process_probabilities(truth, process), states, effects)
        worst = max(worst, float(np.linalg.norm(estimate.m - process.m)))
    return worst


def _perturbed_choi(rng: np.random.Generator) -> ChoiState:
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    return ChoiState(random_choi(rng, rank=2).m + 0.05 * (np.outer(v, v.conj()) - np.eye(4) / 4.0))


def _mle_feasibility(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        estimate = mle_project(_perturbed_choi(rng), 10**6)
        worst = max(worst, estimate.constraint_residual, -float(estimate.choi.eigenvalues[0]))
    return worst


def _jacobian_rank(rng: np.random.Generator, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        vector = pack(_random_truth(rng, Method.C))
        rank = np.linalg.matrix_rank(probability_jacobian(Method.C, vector), tol=1e-7)
        worst = max(worst, float(abs(rank - IDENTIFIABLE_RANK_C)))
    return worst


# name, check, tolerance, share of the requested cases
_CHECKS: tuple[tuple[str, Callable[[np.random.Generator, int], float], float, float], ...] = (
    ("evolve_vs_lindblad", _evolution_agreement, 1e-9, 1.0),
    ("born_table", _born_table, 1e-12, 1.0),
    ("choi_round_trip", _choi_round_trips, 1e-10, 1.0),
    ("timeseries_closed_form", _timeseries_closed_form, 1e-10, 0.2),
    ("linear_inversion", _linear_inversion, 1e-8, 1.0),
    ("mle_feasibility", _mle_feasibility, 1e-6, 0.1),
    ("jacobian_rank_c", _jacobian_rank, 0.0, 0.1),
)


def run_oracle_suite(seed: int = 0, cases: int = 100) -> list[OracleCheck]:
    if cases < 1:
        raise InvalidParameterError(f"cases must be at least 1, got {cases}")
    results = []
    for name, check, tolerance, share in _CHECKS:
        n = max(1, int(round(cases * share)))
        rng = np.random.default_rng(derive_seed(seed, "oracle", name))
        result = OracleCheck(check=name, cases=n, max_error=check(rng, n), tolerance=tolerance)
        summary = f"[run_oracle_suite] {name}: {n} case(s), max error {result.max_error:.3e} (tol {tolerance:.0e})"
        if result.passed:
            logger.info(summary)
        else:
            logger.warning(summary)
        results.append(result)
    return results
