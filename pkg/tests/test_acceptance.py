"""End-to-end behaviour of the reconstruction pipeline.

The statistical sweeps are marked slow; run them with ``pytest -m slow``.
"""

import numpy as np
import pytest

from spam_tomography_rooms_pkg.configuration import OptimizerBudget, SweepConfig
from spam_tomography_rooms_pkg.services.estimators import align_gauge, fit
from spam_tomography_rooms_pkg.services.experiments import run_process_sweep, run_spam_sweep
from spam_tomography_rooms_pkg.services.oracle import run_oracle_suite
from spam_tomography_rooms_pkg.services.process_tomography import linear_invert, mle_project
from spam_tomography_rooms_pkg.services.simulation import expected_static, process_probabilities
from spam_tomography_rooms_pkg.services.spam_model import pack, realize
from spam_tomography_rooms_pkg.utils.choi import ChoiState, random_choi
from spam_tomography_rooms_pkg.utils.qubit import DensityMatrix, EvolutionParams, evolve_state, lindblad_integrate

SHOT_GRID = "1e3,1e4,1e5,1e6,1e7"


def mean_metric(rows, metric, **key):
    values = [
        r.value for r in rows
        if r.metric == metric and all(getattr(r, k) == v for k, v in key.items())
    ]
    assert values, f"no {metric} rows for {key}"
    return float(np.mean(values))


@pytest.fixture(scope="module")
def convergence_sweep():
    cfg = SweepConfig(methods="B,C", n_values=SHOT_GRID, runs_per_point=10, seed=2024)
    return run_spam_sweep(cfg).rows


@pytest.fixture(scope="module")
def saturation_sweep():
    cfg = SweepConfig(methods="A,B,C", n_values="1e5,1e7", n_spam_values="1e6,1e9", runs_per_point=3, seed=2024)
    return run_process_sweep(cfg).rows


class TestExactPaths:
    def test_closed_form_matches_integrator(self, rng):
        worst = 0.0
        for _ in range(100):
            ev = EvolutionParams(omega_rot=rng.uniform(0.1, 3.0), t2=rng.uniform(1.0, 20.0))
            direction = rng.standard_normal(3)
            rho = DensityMatrix.from_bloch(direction / np.linalg.norm(direction) * rng.uniform())
            t = rng.uniform(0.0, 5.0 * ev.t2)
            diff = evolve_state(rho, t, ev).m - lindblad_integrate(rho, t, (0.0, 0.0, 1.0), ev).m
            worst = max(worst, float(np.max(np.abs(diff))))
        assert worst <= 1e-9

    def test_process_round_trip(self, rng, truth_c):
        states, effects = realize(truth_c)
        for _ in range(100):
            process = random_choi(rng)
            estimate = linear_invert(process_probabilities(truth_c, process), states, effects)
            assert np.linalg.norm(estimate.m - process.m) <= 1e-8
            assert np.linalg.norm(mle_project(process, 10**6).choi.m - process.m) <= 1e-6


@pytest.mark.slow
class TestIdentifiability:
    def test_method_c_recovers_truth_from_exact_probabilities(self, truth_c):
        data = expected_static(truth_c, 10**12)
        result = fit("C", data, OptimizerBudget(n_restarts=2), "near_ideal", seed=5)
        aligned = align_gauge(result.estimate, truth_c)
        assert np.max(np.abs(pack(aligned) - pack(truth_c))) <= 1e-6


@pytest.mark.slow
class TestConvergence:
    @pytest.mark.parametrize("method", ["B", "C"])
    def test_infidelity_scales_inversely_with_shots(self, convergence_sweep, method):
        shots = [10**k for k in range(3, 8)]
        means = [mean_metric(convergence_sweep, "state_infidelity", method=method, n_shots=n) for n in shots]
        slope = np.polyfit(np.log10(shots), np.log10(means), 1)[0]
        assert slope == pytest.approx(-1.0, abs=0.15)

    def test_method_c_beats_method_b(self, convergence_sweep):
        for n in (10**4, 10**5, 10**6, 10**7):
            c = mean_metric(convergence_sweep, "state_infidelity", method="C", n_shots=n)
            b = mean_metric(convergence_sweep, "state_infidelity", method="B", n_shots=n)
            assert c <= b

    def test_method_a_has_a_floor(self):
        cfg = SweepConfig(methods="A", n_values="1e7", runs_per_point=3, seed=2024)
        floor = mean_metric(run_spam_sweep(cfg).rows, "state_infidelity", n_shots=10**7)
        assert 3e-4 <= floor <= 3e-2


@pytest.mark.slow
class TestProcessReconstruction:
    def test_projection_is_feasible(self, rng):
        for _ in range(100):
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            v /= np.linalg.norm(v)
            rho_rec = ChoiState(random_choi(rng, rank=2).m + 0.05 * (np.outer(v, v.conj()) - np.eye(4) / 4))
            estimate = mle_project(rho_rec, 10**6)
            assert estimate.outer_iterations == 5
            assert estimate.constraint_residual <= 1e-6
            assert estimate.converged
            assert estimate.choi.eigenvalues[0] >= -1e-8

    @pytest.mark.parametrize("method", ["A", "B", "C"])
    def test_spam_limited_saturation(self, saturation_sweep, method):
        low = mean_metric(saturation_sweep, "fidelity_true", method=method, n_spam=10**6, n_shots=10**5)
        high = mean_metric(saturation_sweep, "fidelity_true", method=method, n_spam=10**6, n_shots=10**7)
        assert abs(high - low) / low < 0.1

    def test_better_calibration_helps_b_and_c_only(self, saturation_sweep):
        def infidelity(method, n_spam):
            return 1.0 - mean_metric(saturation_sweep, "fidelity_true", method=method, n_spam=n_spam, n_shots=10**7)

        for method in ("B", "C"):
            assert infidelity(method, 10**9) < infidelity(method, 10**6)
        assert infidelity("A", 10**9) >= 0.5 * infidelity("A", 10**6)


@pytest.mark.slow
class TestPropertySuites:
    def test_thousand_cases_per_check(self):
        failed = [c.check for c in run_oracle_suite(seed=0, cases=1000) if not c.passed]
        assert failed == []
