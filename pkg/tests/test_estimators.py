import numpy as np
import pytest
from numpy.testing import assert_allclose

from spam_tomography_rooms_pkg.configuration import OptimizerBudget
from spam_tomography_rooms_pkg.services.estimators import (
    ReconstructionReport,
    _apply_gauge,
    align_gauge,
    cell_coefficients,
    fit,
    frequency_guess,
    gauge_dimension,
    init_strategies,
    mirror_y,
    nll_static,
    nll_timeseries,
    probability_jacobian,
    reconstruction_report,
    refine_evolution,
    shot_weights,
    spectral_start,
)
from spam_tomography_rooms_pkg.services.simulation import (
    CountDataset,
    default_times,
    expected_static,
    expected_timeseries,
    sample_static,
    sample_timeseries,
)
from spam_tomography_rooms_pkg.services.spam_model import (
    bounds,
    from_arrays,
    pack,
    parameter_count,
    predict_timeseries,
    timeseries_arrays,
    unpack,
    vector_arrays,
)
from spam_tomography_rooms_pkg.utils.errors import InvalidParameterError, ShapeMismatchError
from spam_tomography_rooms_pkg.utils.methods import Method
from spam_tomography_rooms_pkg.utils.qubit import EvolutionParams


class TestObjective:
    def test_vanishes_at_exact_probabilities(self, truth_c):
        data = expected_static(truth_c, 10**12)
        assert nll_static(truth_c, data) < 1e-6

    def test_timeseries_vanishes_at_exact_probabilities(self, truth_b, ground_truth_config):
        data = expected_timeseries(truth_b, default_times(ground_truth_config), 10**12)
        assert nll_timeseries(truth_b, data) < 1e-6

    def test_grows_away_from_truth(self, truth_c):
        data = expected_static(truth_c, 10**6)
        shifted = from_arrays(
            Method.C, truth_c.state_vectors() * 0.98, truth_c.measurement_vectors(),
            truth_c.noise.eps0, truth_c.noise.eps1, None,
        )
        assert nll_static(shifted, data) > nll_static(truth_c, data) + 1.0

    def test_layout_and_method_checks(self, truth_b, truth_c, ground_truth_config):
        static = expected_static(truth_c, 1000)
        with pytest.raises(InvalidParameterError):
            nll_static(truth_b, static)
        with pytest.raises(InvalidParameterError):
            nll_timeseries(truth_c, static)
        series = expected_timeseries(truth_b, default_times(ground_truth_config), 1000)
        with pytest.raises(ShapeMismatchError):
            nll_static(truth_c, series)

    def test_static_nll_ignores_row_and_column_order(self, truth_c):
        data = sample_static(truth_c, 10**4, seed=5)
        rows, cols = np.array([0, 1, 4, 2, 3]), np.array([0, 3, 1, 4, 2])
        permuted = from_arrays(
            Method.C, truth_c.state_vectors()[rows], truth_c.measurement_vectors()[cols],
            truth_c.noise.eps0, truth_c.noise.eps1, None,
        )
        shuffled = CountDataset("static", data.counts[rows][:, cols], data.shots)
        assert nll_static(permuted, shuffled) == pytest.approx(nll_static(truth_c, data), rel=1e-12)

    def test_timeseries_nll_ignores_time_bin_order(self, truth_b, ground_truth_config, rng):
        data = sample_timeseries(truth_b, default_times(ground_truth_config), 10**4, seed=6)
        order = rng.permutation(data.times.size)
        shuffled = CountDataset("timeseries", data.counts[..., order], data.shots, times=data.times[order])
        assert nll_timeseries(truth_b, shuffled) == pytest.approx(nll_timeseries(truth_b, data), rel=1e-12)

    def test_weights(self):
        f = np.array([0.5, 0.0])
        assert_allclose(shot_weights(f, 100), [400.0, 100 / (0.005 * 0.995)])
        assert_allclose(shot_weights(f, 100, paper_weights=True), 1.0 / np.sqrt(100 * np.array([0.25, 0.005 * 0.995])))


class TestGauge:
    def test_dimensions(self):
        assert [gauge_dimension(m) for m in "ABC"] == [0, 1, 3]

    def test_method_c_jacobian_rank(self, truth_c):
        jacobian = probability_jacobian(Method.C, pack(truth_c))
        assert jacobian.shape == (25, parameter_count("C"))
        assert np.linalg.matrix_rank(jacobian, tol=1e-7) == 25 - gauge_dimension("C")

    def test_gauge_leaves_probabilities_unchanged(self, truth_c):
        g = np.array([1.05, 0.03, 0.97])
        r, big_r = _apply_gauge(Method.C, g, truth_c.state_vectors(), truth_c.measurement_vectors())
        moved = from_arrays(Method.C, r, big_r, truth_c.noise.eps0, truth_c.noise.eps1, None)
        data = expected_static(truth_c, 10**12)
        assert nll_static(moved, data) < 1e-6

    def test_align_recovers_reference(self, truth_c):
        g = np.array([1.05, 0.03, 0.97])
        r, big_r = _apply_gauge(Method.C, g, truth_c.state_vectors(), truth_c.measurement_vectors())
        moved = from_arrays(Method.C, r, big_r, truth_c.noise.eps0, truth_c.noise.eps1, None)
        assert_allclose(pack(align_gauge(moved, truth_c)), pack(truth_c), atol=1e-8)

    def test_method_b_scalar_gauge(self, truth_b):
        r, big_r = _apply_gauge(Method.B, np.array([0.9]), truth_b.state_vectors(), truth_b.measurement_vectors())
        moved = from_arrays(Method.B, r, big_r, truth_b.noise.eps0, truth_b.noise.eps1, truth_b.evolution)
        assert_allclose(pack(align_gauge(moved, truth_b)), pack(truth_b), atol=1e-8)


class TestInitialization:
    def test_near_ideal_points_are_bounded(self):
        points = init_strategies("C", "near_ideal", 5, seed=1)
        lower, upper = bounds("C")
        assert len(points) == 5
        for x in points:
            assert np.all((x >= lower) & (x <= upper))

    def test_near_truth_needs_truth(self):
        with pytest.raises(InvalidParameterError, match="truth"):
            init_strategies("C", "near_truth", 1)

    def test_near_truth_stays_close(self, truth_c):
        (x,) = init_strategies("C", "near_truth", 1, truth=truth_c, delta=0.01, seed=2)
        assert np.max(np.abs(x - pack(truth_c))) <= 0.011

    def test_unknown_strategy(self):
        with pytest.raises(InvalidParameterError, match="unknown init strategy"):
            init_strategies("C", "psychic", 1)

    def test_method_b_needs_evolution_source(self):
        with pytest.raises(InvalidParameterError):
            init_strategies("B", "ignorant", 1)

    def test_deterministic_per_seed(self):
        a = init_strategies("C", "ignorant", 3, seed=5)
        b = init_strategies("C", "ignorant", 3, seed=5)
        for x, y in zip(a, b):
            assert_allclose(x, y)

    def test_frequency_guess(self, truth_b, ground_truth_config):
        data = expected_timeseries(truth_b, default_times(ground_truth_config), 10**6)
        guess = frequency_guess(data)
        assert guess.omega_rot == pytest.approx(ground_truth_config.omega_rot, rel=0.15)


class TestMethodBStarts:
    @pytest.fixture
    def exact_series(self, truth_b, ground_truth_config):
        return expected_timeseries(truth_b, default_times(ground_truth_config), 10**12)

    @pytest.fixture
    def sampled_series(self, truth_b, ground_truth_config):
        return sample_timeseries(truth_b, default_times(ground_truth_config), 10**6, seed=9)

    def test_cell_coefficients_fit_exact_series(self, truth_b, exact_series):
        coef, rss = cell_coefficients(exact_series, truth_b.evolution)
        assert coef.shape == (4, 3, 3)
        assert rss < 1e-15
        assert coef[0, 0, 0] == pytest.approx(1.0 - truth_b.noise.eps0, abs=1e-9)

    def test_refine_evolution_recovers_rotation(self, exact_series, ground_truth_config):
        refined = refine_evolution(exact_series, frequency_guess(exact_series))
        assert refined.omega_rot == pytest.approx(ground_truth_config.omega_rot, rel=1e-4)
        assert refined.t2 == pytest.approx(ground_truth_config.t2, rel=1e-3)

    def test_spectral_start_picks_the_rotation_sense(self, truth_b, sampled_series):
        x = spectral_start(sampled_series, truth_b.evolution)
        assert x is not None
        r, *_ = vector_arrays(Method.B, x)
        assert r[1, 0] >= 0.0
        here = nll_timeseries(unpack(Method.B, x), sampled_series)
        mirrored = nll_timeseries(unpack(Method.B, mirror_y(Method.B, x)), sampled_series)
        assert here < mirrored

    def test_flat_series_has_no_spectral_start(self, truth_b, ground_truth_config):
        times = default_times(ground_truth_config)
        flat = CountDataset("timeseries", np.full((4, 3, times.size), 500), 1000, times=times)
        assert spectral_start(flat, truth_b.evolution) is None

    def test_mirror_reverses_rotation_sense(self, truth_b, ground_truth_config):
        times = default_times(ground_truth_config)
        x = mirror_y(Method.B, pack(truth_b))
        r, big_r, eps0, eps1, (omega, t2) = vector_arrays(Method.B, pack(truth_b))
        reversed_sense = timeseries_arrays(r, big_r, eps0, eps1, -omega, t2, times)
        assert_allclose(predict_timeseries(unpack(Method.B, x), times), reversed_sense, atol=1e-12)
        assert_allclose(mirror_y(Method.B, x), pack(truth_b), atol=1e-15)

    def test_ignorant_points_pair_with_their_mirror(self, sampled_series):
        points = init_strategies("B", "ignorant", 4, seed=2, data=sampled_series)
        again = init_strategies("B", "ignorant", 4, seed=2, data=sampled_series)
        assert len(points) == 4
        for x, y in zip(points, again):
            assert_allclose(x, y)
        lower, upper = bounds("B")
        for first, second in (points[:2], points[2:]):
            assert_allclose(np.clip(mirror_y(Method.B, first), lower, upper), second, atol=1e-12)


class TestFit:
    def test_fit_method_c_from_samples(self, truth_c):
        data = sample_static(truth_c, 10**6, seed=21)
        result = fit("C", data, OptimizerBudget(n_restarts=2), "near_ideal", seed=3)
        assert result.converged
        assert result.n_evaluations > 0
        report = reconstruction_report(result.estimate, truth_c)
        assert report.state_infidelity < 1e-2
        assert max(report.alpha_deg[1:]) < 5.0

    def test_fit_method_b_from_samples(self, truth_b, ground_truth_config):
        data = sample_timeseries(truth_b, default_times(ground_truth_config), 10**6, seed=21)
        result = fit("B", data, OptimizerBudget(), "ignorant", seed=3)
        assert result.converged
        assert result.objective_value <= 10.0 * data.counts.size
        report = reconstruction_report(result.estimate, truth_b)
        assert report.state_infidelity < 1e-2
        assert report.omega_rel_error < 1e-2

    def test_local_minimum_is_not_converged(self, truth_b, ground_truth_config):
        data = sample_timeseries(truth_b, default_times(ground_truth_config), 10**6, seed=21)
        wrong = EvolutionParams(omega_rot=4.0, t2=ground_truth_config.t2)
        result = fit("B", data, OptimizerBudget(n_restarts=1), "ignorant", seed=3, nominal=wrong)
        assert not result.converged
        assert result.objective_value > 10.0 * data.counts.size

    def test_fit_rejects_wrong_layout(self, truth_c):
        with pytest.raises(ShapeMismatchError):
            fit("B", expected_static(truth_c, 1000))

    def test_estimate_is_physical(self, truth_c):
        data = sample_static(truth_c, 10**3, seed=8)
        result = fit("C", data, OptimizerBudget(n_restarts=1), "near_ideal", seed=4)
        assert np.all(np.linalg.norm(result.estimate.state_vectors(), axis=1) <= 1.0 + 1e-12)
        assert 0.0 <= result.estimate.noise.eps0 < 0.5


class TestReport:
    def test_self_report_is_zero(self, truth_c):
        report = reconstruction_report(truth_c, truth_c)
        assert_allclose(report.state_infidelities, 0.0, atol=1e-10)
        assert_allclose(report.alpha_deg, 0.0, atol=1e-6)
        assert report.eps0_error == pytest.approx(0.0, abs=1e-12)
        assert report.omega_rel_error is None

    def test_headline_metric_averages_shared_states(self):
        report = ReconstructionReport(
            method=Method.C,
            state_infidelities=[0.0, 0.1, 0.2, 0.3, 0.9],
            alpha_deg=[0.0],
            eps0_error=0.0,
            eps1_error=0.0,
        )
        assert report.state_infidelity == pytest.approx(0.2)

    def test_evolution_errors_for_method_b(self, truth_b):
        report = reconstruction_report(truth_b, truth_b)
        assert report.omega_rel_error == pytest.approx(0.0)
        assert report.t2_rel_error == pytest.approx(0.0)

    def test_shape_mismatch(self, truth_b, truth_c):
        with pytest.raises(ShapeMismatchError):
            reconstruction_report(truth_b, truth_c)
