import importlib
from pathlib import Path
from unittest.mock import patch

import pytest

from spam_tomography_rooms_pkg.cli import build_parser, main, sweep_config_from_args
from spam_tomography_rooms_pkg.services.experiments import FitRecord, SweepOutcome

SPAM_SWEEP = importlib.import_module("spam_tomography_rooms_pkg.actions.spam_sweep")


@pytest.fixture
def ini(tmp_path) -> Path:
    path = tmp_path / "sweep.ini"
    path.write_text("[sweep]\nmethods = C\nn_values = 1e4\nseed = 2\n[optimizer]\nn_restarts = 1\n")
    return path


class TestParser:
    def test_global_overrides(self, ini, tmp_path):
        args = build_parser().parse_args(
            ["--config", str(ini), "--seed", "5", "--out", str(tmp_path / "o.csv"), "--paper-weights", "spam-sweep"]
        )
        cfg = sweep_config_from_args(args)

        assert cfg.seed == 5
        assert cfg.paper_weights is True
        assert cfg.output == tmp_path / "o.csv"
        assert cfg.budget.n_restarts == 1

    def test_config_values_survive_without_overrides(self, ini):
        cfg = sweep_config_from_args(build_parser().parse_args(["--config", str(ini), "oracle"]))

        assert cfg.seed == 2
        assert cfg.paper_weights is False

    def test_shot_count_notation(self):
        args = build_parser().parse_args(["simulate", "--method", "b", "--shots", "1e6"])

        assert args.method == "B"
        assert args.shots == 10**6

    def test_unknown_method(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["fit", "--data", "d.csv", "--method", "D"])


class TestExitCodes:
    def test_missing_config_file(self, tmp_path):
        assert main(["--config", str(tmp_path / "absent.ini"), "oracle", "--cases", "1"]) == 1

    def test_invalid_config_value(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[sweep]\nn_values = 1e4, 1e3\n")
        assert main(["--config", str(path), "spam-sweep"]) == 1

    def test_unconverged_sweep(self, ini, tmp_path, truth_c):
        outcome = SweepOutcome(fits=[FitRecord.from_parameters(truth_c, n_shots=1, converged=False)])
        with patch.object(SPAM_SWEEP, "run_spam_sweep", return_value=outcome):
            assert main(["--config", str(ini), "--out", str(tmp_path / "r.csv"), "spam-sweep"]) == 2

    def test_converged_sweep(self, ini, tmp_path, truth_c):
        outcome = SweepOutcome(fits=[FitRecord.from_parameters(truth_c, n_shots=1)])
        with patch.object(SPAM_SWEEP, "run_spam_sweep", return_value=outcome):
            assert main(["--config", str(ini), "--out", str(tmp_path / "r.csv"), "spam-sweep"]) == 0
        assert (tmp_path / "r.csv").read_text().startswith("method,")

    def test_missing_dataset(self, tmp_path):
        assert main(["fit", "--data", str(tmp_path / "absent.csv"), "--method", "C"]) == 1

    def test_simulate_then_fit(self, ini, tmp_path):
        dataset = tmp_path / "data.csv"
        assert main(["--config", str(ini), "--out", str(dataset), "simulate", "--method", "C", "--shots", "1e5"]) == 0
        assert dataset.with_suffix(".truth.json").exists()

        fitted = tmp_path / "fit.json"
        code = main([
            "--config", str(ini), "--out", str(fitted),
            "fit", "--data", str(dataset), "--method", "C", "--truth", str(dataset.with_suffix(".truth.json")),
        ])
        assert code in (0, 2)
        assert fitted.exists()

    def test_oracle(self, tmp_path):
        checks = tmp_path / "checks.csv"
        assert main(["--out", str(checks), "oracle", "--cases", "2"]) == 0
        assert checks.read_text().count("\n") == 8
