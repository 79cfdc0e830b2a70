from pathlib import Path

import pytest
from pydantic import ValidationError

from spam_tomography_rooms_pkg.configuration import (
    GroundTruthConfig,
    OptimizerBudget,
    SweepConfig,
    load_sweep_config,
)
from spam_tomography_rooms_pkg.configuration.addonconfig import CustomAddonConfig
from spam_tomography_rooms_pkg.configuration.baseconfig import BaseAddonConfig
from spam_tomography_rooms_pkg.utils.errors import StorageError
from spam_tomography_rooms_pkg.utils.methods import Method


class TestBaseAddonConfig:
    def test_base_config_creation(self):
        config = BaseAddonConfig(
            id="test_addon_id",
            type="test_type",
            name="test_addon",
            description="Test addon description",
        )

        assert config.id == "test_addon_id"
        assert config.type == "test_type"
        assert config.enabled is True
        assert config.config == {}


class TestCustomAddonConfig:
    def test_custom_config_creation_success(self, addon_config):
        config = CustomAddonConfig(**addon_config)

        assert config.type == "tomography"
        assert config.sweep.methods == [Method.C]
        assert config.sweep.n_values == [10_000]
        assert config.sweep.budget.n_restarts == 1

    def test_custom_config_with_defaults(self):
        config = CustomAddonConfig(id="t", type="tomography", name="t", description="")

        assert config.sweep.methods == [Method.A, Method.B, Method.C]
        assert config.sweep.n_values == [10**3, 10**4, 10**5, 10**6, 10**7]
        assert config.sweep.runs_per_point == 10
        assert config.sweep.ground_truth.t2 == 10.0

    def test_custom_config_wrong_type(self):
        with pytest.raises(ValidationError, match="Unsupported addon type"):
            CustomAddonConfig(id="t", type="cloud_storage", name="t", description="")


class TestSweepConfig:
    def test_list_and_shot_count_parsing(self):
        config = SweepConfig(methods="a, c", n_values="1e3,1e4, 100000", n_spam_values="1e9")

        assert config.methods == [Method.A, Method.C]
        assert config.n_values == [1000, 10000, 100000]
        assert config.n_spam_values == [10**9]

    def test_init_strategy_overrides(self):
        config = SweepConfig(init_strategy="A:near_ideal")

        assert config.strategy_for("A") == "near_ideal"
        assert config.strategy_for(Method.B) == "ignorant"
        assert config.strategy_for("C") == "near_ideal"

    @pytest.mark.parametrize(
        "settings",
        [
            {"n_values": "1e4,1e3"},
            {"n_values": "0"},
            {"n_values": "1.5e0"},
            {"methods": "D"},
            {"methods": ""},
            {"init_strategy": "B:guess"},
            {"unknown_key": 1},
        ],
    )
    def test_rejects_invalid_settings(self, settings):
        with pytest.raises(ValidationError):
            SweepConfig(**settings)

    def test_ground_truth_bounds(self):
        with pytest.raises(ValidationError):
            GroundTruthConfig(stochastic_scale=0.5)
        with pytest.raises(ValidationError):
            GroundTruthConfig(t2=0.0)

    def test_restarts_for(self):
        assert OptimizerBudget().restarts_for("A") == 8
        assert OptimizerBudget().restarts_for("B") == 4
        assert OptimizerBudget(n_restarts=3).restarts_for(Method.C) == 3


class TestLoadSweepConfig:
    def write(self, tmp_path: Path, text: str) -> Path:
        path = tmp_path / "sweep.ini"
        path.write_text(text)
        return path

    def test_reads_all_sections(self, tmp_path):
        path = self.write(
            tmp_path,
            "[sweep]\nmethods = B, C\nn_values = 1e3, 1e5\nruns_per_point = 2\nseed = 4\npaper_weights = yes\n"
            "[ground_truth]\nt2 = 12.5\nn_times = 20\n"
            "[optimizer]\nn_restarts = 2\n"
            "[process]\nouter_iterations = 3\n",
        )
        config = load_sweep_config(path)

        assert config.methods == [Method.B, Method.C]
        assert config.n_values == [1000, 100000]
        assert config.runs_per_point == 2
        assert config.paper_weights is True
        assert config.ground_truth.t2 == 12.5
        assert config.ground_truth.n_times == 20
        assert config.budget.n_restarts == 2
        assert config.process.outer_iterations == 3

    def test_unknown_section(self, tmp_path):
        with pytest.raises(ValueError, match="unknown config sections"):
            load_sweep_config(self.write(tmp_path, "[plots]\nstyle = dark\n"))

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ValidationError):
            load_sweep_config(self.write(tmp_path, "[optimizer]\npatience = 3\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(StorageError):
            load_sweep_config(tmp_path / "absent.ini")

    @pytest.mark.parametrize("name", ["sweep.ini", "quick.ini"])
    def test_shipped_configs_load(self, name):
        config = load_sweep_config(Path(__file__).parent.parent / "configs" / name)

        assert config.methods
        assert config.process.outer_iterations == 5
