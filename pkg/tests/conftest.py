import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from spam_tomography_rooms_pkg.configuration import GroundTruthConfig, SweepConfig  # noqa: E402
from spam_tomography_rooms_pkg.services.simulation import make_ground_truth  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ground_truth_config():
    return GroundTruthConfig(seed=7)


@pytest.fixture
def truth_c(ground_truth_config):
    return make_ground_truth(ground_truth_config, "C")


@pytest.fixture
def truth_b(ground_truth_config):
    return make_ground_truth(ground_truth_config, "B")


@pytest.fixture
def small_sweep_settings():
    return {
        "methods": "C",
        "n_values": "1e4",
        "n_spam_values": "1e6",
        "runs_per_point": 1,
        "seed": 11,
        "budget": {"n_restarts": 1},
    }


@pytest.fixture
def small_sweep(small_sweep_settings, tmp_path):
    return SweepConfig(**small_sweep_settings, output=tmp_path / "results.csv")


@pytest.fixture
def addon_config(small_sweep_settings):
    return {
        "id": "tomography-test",
        "type": "tomography",
        "name": "test tomography addon",
        "description": "SPAM tomography addon under test",
        "sweep": small_sweep_settings,
    }
