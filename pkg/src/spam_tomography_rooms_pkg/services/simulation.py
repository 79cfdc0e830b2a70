from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from loguru import logger

from ..configuration.sweepconfig import GroundTruthConfig
from ..utils.choi import ChoiState, apply_map
from ..utils.errors import InvalidParameterError, ShapeMismatchError, UnphysicalProcessError
from ..utils.methods import Method
from ..utils.qubit import EvolutionParams
from .spam_model import (
    IDEAL_MEASUREMENT_AXES,
    IDEAL_STATE_AXES,
    METHOD_SHAPES,
    MeasurementParams,
    SpamParameterSet,
    StateParams,
    ZMeasurementNoise,
    born_table,
    check_physical,
    predict_timeseries,
    realize,
)

STOCHASTIC_CAP = 0.3
STOCHASTIC_JITTER = 0.2

Layout = Literal["static", "timeseries"]


@dataclass(frozen=True, eq=False)
class CountDataset:
    """Outcome counts n[i, j] (static) or n[i, j, k] (timeseries) out of ``shots`` trials per cell."""

    layout: Layout
    counts: np.ndarray
    shots: int
    times: np.ndarray | None = None

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if self.layout not in ("static", "timeseries"):
            raise InvalidParameterError(f"unknown dataset layout {self.layout!r}")
        if self.shots < 1:
            raise InvalidParameterError(f"shots must be at least 1, got {self.shots}")
        if np.any(counts < 0) or np.any(counts > self.shots):
            raise InvalidParameterError(f"counts must lie in [0, {self.shots}]")
        if self.layout == "static":
            if counts.ndim != 2 or self.times is not None:
                raise ShapeMismatchError(f"static dataset needs a 2-d table and no times, got shape {counts.shape}")
        else:
            if counts.ndim != 3 or self.times is None:
                raise ShapeMismatchError(f"timeseries dataset needs a 3-d table and times, got shape {counts.shape}")
            times = np.array(self.times, dtype=float).reshape(-1)
            if times.size != counts.shape[2]:
                raise ShapeMismatchError(f"{times.size} times for {counts.shape[2]} time bins")
            if np.any(times < 0):
                raise InvalidParameterError("times must be non-negative")
            times.setflags(write=False)
            object.__setattr__(self, "times", times)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "shots", int(self.shots))

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.shots

    @property
    def table_shape(self) -> tuple[int, int]:
        return self.counts.shape[0], self.counts.shape[1]


def default_times(cfg: GroundTruthConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.t_max_factor * cfg.t2, cfg.n_times)


def _perpendicular_basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(n, helper)
    u /= np.linalg.norm(u)
    return u, np.cross(n, u)


def _tilt(axis: np.ndarray, angle: float, rng: np.random.Generator) -> np.ndarray:
    """Rotate a unit axis by ``angle`` about a uniformly random perpendicular axis."""
    u, w = _perpendicular_basis(axis)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    k = math.cos(phi) * u + math.sin(phi) * w
    return axis * math.cos(angle) + np.cross(k, axis) * math.sin(angle)


def _systematic_angle(cfg: GroundTruthConfig, rng: np.random.Generator) -> float:
    mean = math.radians(cfg.systematic_angle_deg)
    return mean + 0.2 * mean * rng.standard_normal()


def _stochastic(cfg: GroundTruthConfig, rng: np.random.Generator) -> float:
    """Shrinkage or flip probability s(1 + 0.2g), g ~ N(0, 1), redrawn until it lies in [s/2, 0.3]."""
    scale = cfg.stochastic_scale
    if scale == 0.0:
        return 0.0
    low, high = 0.5 * scale, max(STOCHASTIC_CAP, 0.5 * scale)
    while True:
        value = scale * (1.0 + STOCHASTIC_JITTER * rng.standard_normal())
        if low <= value <= high:
            return value


def make_ground_truth(cfg: GroundTruthConfig, method: Method | str) -> SpamParameterSet:
    """Assumption-violating truth: tilted axes, shrunk Bloch vectors, readout flips.

    The random stream is the same for every method, so the Method A/B truth
    (4 states, 3 measurements, tagged B with evolution parameters) is the prefix
    of the Method C truth for one seed.
    """
    method = Method(method)
    rng = np.random.default_rng(cfg.seed)

    angle = _systematic_angle(cfg, rng)
    sign = 1.0 if rng.uniform() < 0.5 else -1.0
    r2 = (1.0 - _stochastic(cfg, rng)) * np.array([math.cos(sign * angle), 0.0, math.sin(sign * angle)])
    r = [np.array([0.0, 0.0, 1.0]), r2]
    for axis in IDEAL_STATE_AXES[2:]:
        direction = _tilt(np.array(axis), _systematic_angle(cfg, rng), rng)
        r.append((1.0 - _stochastic(cfg, rng)) * direction)

    eps0 = _stochastic(cfg, rng)
    eps1 = _stochastic(cfg, rng)

    big_r = [np.array([0.0, 0.0, 1.0])]
    for axis in IDEAL_MEASUREMENT_AXES[1:]:
        direction = _tilt(np.array(axis), _systematic_angle(cfg, rng), rng)
        big_r.append((1.0 - _stochastic(cfg, rng)) * direction)

    if method is Method.C:
        n_states, n_meas = METHOD_SHAPES[Method.C]
        tag, evolution = Method.C, None
    else:
        n_states, n_meas = METHOD_SHAPES[Method.B]
        tag, evolution = Method.B, EvolutionParams(omega_rot=cfg.omega_rot, t2=cfg.t2)

    truth = SpamParameterSet(
        method=tag,
        states=(StateParams.fixed_plus_z(), StateParams.planar_x(r2[0], r2[2]))
        + tuple(StateParams.general(*row) for row in r[2:n_states]),
        measurements=(MeasurementParams.fixed_plus_z(),)
        + tuple(MeasurementParams.general(*row) for row in big_r[1:n_meas]),
        noise=ZMeasurementNoise(eps0, eps1),
        evolution=evolution,
    )
    check_physical(truth)
    logger.debug(f"[make_ground_truth] seed={cfg.seed} method={method} eps=({eps0:.4f}, {eps1:.4f})")
    return truth


def _binomial(shots: int, p: np.ndarray, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.binomial(shots, np.clip(p, 0.0, 1.0))


def sample_static(truth: SpamParameterSet, shots: int, seed: int) -> CountDataset:
    if shots < 1:
        raise InvalidParameterError(f"shots must be at least 1, got {shots}")
    check_physical(truth)
    return CountDataset("static", _binomial(shots, born_table(truth), seed), shots)


def sample_timeseries(truth: SpamParameterSet, times, shots: int, seed: int) -> CountDataset:
    if truth.evolution is None:
        raise InvalidParameterError("timeseries sampling needs evolution parameters on the truth")
    if shots < 1:
        raise InvalidParameterError(f"shots must be at least 1, got {shots}")
    check_physical(truth)
    t = np.asarray(times, dtype=float)
    return CountDataset("timeseries", _binomial(shots, predict_timeseries(truth, t), seed), shots, times=t)


def expected_static(truth: SpamParameterSet, shots: int) -> CountDataset:
    """Noiseless surrogate n = round(N p)."""
    return CountDataset("static", np.rint(shots * np.clip(born_table(truth), 0.0, 1.0)), shots)


def expected_timeseries(truth: SpamParameterSet, times, shots: int) -> CountDataset:
    t = np.asarray(times, dtype=float)
    p = np.clip(predict_timeseries(truth, t), 0.0, 1.0)
    return CountDataset("timeseries", np.rint(shots * p), shots, times=t)


def process_probabilities(truth_spam: SpamParameterSet, process: ChoiState) -> np.ndarray:
    """p[i, j] = Tr(E_j E(ρ_i)) for the SPAM set's states and effects."""
    states, effects = realize(truth_spam)
    out = np.zeros((len(states), len(effects)))
    for i, rho in enumerate(states):
        image = apply_map(process.m, rho.m)
        for j, e in enumerate(effects):
            out[i, j] = np.trace(e.m @ image).real
    return out


def sample_process(truth_spam: SpamParameterSet, process: ChoiState, shots: int, seed: int) -> CountDataset:
    if not process.is_physical:
        raise UnphysicalProcessError(
            f"cannot sample an unphysical process (min eigenvalue {process.eigenvalues[0]:.3e}, "
            f"partial-trace residual {process.tp_residual:.3e})"
        )
    if shots < 1:
        raise InvalidParameterError(f"shots must be at least 1, got {shots}")
    return CountDataset("static", _binomial(shots, process_probabilities(truth_spam, process), seed), shots)
