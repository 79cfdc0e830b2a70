from __future__ import annotations

import configparser
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.errors import StorageError
from ..utils.methods import Method

InitStrategy = Literal["near_truth", "near_ideal", "ignorant"]

DEFAULT_INIT_STRATEGIES: dict[Method, InitStrategy] = {
    Method.A: "near_truth",
    Method.B: "ignorant",
    Method.C: "near_ideal",
}
DEFAULT_RESTARTS = {Method.A: 8, Method.B: 4, Method.C: 8}


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _as_shot_count(value: Any) -> int:
    number = float(value)
    if not number.is_integer():
        raise ValueError(f"shot count {value!r} is not an integer")
    return int(number)


class GroundTruthConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    systematic_angle_deg: float = Field(10.0, ge=0.0, description="Mean tilt of preparation/measurement axes (degrees)")
    stochastic_scale: float = Field(0.05, ge=0.0, lt=0.5, description="Scale of Bloch-norm shrinkage and readout flips")
    omega_rot: float = Field(1.0, ge=0.0, description="Free-evolution rotation rate Ω")
    t2: float = Field(10.0, gt=0.0, description="Free-evolution dephasing time T₂")
    gate_t2: float = Field(100.0, gt=0.0, description="Dephasing time of the noisy Hadamard gate")
    seed: int = Field(0, ge=0, description="Seed of the ground-truth draw")
    n_times: int = Field(50, ge=2, description="Number of time bins M for Method B")
    t_max_factor: float = Field(2.0, gt=0.0, description="Time grid spans [0, t_max_factor·T₂]")


class OptimizerBudget(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    max_evaluations: int = Field(20000, gt=0, description="Function evaluation cap per restart")
    n_restarts: Optional[int] = Field(None, gt=0, description="Restarts per fit; None picks 8 for A/C and 4 for B")
    tolerance: float = Field(1e-12, gt=0.0, description="Objective decrease threshold")

    def restarts_for(self, method: Method | str) -> int:
        return self.n_restarts if self.n_restarts is not None else DEFAULT_RESTARTS[Method(method)]


class ProcessConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    outer_iterations: int = Field(5, gt=0, description="Augmented-Lagrangian multiplier updates")
    mu0: float = Field(1e3, gt=0.0, description="Initial penalty weight")
    eta: float = Field(10.0, ge=1.0, description="Penalty growth factor per outer iteration")
    inner_max_iterations: int = Field(2000, gt=0, description="Iteration cap of the inner minimizer")


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    methods: list[Method] = Field(default_factory=lambda: [Method.A, Method.B, Method.C], description="Methods to run")
    n_values: list[int] = Field(
        default_factory=lambda: [10**3, 10**4, 10**5, 10**6, 10**7], description="Shot counts N per cell"
    )
    n_spam_values: list[int] = Field(
        default_factory=lambda: [10**6, 10**9], description="SPAM calibration shot counts for the process sweep"
    )
    runs_per_point: int = Field(10, ge=1, description="Independent runs per sweep point")
    ground_truth: GroundTruthConfig = Field(default_factory=GroundTruthConfig)
    budget: OptimizerBudget = Field(default_factory=OptimizerBudget)
    process: ProcessConfig = Field(default_factory=ProcessConfig)
    output: Path = Field(Path("results.csv"), description="CSV output path")
    seed: int = Field(0, ge=0, description="Master seed")
    paper_weights: bool = Field(False, description="Use 1/σ weights instead of 1/σ²")
    workers: int = Field(1, ge=1, description="Worker processes")
    gauge_align: bool = Field(True, description="Align estimates to the truth's gauge before scoring")
    init_strategy: dict[Method, InitStrategy] = Field(
        default_factory=lambda: dict(DEFAULT_INIT_STRATEGIES), description="Initialization strategy per method"
    )
    near_truth_delta: float = Field(0.02, ge=0.0, description="Relative perturbation of the near_truth strategy")

    @field_validator("methods", mode="before")
    @classmethod
    def parse_methods(cls, value):
        return [str(m).upper() for m in _split(value)]

    @field_validator("n_values", "n_spam_values", mode="before")
    @classmethod
    def parse_shot_counts(cls, value):
        return [_as_shot_count(v) for v in _split(value)]

    @field_validator("init_strategy", mode="before")
    @classmethod
    def parse_init_strategy(cls, value):
        if isinstance(value, str):
            pairs = (item.split(":", 1) for item in _split(value))
            value = {k.strip().upper(): v.strip() for k, v in pairs}
        return {**{m.value: s for m, s in DEFAULT_INIT_STRATEGIES.items()}, **{str(k).upper(): v for k, v in value.items()}}

    @model_validator(mode="after")
    def validate_grids(self):
        if not self.methods:
            raise ValueError("at least one method is required")
        for name in ("n_values", "n_spam_values"):
            grid = getattr(self, name)
            if any(n < 1 for n in grid):
                raise ValueError(f"{name} must be positive, got {grid}")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be strictly increasing, got {grid}")
        if not self.n_values:
            raise ValueError("n_values must not be empty")
        return self

    def strategy_for(self, method: Method | str) -> InitStrategy:
        return self.init_strategy[Method(method)]


_SECTIONS = {"sweep": None, "ground_truth": "ground_truth", "optimizer": "budget", "process": "process"}


def load_sweep_config(path: str | Path) -> SweepConfig:
    """Read an INI sweep configuration.

    ``[sweep]`` keys map onto SweepConfig fields; ``[ground_truth]``,
    ``[optimizer]`` and ``[process]`` map onto the nested models. List values
    are comma separated.
    """
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with path.open(encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as e:
        raise StorageError(f"cannot read config {path}: {e}") from e

    unknown = set(parser.sections()) - set(_SECTIONS)
    if unknown:
        raise ValueError(f"unknown config sections in {path}: {sorted(unknown)}")

    data: dict[str, Any] = {}
    for section, field_name in _SECTIONS.items():
        if not parser.has_section(section):
            continue
        values = dict(parser.items(section))
        if field_name is None:
            data.update(values)
        else:
            data[field_name] = values
    return SweepConfig.model_validate(data)
