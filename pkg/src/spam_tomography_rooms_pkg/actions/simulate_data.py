from __future__ import annotations

from pathlib import Path

from loguru import logger
from pydantic import BaseModel, Field

from ..configuration.addonconfig import CustomAddonConfig
from ..services.experiments import FitRecord, simulate_dataset
from ..storage.results import emit_json, write_dataset_csv
from ..utils.methods import Method
from .base import SUCCESS, ActionOutput, ActionResponse, error_response


class ActionInput(BaseModel):
    """
    Parameters for sampling one dataset from the seeded ground truth.
    """
    method: Method = Field(..., description="Method whose measurement layout is simulated.")
    shots: int = Field(..., ge=1, description="Shots per (state, measurement) pair.")
    run: int = Field(0, ge=0, description="Run index selecting the ground truth.")
    output: str = Field("dataset.csv", description="Dataset CSV path; the truth goes next to it as JSON.")


def truth_path_for(dataset_path: str | Path) -> Path:
    return Path(dataset_path).with_suffix(".truth.json")


def simulate_data(
    config: CustomAddonConfig,
    method: str,
    shots: int,
    run: int = 0,
    output: str = "dataset.csv",
) -> ActionResponse:
    logger.debug(f"[simulate_data] called method={method} shots={shots}")
    try:
        params = ActionInput(method=method, shots=shots, run=run, output=output)
        truth, data, seed = simulate_dataset(config.sweep, params.method, params.shots, params.run)
        dataset_path = write_dataset_csv(data, params.output)
        record = FitRecord.from_parameters(truth, n_shots=params.shots, run=params.run, seed=seed)
        truth_path = emit_json([record], truth_path_for(dataset_path), config.sweep)
    except Exception as e:
        return error_response("simulate_data", e)

    msg = f"Method {params.method} dataset ({data.layout}, N={params.shots}) written to {dataset_path}."
    logger.info(f"[simulate_data] {msg}")
    return ActionResponse(
        output=ActionOutput(data={"dataset": str(dataset_path), "truth": str(truth_path), "seed": seed}),
        message=msg,
        code=SUCCESS,
    )
