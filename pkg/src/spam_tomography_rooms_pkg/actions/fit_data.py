from __future__ import annotations

from pathlib import Path

from loguru import logger
from pydantic import BaseModel, Field

from ..configuration.addonconfig import CustomAddonConfig
from ..services.estimators import reconstruction_report
from ..services.experiments import FitRecord, fit_dataset
from ..storage.results import emit_json, load_json, read_dataset_csv
from ..utils.methods import Method
from .base import PARTIAL, SUCCESS, ActionOutput, ActionResponse, error_response


class ActionInput(BaseModel):
    """
    Parameters for fitting one dataset file.
    """
    method: Method = Field(..., description="Model to fit.")
    data: str = Field(..., description="Dataset CSV path.")
    truth: str | None = Field(None, description="Optional truth JSON; enables near_truth starts and scoring.")
    output: str | None = Field(None, description="Fit JSON path; defaults to <data>.fit.json.")


def fit_data(
    config: CustomAddonConfig,
    method: str,
    data: str,
    truth: str | None = None,
    output: str | None = None,
) -> ActionResponse:
    """
    Action: fit a stored dataset and write the estimate.
    """
    logger.debug(f"[fit_data] called method={method} data={data}")
    try:
        params = ActionInput(method=method, data=data, truth=truth, output=output)
        dataset = read_dataset_csv(params.data)
        true_params = None
        if params.truth:
            true_params = load_json(params.truth).fits[0].to_parameter_set()
        result = fit_dataset(config.sweep, params.method, dataset, truth=true_params)
        fit_path = Path(params.output) if params.output else Path(params.data).with_suffix(".fit.json")
        record = FitRecord.from_fit(result, n_shots=dataset.shots)
        emit_json([record], fit_path, config.sweep)
        report = reconstruction_report(result.estimate, true_params) if true_params else None
    except Exception as e:
        return error_response("fit_data", e)

    payload = {
        "fit": str(fit_path),
        "objective": result.objective_value,
        "converged": result.converged,
        "n_evaluations": result.n_evaluations,
        "parameters": dict(zip(record.parameter_names, record.vector)),
    }
    if report is not None:
        payload["report"] = report.model_dump(mode="json") | {"state_infidelity": report.state_infidelity}
    msg = f"Method {params.method} fit {'converged' if result.converged else 'did not converge'}, written to {fit_path}."
    logger.info(f"[fit_data] {msg}")
    return ActionResponse(output=ActionOutput(data=payload), message=msg, code=SUCCESS if result.converged else PARTIAL)
