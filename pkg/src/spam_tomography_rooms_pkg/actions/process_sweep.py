from __future__ import annotations

from pathlib import Path

from loguru import logger
from pydantic import BaseModel, Field

from ..configuration.addonconfig import CustomAddonConfig
from ..services.experiments import run_process_sweep
from ..storage.results import emit_csv, emit_json
from .base import PARTIAL, SUCCESS, ActionOutput, ActionResponse, error_response


class ActionInput(BaseModel):
    output: str | None = Field(None, description="CSV path; defaults to the configured output.")


def _unconverged_processes(rows) -> int:
    return sum(1 for row in rows if row.metric == "process_converged" and row.value < 0.5)


def process_sweep(config: CustomAddonConfig, output: str | None = None) -> ActionResponse:
    """
    Action: calibrate SPAM at each N_spam, reconstruct the noisy Hadamard at each N
    and write the fidelity table.
    """
    logger.debug("[process_sweep] called")
    try:
        params = ActionInput(output=output)
        cfg = config.sweep
        csv_path = Path(params.output) if params.output else cfg.output
        outcome = run_process_sweep(cfg)
        emit_csv(outcome.rows, csv_path)
        json_path = emit_json(outcome.fits, csv_path.with_suffix(".json"), cfg, chois=outcome.chois)
    except Exception as e:
        return error_response("process_sweep", e)

    unconverged = outcome.n_unconverged + _unconverged_processes(outcome.rows)
    msg = f"{len(outcome.rows)} row(s) written to {csv_path}, {unconverged} unconverged fit(s)."
    logger.info(f"[process_sweep] {msg}")
    return ActionResponse(
        output=ActionOutput(data={
            "rows": len(outcome.rows),
            "unconverged": unconverged,
            "csv": str(csv_path),
            "json": str(json_path),
        }),
        message=msg,
        code=PARTIAL if unconverged else SUCCESS,
    )
