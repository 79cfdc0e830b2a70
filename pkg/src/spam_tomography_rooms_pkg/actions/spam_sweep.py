from __future__ import annotations

from pathlib import Path

from loguru import logger
from pydantic import BaseModel, Field

from ..configuration.addonconfig import CustomAddonConfig
from ..services.experiments import run_spam_sweep
from ..storage.results import emit_csv, emit_json
from .base import PARTIAL, SUCCESS, ActionOutput, ActionResponse, error_response


class ActionInput(BaseModel):
    """
    Parameters of a SPAM convergence sweep. Everything else comes from the sweep config.
    """
    output: str | None = Field(None, description="CSV path; defaults to the configured output.")


def spam_sweep(config: CustomAddonConfig, output: str | None = None) -> ActionResponse:
    """
    Action: fit every (method, N, run) point and write the metric table and fit file.
    """
    logger.debug("[spam_sweep] called")
    try:
        params = ActionInput(output=output)
        cfg = config.sweep
        csv_path = Path(params.output) if params.output else cfg.output
        outcome = run_spam_sweep(cfg)
        emit_csv(outcome.rows, csv_path)
        json_path = emit_json(outcome.fits, csv_path.with_suffix(".json"), cfg)
    except Exception as e:
        return error_response("spam_sweep", e)

    code = PARTIAL if outcome.n_unconverged else SUCCESS
    msg = f"{len(outcome.rows)} row(s) written to {csv_path}, {outcome.n_unconverged} unconverged fit(s)."
    logger.info(f"[spam_sweep] {msg}")
    return ActionResponse(
        output=ActionOutput(data={
            "rows": len(outcome.rows),
            "fits": len(outcome.fits),
            "unconverged": outcome.n_unconverged,
            "csv": str(csv_path),
            "json": str(json_path),
        }),
        message=msg,
        code=code,
    )
