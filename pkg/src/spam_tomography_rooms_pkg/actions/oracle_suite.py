from __future__ import annotations

from loguru import logger
from pydantic import BaseModel, Field

from ..configuration.addonconfig import CustomAddonConfig
from ..services.oracle import run_oracle_suite
from ..storage.results import emit_checks_csv
from .base import CHECK_FAILED, SUCCESS, ActionOutput, ActionResponse, error_response


class ActionInput(BaseModel):
    cases: int = Field(100, ge=1, description="Random cases per check.")
    output: str | None = Field(None, description="Optional checks CSV path.")


def oracle_suite(config: CustomAddonConfig, cases: int = 100, output: str | None = None) -> ActionResponse:
    logger.debug(f"[oracle_suite] called cases={cases}")
    try:
        params = ActionInput(cases=cases, output=output)
        checks = run_oracle_suite(seed=config.sweep.seed, cases=params.cases)
        if params.output:
            emit_checks_csv(checks, params.output)
    except Exception as e:
        return error_response("oracle_suite", e)

    failed = [c.check for c in checks if not c.passed]
    msg = f"{len(checks) - len(failed)}/{len(checks)} checks passed" + (f"; failed: {', '.join(failed)}" if failed else ".")
    if failed:
        logger.warning(f"[oracle_suite] {msg}")
    else:
        logger.info(f"[oracle_suite] {msg}")
    return ActionResponse(
        output=ActionOutput(data={
            "checks": [c.model_dump() | {"passed": c.passed} for c in checks],
            "failed": failed,
        }),
        message=msg,
        code=CHECK_FAILED if failed else SUCCESS,
    )
