from typing import Any, Optional

from loguru import logger
from pydantic import BaseModel, ValidationError

from ..utils.errors import StorageError, TomographyError

SUCCESS = 200
PARTIAL = 206
BAD_INPUT = 400
CHECK_FAILED = 422
IO_FAILURE = 500
INTERNAL = 500


class OutputBase(BaseModel):
    """for output. Should be overwritted per action."""
    pass


class ActionOutput(OutputBase):
    data: dict[str, Any] | None = None


class ActionResponse(BaseModel):
    output: OutputBase
    message: Optional[str] = None
    code: Optional[int] = None


def error_response(action: str, error: Exception) -> ActionResponse:
    """Map a library or I/O failure onto a response code."""
    if isinstance(error, (StorageError, OSError)):
        code = IO_FAILURE
    elif isinstance(error, (TomographyError, ValidationError, ValueError)):
        code = BAD_INPUT
    else:
        code = INTERNAL
    msg = f"{error.__class__.__name__}: {error}"
    logger.error(f"[{action}] {msg}")
    return ActionResponse(output=ActionOutput(data={"error": msg}), message=msg, code=code)
