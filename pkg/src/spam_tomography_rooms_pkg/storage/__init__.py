from ..utils.choi import choi_to_entries
from .results import (
    FitFile,
    choi_from_entries,
    emit_checks_csv,
    emit_csv,
    emit_json,
    load_json,
    read_csv,
    read_dataset_csv,
    write_dataset_csv,
)

__all__ = [
    "FitFile",
    "choi_from_entries",
    "choi_to_entries",
    "emit_checks_csv",
    "emit_csv",
    "emit_json",
    "load_json",
    "read_csv",
    "read_dataset_csv",
    "write_dataset_csv",
]
