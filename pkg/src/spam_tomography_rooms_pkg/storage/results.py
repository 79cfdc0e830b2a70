"""CSV and JSON result files.

Sweep table: ``method,n_spam,n_shots,run,seed,metric,value`` with values at 17
significant digits. Fit file: JSON with the pack version, the config echo,
one record per fit and, for process sweeps, the linear and projected Choi
states of every point. Dataset table: ``layout,state,measurement,time,shots,count``
with 1-based state/measurement indices and an empty time for static data.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from ..services.experiments import ChoiRecord, FitRecord, ResultRow
from ..services.oracle import OracleCheck
from ..services.simulation import CountDataset
from ..services.spam_model import PACK_VERSION
from ..utils.choi import ChoiState
from ..utils.errors import StorageError

RESULT_COLUMNS = ("method", "n_spam", "n_shots", "run", "seed", "metric", "value")
DATASET_COLUMNS = ("layout", "state", "measurement", "time", "shots", "count")
CHECK_COLUMNS = ("check", "cases", "max_error", "tolerance", "passed")


class FitFile(BaseModel):
    pack_version: str = PACK_VERSION
    config: dict[str, Any] = Field(default_factory=dict)
    fits: list[FitRecord] = Field(default_factory=list)
    chois: list[ChoiRecord] = Field(default_factory=list)


def _number(value: float) -> str:
    return f"{value:.17g}"


def _prepare(path: str | Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise StorageError(f"cannot create directory for {path}: {e}") from e
    return path


def _write_rows(path: str | Path, header: Iterable[str], rows: Iterable[Iterable[Any]]) -> Path:
    path = _prepare(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    return path


def emit_csv(rows: Iterable[ResultRow], path: str | Path) -> Path:
    ordered = sorted(rows, key=ResultRow.sort_key)
    written = _write_rows(
        path,
        RESULT_COLUMNS,
        (
            [r.method.value, "" if r.n_spam is None else r.n_spam, r.n_shots, r.run, r.seed, r.metric, _number(r.value)]
            for r in ordered
        ),
    )
    logger.debug(f"[emit_csv] {len(ordered)} rows -> {written}")
    return written


def read_csv(path: str | Path) -> list[ResultRow]:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            records = list(csv.DictReader(handle))
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}") from e
    return [
        ResultRow(
            method=rec["method"],
            n_spam=int(rec["n_spam"]) if rec["n_spam"] else None,
            n_shots=int(rec["n_shots"]),
            run=int(rec["run"]),
            seed=int(rec["seed"]),
            metric=rec["metric"],
            value=float(rec["value"]),
        )
        for rec in records
    ]


def emit_json(
    records: Iterable[FitRecord],
    path: str | Path,
    config: BaseModel | dict | None = None,
    chois: Iterable[ChoiRecord] = (),
) -> Path:
    if isinstance(config, BaseModel):
        config = config.model_dump(mode="json")
    document = FitFile(config=config or {}, fits=list(records), chois=list(chois))
    path = _prepare(path)
    try:
        path.write_text(document.model_dump_json(indent=2), encoding="utf-8")
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    logger.debug(f"[emit_json] {len(document.fits)} fit(s), {len(document.chois)} Choi state(s) -> {path}")
    return path


def load_json(path: str | Path) -> FitFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}") from e
    try:
        document = FitFile.model_validate(json.loads(text))
    except (ValueError, ValidationError) as e:
        raise StorageError(f"malformed fit file {path}: {e}") from e
    if document.pack_version != PACK_VERSION:
        raise StorageError(f"{path} uses pack version {document.pack_version}, expected {PACK_VERSION}")
    return document


def write_dataset_csv(data: CountDataset, path: str | Path) -> Path:
    rows = []
    n_states, n_meas = data.table_shape
    for i in range(n_states):
        for j in range(n_meas):
            if data.layout == "static":
                rows.append([data.layout, i + 1, j + 1, "", data.shots, int(data.counts[i, j])])
            else:
                for k, t in enumerate(data.times):
                    rows.append([data.layout, i + 1, j + 1, _number(float(t)), data.shots, int(data.counts[i, j, k])])
    return _write_rows(path, DATASET_COLUMNS, rows)


def read_dataset_csv(path: str | Path) -> CountDataset:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            records = list(csv.DictReader(handle))
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}") from e
    if not records:
        raise StorageError(f"dataset {path} has no rows")
    try:
        layouts = {rec["layout"] for rec in records}
        shots = {int(rec["shots"]) for rec in records}
        if len(layouts) != 1 or len(shots) != 1:
            raise StorageError(f"dataset {path} mixes layouts or shot counts")
        layout = layouts.pop()
        n_states = max(int(rec["state"]) for rec in records)
        n_meas = max(int(rec["measurement"]) for rec in records)
        if layout == "static":
            counts = np.full((n_states, n_meas), -1, dtype=np.int64)
            for rec in records:
                counts[int(rec["state"]) - 1, int(rec["measurement"]) - 1] = int(rec["count"])
            times = None
        else:
            times = np.array(sorted({float(rec["time"]) for rec in records}))
            index = {t: k for k, t in enumerate(times)}
            counts = np.full((n_states, n_meas, times.size), -1, dtype=np.int64)
            for rec in records:
                counts[int(rec["state"]) - 1, int(rec["measurement"]) - 1, index[float(rec["time"])]] = int(rec["count"])
    except StorageError:
        raise
    except (KeyError, ValueError) as e:
        raise StorageError(f"malformed dataset {path}: {e}") from e
    if np.any(counts < 0):
        raise StorageError(f"dataset {path} is not a complete table")
    return CountDataset(layout, counts, shots.pop(), times=times)


def emit_checks_csv(checks: Iterable[OracleCheck], path: str | Path) -> Path:
    return _write_rows(
        path,
        CHECK_COLUMNS,
        ([c.check, c.cases, _number(c.max_error), _number(c.tolerance), str(c.passed).lower()] for c in checks),
    )


def choi_from_entries(entries: Iterable[Iterable[float]]) -> ChoiState:
    values = np.array([complex(re, im) for re, im in entries])
    if values.size != 16:
        raise StorageError(f"a Choi state needs 16 entries, got {values.size}")
    return ChoiState(values.reshape(4, 4))
