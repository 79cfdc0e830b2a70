"""Seeded sweeps over shot counts, reproducing the convergence and saturation studies.

Every sweep point is an independent job whose random streams derive from the
master seed and the point key, so results do not depend on worker count or
completion order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Iterable, Literal, Optional, TypeVar

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..configuration.sweepconfig import GroundTruthConfig, SweepConfig
from ..utils.choi import ChoiState, choi_to_entries
from ..utils.methods import Method
from ..utils.qubit import EvolutionParams
from ..utils.seeding import derive_seed
from .estimators import FitResult, ReconstructionReport, align_gauge, fit, reconstruction_report
from .process_tomography import hadamard_truth, ideal_hadamard, linear_invert, mle_project, process_fidelity
from .simulation import CountDataset, default_times, make_ground_truth, sample_process, sample_static, sample_timeseries
from .spam_model import PACK_VERSION, SpamParameterSet, pack, parameter_names, realize, unpack

J = TypeVar("J")


class ResultRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: Method
    n_spam: Optional[int] = None
    n_shots: int
    run: int
    seed: int
    metric: str
    value: float

    def sort_key(self) -> tuple:
        return (self.method.value, self.n_spam or 0, self.n_shots, self.run, self.metric)


class FitRecord(BaseModel):
    """Serializable fit: packed vector plus the key of the sweep point it came from."""

    method: Method
    n_shots: int
    n_spam: Optional[int] = None
    run: int = 0
    seed: int = 0
    pack_version: str = PACK_VERSION
    parameter_names: list[str] = Field(default_factory=list)
    vector: list[float]
    objective_value: Optional[float] = None
    converged: bool = True
    n_evaluations: int = 0
    initial_point_id: int = 0

    @classmethod
    def from_parameters(cls, params: SpamParameterSet, **kwargs) -> "FitRecord":
        return cls(
            method=params.method,
            parameter_names=parameter_names(params.method),
            vector=[float(v) for v in pack(params)],
            **kwargs,
        )

    @classmethod
    def from_fit(cls, result: FitResult, **kwargs) -> "FitRecord":
        return cls.from_parameters(
            result.estimate,
            objective_value=result.objective_value,
            converged=result.converged,
            n_evaluations=result.n_evaluations,
            initial_point_id=result.initial_point_id,
            **kwargs,
        )

    def to_parameter_set(self) -> SpamParameterSet:
        return unpack(self.method, self.vector)


class ChoiRecord(BaseModel):
    """Reconstructed gate of one process sweep point as sixteen row-major ``[re, im]`` pairs."""

    method: Method
    n_spam: int
    n_shots: int
    run: int
    seed: int
    kind: Literal["linear", "projected"]
    entries: list[list[float]]
    converged: bool = True

    @classmethod
    def from_choi(cls, choi: ChoiState, **kwargs) -> "ChoiRecord":
        return cls(entries=choi_to_entries(choi), **kwargs)


@dataclass
class SweepOutcome:
    rows: list[ResultRow] = field(default_factory=list)
    fits: list[FitRecord] = field(default_factory=list)
    chois: list[ChoiRecord] = field(default_factory=list)

    @property
    def n_unconverged(self) -> int:
        return sum(1 for record in self.fits if not record.converged)


@dataclass(frozen=True)
class SpamJob:
    method: Method
    n_shots: int
    run: int
    config: SweepConfig


@dataclass(frozen=True)
class ProcessJob:
    method: Method
    n_spam: int
    run: int
    config: SweepConfig


def ground_truth_for(cfg: SweepConfig, method: Method | str, run: int) -> tuple[SpamParameterSet, GroundTruthConfig]:
    """Truth of one run. Shared by every method and shot count of that run."""
    gt = cfg.ground_truth.model_copy(update={"seed": derive_seed(cfg.seed, cfg.ground_truth.seed, "truth", run)})
    return make_ground_truth(gt, method), gt


def simulate_spam_data(
    truth: SpamParameterSet,
    method: Method | str,
    shots: int,
    gt: GroundTruthConfig,
    seed: int,
) -> CountDataset:
    """Method B spreads the per-pair shot budget evenly over the time bins."""
    if Method(method) is Method.B:
        times = default_times(gt)
        return sample_timeseries(truth, times, max(1, shots // len(times)), seed)
    return sample_static(truth, shots, seed)


def fit_spam(
    cfg: SweepConfig,
    method: Method | str,
    data: CountDataset,
    seed: int,
    truth: SpamParameterSet | None = None,
) -> FitResult:
    method = Method(method)
    strategy = cfg.strategy_for(method)
    if strategy == "near_truth" and truth is None:
        logger.warning(f"[fit_spam] Method {method}: near_truth needs a truth, using near_ideal")
        strategy = "near_ideal"
    return fit(
        method,
        data,
        cfg.budget,
        strategy,
        truth=truth,
        seed=seed,
        paper_weights=cfg.paper_weights,
        near_truth_delta=cfg.near_truth_delta,
    )


def spam_metrics(report: ReconstructionReport, result: FitResult) -> list[tuple[str, float]]:
    metrics = [("state_infidelity", report.state_infidelity)]
    metrics += [(f"infidelity_rho{i}", v) for i, v in enumerate(report.state_infidelities, start=1)]
    metrics += [(f"alpha_E{j}", v) for j, v in enumerate(report.alpha_deg, start=1)]
    metrics += [("eps0_error", report.eps0_error), ("eps1_error", report.eps1_error)]
    if report.omega_rel_error is not None:
        metrics += [("omega_rel_error", report.omega_rel_error), ("t2_rel_error", report.t2_rel_error)]
    metrics += [
        ("objective", result.objective_value),
        ("converged", 1.0 if result.converged else 0.0),
        ("n_evaluations", float(result.n_evaluations)),
    ]
    return metrics


def run_spam_point(job: SpamJob) -> tuple[list[ResultRow], FitRecord, list[ChoiRecord]]:
    cfg = job.config
    truth, gt = ground_truth_for(cfg, job.method, job.run)
    seed = derive_seed(cfg.seed, job.method.value, job.n_shots, job.run)
    data = simulate_spam_data(truth, job.method, job.n_shots, gt, seed)
    result = fit_spam(cfg, job.method, data, derive_seed(seed, "fit"), truth=truth)
    report = reconstruction_report(result.estimate, truth, align=cfg.gauge_align)
    rows = [
        ResultRow(method=job.method, n_shots=job.n_shots, run=job.run, seed=seed, metric=name, value=value)
        for name, value in spam_metrics(report, result)
    ]
    logger.debug(
        f"[run_spam_sweep] Method {job.method} N={job.n_shots} run={job.run}: "
        f"infidelity={report.state_infidelity:.3e} converged={result.converged}"
    )
    return rows, FitRecord.from_fit(result, n_shots=job.n_shots, run=job.run, seed=seed), []


def run_process_point(job: ProcessJob) -> tuple[list[ResultRow], FitRecord, list[ChoiRecord]]:
    cfg = job.config
    truth, gt = ground_truth_for(cfg, job.method, job.run)
    spam_seed = derive_seed(cfg.seed, job.method.value, "spam", job.n_spam, job.run)
    data = simulate_spam_data(truth, job.method, job.n_spam, gt, spam_seed)
    result = fit_spam(cfg, job.method, data, derive_seed(spam_seed, "fit"), truth=truth)
    estimate = align_gauge(result.estimate, truth) if cfg.gauge_align else result.estimate
    states, effects = realize(estimate)

    gate = hadamard_truth(EvolutionParams(omega_rot=gt.omega_rot, t2=gt.gate_t2))
    ideal = ideal_hadamard()
    reference = process_fidelity(ideal, gate)

    rows, chois = [], []
    for n_shots in cfg.n_values:
        seed = derive_seed(cfg.seed, job.method.value, job.n_spam, n_shots, job.run)
        counts = sample_process(truth, gate, n_shots, seed)
        linear = linear_invert(counts.frequencies, states, effects)
        projected = mle_project(linear, n_shots, cfg.process)
        key = dict(method=job.method, n_spam=job.n_spam, n_shots=n_shots, run=job.run, seed=seed)
        chois += [
            ChoiRecord.from_choi(linear, kind="linear", **key),
            ChoiRecord.from_choi(projected.choi, kind="projected", converged=projected.converged, **key),
        ]
        metrics = [
            ("fidelity_true", process_fidelity(gate, projected.choi)),
            ("fidelity_ideal", process_fidelity(ideal, projected.choi)),
            ("fidelity_reference", reference),
            ("process_converged", 1.0 if projected.converged else 0.0),
            ("spam_converged", 1.0 if result.converged else 0.0),
        ]
        rows += [
            ResultRow(method=job.method, n_spam=job.n_spam, n_shots=n_shots, run=job.run, seed=seed, metric=name, value=value)
            for name, value in metrics
        ]
    logger.debug(f"[run_process_sweep] Method {job.method} N_spam={job.n_spam} run={job.run} done")
    record = FitRecord.from_fit(result, n_shots=job.n_spam, n_spam=job.n_spam, run=job.run, seed=spam_seed)
    return rows, record, chois


def _execute(
    worker: Callable[[J], tuple[list[ResultRow], FitRecord, list[ChoiRecord]]], jobs: list[J], workers: int
) -> SweepOutcome:
    if workers > 1 and len(jobs) > 1:
        with Pool(processes=workers) as pool:
            results = pool.map(worker, jobs)
    else:
        results = [worker(job) for job in jobs]
    outcome = SweepOutcome()
    for rows, record, chois in results:
        outcome.rows.extend(rows)
        outcome.fits.append(record)
        outcome.chois.extend(chois)
    outcome.rows.sort(key=ResultRow.sort_key)
    return outcome


def _spam_jobs(cfg: SweepConfig) -> Iterable[SpamJob]:
    for method in cfg.methods:
        for n_shots in cfg.n_values:
            for run in range(cfg.runs_per_point):
                yield SpamJob(method=method, n_shots=n_shots, run=run, config=cfg)


def run_spam_sweep(cfg: SweepConfig) -> SweepOutcome:
    jobs = list(_spam_jobs(cfg))
    logger.info(f"[run_spam_sweep] {len(jobs)} points, {cfg.workers} worker(s)")
    outcome = _execute(run_spam_point, jobs, cfg.workers)
    logger.info(f"[run_spam_sweep] done: {len(outcome.rows)} rows, {outcome.n_unconverged} unconverged fit(s)")
    return outcome


def run_process_sweep(cfg: SweepConfig) -> SweepOutcome:
    jobs = [
        ProcessJob(method=method, n_spam=n_spam, run=run, config=cfg)
        for method in cfg.methods
        for n_spam in cfg.n_spam_values
        for run in range(cfg.runs_per_point)
    ]
    logger.info(f"[run_process_sweep] {len(jobs)} SPAM calibrations x {len(cfg.n_values)} shot counts")
    outcome = _execute(run_process_point, jobs, cfg.workers)
    logger.info(f"[run_process_sweep] done: {len(outcome.rows)} rows, {outcome.n_unconverged} unconverged fit(s)")
    return outcome


def simulate_dataset(cfg: SweepConfig, method: Method | str, shots: int, run: int = 0) -> tuple[SpamParameterSet, CountDataset, int]:
    """Truth and sampled dataset of one sweep point, with the data seed."""
    method = Method(method)
    truth, gt = ground_truth_for(cfg, method, run)
    seed = derive_seed(cfg.seed, method.value, shots, run)
    return truth, simulate_spam_data(truth, method, shots, gt, seed), seed


def fit_dataset(cfg: SweepConfig, method: Method | str, data: CountDataset, truth: SpamParameterSet | None = None) -> FitResult:
    return fit_spam(cfg, method, data, derive_seed(cfg.seed, "fit"), truth=truth)
