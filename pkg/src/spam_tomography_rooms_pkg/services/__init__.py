from .estimators import FitResult, ReconstructionReport, align_gauge, fit, init_strategies, nll_static, nll_timeseries, reconstruction_report
from .experiments import (
    ChoiRecord,
    FitRecord,
    ResultRow,
    SweepOutcome,
    fit_dataset,
    run_process_sweep,
    run_spam_sweep,
    simulate_dataset,
)
from .oracle import OracleCheck, run_oracle_suite
from .process_tomography import (
    CholeskyParams,
    ProcessEstimate,
    constraints,
    hadamard_truth,
    linear_invert,
    mle_project,
    process_fidelity,
    process_nll,
)
from .simulation import CountDataset, make_ground_truth, sample_process, sample_static, sample_timeseries
from .spam_model import SpamParameterSet, pack, predict_static, predict_timeseries, project_physical, realize, unpack

__all__ = [
    "ChoiRecord",
    "CholeskyParams",
    "CountDataset",
    "FitRecord",
    "FitResult",
    "OracleCheck",
    "ProcessEstimate",
    "ReconstructionReport",
    "ResultRow",
    "SpamParameterSet",
    "SweepOutcome",
    "align_gauge",
    "constraints",
    "fit",
    "fit_dataset",
    "hadamard_truth",
    "init_strategies",
    "linear_invert",
    "make_ground_truth",
    "mle_project",
    "nll_static",
    "nll_timeseries",
    "pack",
    "predict_static",
    "predict_timeseries",
    "process_fidelity",
    "process_nll",
    "project_physical",
    "realize",
    "reconstruction_report",
    "run_oracle_suite",
    "run_process_sweep",
    "run_spam_sweep",
    "sample_process",
    "sample_static",
    "sample_timeseries",
    "simulate_dataset",
    "unpack",
]
