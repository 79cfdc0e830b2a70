from .fit_data import fit_data
from .oracle_suite import oracle_suite
from .process_sweep import process_sweep
from .simulate_data import simulate_data
from .spam_sweep import spam_sweep

__all__ = ["spam_sweep", "process_sweep", "simulate_data", "fit_data", "oracle_suite"]
