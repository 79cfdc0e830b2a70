from .addonconfig import CustomAddonConfig
from .baseconfig import BaseAddonConfig
from .sweepconfig import GroundTruthConfig, OptimizerBudget, ProcessConfig, SweepConfig, load_sweep_config

__all__ = [
    "BaseAddonConfig",
    "CustomAddonConfig",
    "GroundTruthConfig",
    "OptimizerBudget",
    "ProcessConfig",
    "SweepConfig",
    "load_sweep_config",
]
