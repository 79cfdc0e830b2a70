from pydantic import ConfigDict, Field, model_validator

from .baseconfig import BaseAddonConfig
from .sweepconfig import SweepConfig

ADDON_TYPE = "tomography"


class CustomAddonConfig(BaseAddonConfig):
    model_config = ConfigDict(extra="allow")

    sweep: SweepConfig = Field(default_factory=SweepConfig, description="Sweep, ground-truth and optimizer settings")

    @model_validator(mode="after")
    def validate_addon_type(self):
        if self.type != ADDON_TYPE:
            raise ValueError(f"Unsupported addon type {self.type!r}, expected {ADDON_TYPE!r}")
        return self
