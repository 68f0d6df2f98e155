"""
Solver configuration for u_t = Δ_φ(u^p).
"""

from enum import Enum
from typing import Optional

from pydantic import Field, field_validator

from wpme.config.settings import NumericsConfig
from wpme.schemas.base_schema import BaseConfigModel


class Scheme(str, Enum):
    EXPLICIT_EULER = "explicit-euler"
    RK4 = "rk4"


class FlowRegime(str, Enum):
    POROUS = "porous"   # p > 1
    FAST = "fast"       # 0 < p < 1


class SolverConfig(BaseConfigModel):
    p: float = Field(..., gt=0.0)
    scheme: Scheme = Scheme.EXPLICIT_EULER
    dt: Optional[float] = Field(default=None, gt=0.0)
    cfl_fraction: float = Field(default=NumericsConfig.CFL_FRACTION, gt=0.0)
    t_end: float = Field(..., gt=0.0)
    positivity_floor: float = Field(default=NumericsConfig.POSITIVITY_FLOOR, gt=0.0)
    snapshot_stride: int = Field(default=1, ge=1)

    @field_validator("p")
    @classmethod
    def _exclude_linear_flow(cls, value: float) -> float:
        if value == 1.0:
            raise ValueError("p≠1 required (p = 1 is the linear weighted heat flow)")
        return value

    @property
    def regime(self) -> FlowRegime:
        return FlowRegime.POROUS if self.p > 1.0 else FlowRegime.FAST
