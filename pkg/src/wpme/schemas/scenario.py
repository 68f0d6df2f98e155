"""
Scenario schema: the TOML file that drives a run.
Unknown keys fail closed at every level; regime constraints of every check are
validated against the solver's p before anything is computed.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import Field, field_validator, model_validator

from wpme.config.checks_config import CheckConfig
from wpme.config.settings import NumericsConfig
from wpme.schemas.base_schema import BaseConfigModel
from wpme.services.estimates.schedules import ScheduleKind
from wpme.services.geometry.manifold import ManifoldKind, ManifoldSpec, PhiKind
from wpme.services.solver.config import SolverConfig


# =======================
# Geometry
# =======================

class ManifoldSection(BaseConfigModel):
    kind: ManifoldKind
    grid: List[int]
    lengths: Optional[List[float]] = None   # 2π per axis when omitted
    phi: PhiKind = PhiKind.ZERO
    phi_amplitude: float = 0.0

    @field_validator("phi")
    @classmethod
    def _closed_form_only(cls, value: PhiKind) -> PhiKind:
        if value == PhiKind.CUSTOM:
            raise ValueError("phi = 'custom' needs sample arrays and is not accepted in scenario files")
        return value

    @model_validator(mode="after")
    def _buildable(self) -> "ManifoldSection":
        self.build()
        return self

    def build(self, refine: int = 1) -> ManifoldSpec:
        lengths = self.lengths if self.lengths is not None else [2.0 * math.pi] * len(self.grid)
        return ManifoldSpec(
            self.kind,
            tuple(lengths),
            tuple(count * refine for count in self.grid),
            self.phi,
            self.phi_amplitude,
        )


# =======================
# Initial data
# =======================

class InitialKind(str, Enum):
    CONSTANT = "constant"
    TRIG = "trig"       # value + seeded random trig perturbation
    COSINE = "cosine"   # value + amplitude·cos(wavenumber·2πx/L) along the first axis
    FILE = "file"       # last snapshot of a trajectory CSV, or a node_index,u table


class InitialSection(BaseConfigModel):
    kind: InitialKind
    value: float = Field(default=1.0, gt=0.0)
    amplitude: float = Field(default=0.0, ge=0.0)
    modes: int = Field(default=2, ge=1)
    max_wavenumber: int = Field(default=3, ge=1)
    wavenumber: int = Field(default=1, ge=1)
    file: Optional[Path] = None

    @model_validator(mode="after")
    def _consistent(self) -> "InitialSection":
        if self.kind == InitialKind.FILE and self.file is None:
            raise ValueError("initial.kind = 'file' needs initial.file")
        if self.kind != InitialKind.FILE and self.file is not None:
            raise ValueError(f"initial.file is only read when kind = 'file' (kind = '{self.kind.value}')")
        # each mode contributes at most √2·amplitude/modes
        if self.kind == InitialKind.TRIG and not self.value > math.sqrt(2.0) * self.amplitude:
            raise ValueError(
                f"trig initial data must stay positive: value > √2·amplitude required "
                f"(value={self.value:g}, amplitude={self.amplitude:g})"
            )
        if self.kind == InitialKind.COSINE and not self.value > self.amplitude:
            raise ValueError(
                f"cosine initial data must stay positive: value > amplitude required "
                f"(value={self.value:g}, amplitude={self.amplitude:g})"
            )
        return self


# =======================
# Solver
# =======================

class SolverSection(SolverConfig):
    """The [solver] table, passed to the integrator as its config."""


# =======================
# Checks
# =======================

class CheckSpec(BaseConfigModel):
    id: str
    m: Optional[float] = Field(default=None, gt=0.0)
    alpha: Optional[float] = None
    eps: Optional[float] = Field(default=None, gt=0.0)
    eps1: Optional[float] = None
    eps2: Optional[float] = None
    t_check_min: Optional[float] = Field(default=None, gt=0.0)
    tol: Optional[float] = Field(default=None, ge=0.0)
    mkt_max: Optional[float] = Field(default=None, gt=0.0)
    require_feasible: Optional[bool] = None
    schedule: Optional[ScheduleKind] = None

    @model_validator(mode="after")
    def _known_parameters(self) -> "CheckSpec":
        CheckConfig.validate_parameters(self.id, self.parameters())
        return self

    def parameters(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in CheckConfig.PARAMETERS}

    @property
    def kind(self) -> str:
        return CheckConfig.get_check_config(self.id)["kind"]

    @property
    def label(self) -> str:
        return CheckConfig.get_check_config(self.id)["label"]

    @property
    def t_min(self) -> float:
        return self.t_check_min if self.t_check_min is not None else NumericsConfig.T_CHECK_MIN

    def echo(self) -> Dict[str, Any]:
        """id plus the parameters actually given."""
        given = {k: v for k, v in self.parameters().items() if v is not None}
        return {"id": self.id, **{k: v.value if isinstance(v, Enum) else v for k, v in given.items()}}


# =======================
# Scenario
# =======================

class SweepAxis(str, Enum):
    P = "p"
    M = "m"
    ALPHA = "alpha"


class Scenario(BaseConfigModel):
    schema_version: int
    name: str = Field(min_length=1)
    description: str = ""
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    output_dir: Optional[Path] = None
    write_trajectory: bool = False
    manifold: ManifoldSection
    initial: InitialSection
    solver: SolverSection
    checks: List[CheckSpec] = Field(min_length=1)

    @field_validator("schema_version")
    @classmethod
    def _supported_version(cls, value: int) -> int:
        if value != NumericsConfig.SCHEMA_VERSION:
            raise ValueError(f"schema_version {value} is not supported (expected {NumericsConfig.SCHEMA_VERSION})")
        return value

    @model_validator(mode="after")
    def _checks_fit_regime(self) -> "Scenario":
        if self.initial.kind == InitialKind.TRIG and self.seed is None:
            raise ValueError("initial.kind = 'trig' draws random modes: a seed is required")
        for spec in self.checks:
            CheckConfig.validate_regime(spec.id, self.solver.p)
        return self

    def with_axis_value(self, axis: SweepAxis, value: float) -> "Scenario":
        """
        A re-validated copy with one parameter replaced: solver.p, or m / alpha
        on every check that carries it.
        """
        data = self.model_dump(mode="python")
        axis = SweepAxis(axis)
        if axis == SweepAxis.P:
            data["solver"]["p"] = value
        else:
            for check in data["checks"]:
                if check.get(axis.value) is not None:
                    check[axis.value] = value
        return Scenario.model_validate(data)

    def with_seed(self, seed: int) -> "Scenario":
        data = self.model_dump(mode="python")
        data["seed"] = seed
        return Scenario.model_validate(data)

    def echo(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "seed": self.seed,
            "manifold": self.manifold.model_dump(mode="json"),
            "initial": self.initial.model_dump(mode="json", exclude_none=True),
            "solver": self.solver.model_dump(mode="json", exclude_none=True),
            "checks": [spec.echo() for spec in self.checks],
        }
