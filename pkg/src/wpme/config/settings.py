"""
Runtime settings.
Environment-driven values (loaded from .env) plus the numerical defaults
shared by every module.
"""

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# .env lives at the repository root (two levels above src/wpme)
load_dotenv(dotenv_path=Path(__file__).resolve().parents[3] / ".env")


class Settings(BaseModel):
    """Values a user may override through the environment."""

    out_dir: Path = Field(default=Path("out"))
    log_level: str = Field(default="INFO", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")
    max_workers: int = Field(default=4, ge=1)
    default_seed: int = Field(default=20240607, ge=0)

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            out_dir=Path(os.environ.get("WPME_OUT_DIR", "out")),
            log_level=os.environ.get("WPME_LOG_LEVEL", "INFO").upper(),
            max_workers=int(os.environ.get("WPME_MAX_WORKERS", "4")),
            default_seed=int(os.environ.get("WPME_DEFAULT_SEED", "20240607")),
        )


class NumericsConfig:
    """Numerical defaults shared by the solver, estimates and harness."""

    # Solver
    POSITIVITY_FLOOR = 1e-8
    CFL_FRACTION = 0.2
    MIN_GRID_POINTS = 8
    RK4_STABILITY_RADIUS = 2.785
    EULER_STABILITY_RADIUS = 2.0

    # Estimates
    T_CHECK_MIN = 0.01
    MARGIN_TOL_FACTOR = 1e-3
    MK_SERIES_CUTOFF = 1e-4
    SMALL_TIME_MKT_MAX = 0.1

    # Curvature
    EIG_TOL_FACTOR = 1e-12

    # Entropy gates
    ENTROPY_TOL_FACTOR = 1e-8

    # Refinement confirmation
    REFINE_SHRINK_FACTOR = 2.0

    # Serialization
    CSV_FLOAT_FORMAT = ".17g"
    DETERMINISM_RTOL = 1e-15

    # Scenario schema
    SCHEMA_VERSION = 1


settings = Settings.from_env()
