"""
Report models: the serialized results of checks, runs and sweeps.
"""

from typing import Any, Dict, List, Optional

from pydantic import Field, computed_field

from wpme.schemas.base_schema import BaseReportModel


# =======================
# Estimate checks
# =======================

class EstimateReport(BaseReportModel):
    """Margins RHS − LHS of one estimate, minimised over nodes per snapshot."""

    check: str
    times: List[float]
    min_margins: List[float]
    argmin_nodes: List[int]
    global_min_margin: float
    argmin_time: float
    argmin_node: int
    tol: float = Field(ge=0.0)

    @computed_field
    @property
    def passed(self) -> bool:
        return self.global_min_margin >= -self.tol

    def rows(self) -> List[tuple]:
        """Rows of the estimate CSV: check,t,min_margin,argmin_node,pass."""
        return [
            (self.check, t, margin, node, margin >= -self.tol)
            for t, margin, node in zip(self.times, self.min_margins, self.argmin_nodes)
        ]


# =======================
# Entropy monitoring
# =======================

class EntropyTrace(BaseReportModel):
    """
    N, W and their rates per snapshot. Finite-difference rates exist at interior
    snapshots only (None elsewhere); bound_fast only for the fast regime.
    """

    times: List[float]
    N: List[float]
    W: List[float]
    dN_formula: List[float]
    dN_fd: List[Optional[float]]
    dW_formula: List[float]
    dW_fd: List[Optional[float]]
    bound_fast: List[Optional[float]]
    monotone_flags: List[bool]

    def rows(self) -> List[tuple]:
        return list(zip(
            self.times, self.N, self.W, self.dN_formula, self.dN_fd,
            self.dW_formula, self.dW_fd, self.bound_fast, self.monotone_flags,
        ))


# =======================
# Runs
# =======================

class CheckOutcome(BaseReportModel):
    id: str
    passed: bool
    min_margin: Optional[float] = None
    argmin: Optional[Dict[str, Any]] = None
    gated: bool = True
    details: Dict[str, Any] = Field(default_factory=dict)
    refinement: Optional[Dict[str, Any]] = None

    def summary_entry(self) -> Dict[str, Any]:
        entry = {
            "id": self.id,
            "pass": self.passed,
            "min_margin": self.min_margin,
            "argmin": self.argmin,
        }
        if not self.gated:
            entry["gated"] = False
        if self.details:
            entry["details"] = self.details
        if self.refinement is not None:
            entry["refinement"] = self.refinement
        return entry


class RunReport(BaseReportModel):
    scenario: Dict[str, Any]
    checks: List[CheckOutcome] = Field(default_factory=list)
    K: Optional[float] = None
    lambda_min: Optional[float] = None
    wall_time: float = 0.0
    output_files: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_summary_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "checks": [c.summary_entry() for c in self.checks],
            "K": self.K,
            "lambda_min": self.lambda_min,
            "overall_pass": self.overall_pass,
            "wall_time": self.wall_time,
        }


class SweepPoint(BaseReportModel):
    axis: str
    value: float
    check: str
    min_margin: Optional[float] = None
    passed: Optional[bool] = None
    skipped_reason: Optional[str] = None

    def row(self) -> tuple:
        return (self.axis, self.value, self.check, self.min_margin, self.passed, self.skipped_reason)
