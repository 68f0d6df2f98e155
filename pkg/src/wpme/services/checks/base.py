"""
Base classes for the check plugin system.

Every check id a scenario may request is handled by exactly one plugin. A plugin
knows how to:
1. Validate its parameters against the regime and geometry before any compute
2. Run on a trajectory and return a CheckResult (margin, tolerance, CSV tables)
3. Say whether a raw violation may be re-run on a refined trajectory
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from wpme.config.checks_config import CheckConfig
from wpme.schemas.reports import CheckOutcome
from wpme.schemas.scenario import CheckSpec
from wpme.services.geometry.curvature import CurvatureReport, validate_dimension_parameter
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.solver.trajectory import Trajectory


# ═══════════════════════════════════════════════════════════════════
# CHECK CONTEXT — Everything a check needs to run
# ═══════════════════════════════════════════════════════════════════

@dataclass
class CheckContext:
    trajectory: Trajectory
    spec: CheckSpec
    curvature: Optional[CurvatureReport] = None   # Ric_φ^m for spec.m, when the check takes m

    @property
    def p(self) -> float:
        return self.trajectory.p

    @property
    def manifold(self) -> ManifoldSpec:
        return self.trajectory.manifold

    @property
    def K(self) -> float:
        return self.curvature.K if self.curvature is not None else 0.0


# ═══════════════════════════════════════════════════════════════════
# CHECK RESULT — Margins, tolerance and the tables to serialize
# ═══════════════════════════════════════════════════════════════════

@dataclass
class CheckTable:
    name: str
    header: List[str]
    rows: List[tuple]
    shared: bool = False   # rows of every check with this name go to one CSV


@dataclass
class CheckResult:
    """
    A check passes when min_margin ≥ −tol. Ungated results are reported but
    never fail a run.
    """
    check_id: str
    passed: bool
    min_margin: Optional[float] = None
    tol: float = 0.0
    argmin: Optional[Dict[str, Any]] = None
    gated: bool = True
    details: Dict[str, Any] = field(default_factory=dict)
    tables: List[CheckTable] = field(default_factory=list)

    @property
    def raw_violation(self) -> bool:
        return self.gated and not self.passed

    def to_outcome(self, refinement: Optional[Dict[str, Any]] = None) -> CheckOutcome:
        passed = self.passed or not self.gated
        if refinement is not None and refinement.get("eliminated"):
            passed = True
        return CheckOutcome(
            id=self.check_id,
            passed=passed,
            min_margin=self.min_margin,
            argmin=self.argmin,
            gated=self.gated,
            details={"tol": self.tol, **self.details},
            refinement=refinement,
        )


def margin_result(check_id: str, margins: List[float], times: List[float], tol: float,
                  nodes: Optional[List[int]] = None, **kwargs) -> CheckResult:
    """CheckResult for a per-snapshot margin series; the argmin carries t (and node)."""
    worst = min(range(len(margins)), key=lambda i: margins[i])
    argmin: Dict[str, Any] = {"t": times[worst]}
    if nodes is not None:
        argmin["node"] = nodes[worst]
    return CheckResult(
        check_id=check_id,
        passed=margins[worst] >= -tol,
        min_margin=margins[worst],
        tol=tol,
        argmin=argmin,
        **kwargs,
    )


# ═══════════════════════════════════════════════════════════════════
# CHECK PLUGIN — Base class for all checks
# ═══════════════════════════════════════════════════════════════════

class CheckPlugin(ABC):

    name: str = "base_check"
    description: str = "Base check"
    check_ids: List[str] = []
    # a raw violation is re-run on the refined trajectory before it counts
    refinable: bool = True

    def handles(self, check_id: str) -> bool:
        return check_id in self.check_ids

    def validate(self, spec: CheckSpec, p: float, manifold: ManifoldSpec,
                 curvature: Optional[CurvatureReport]) -> None:
        """Raise ParameterError (or UnsupportedEstimateError) before anything is solved."""
        CheckConfig.validate_regime(spec.id, p)
        if spec.m is not None:
            validate_dimension_parameter(manifold, spec.m)

    @abstractmethod
    def run(self, ctx: CheckContext) -> CheckResult:
        ...
