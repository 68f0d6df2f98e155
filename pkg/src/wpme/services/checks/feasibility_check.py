"""
Feasibility Check — evaluates A(ε₁, ε₂) of the fast-diffusion Li–Yau estimate.
Pure arithmetic: reported always, gated on A > 0 only when require_feasible is set.
"""
from __future__ import annotations

from typing import Optional

from wpme.schemas.scenario import CheckSpec
from wpme.services.checks.base import CheckContext, CheckPlugin, CheckResult
from wpme.services.estimates import a_tilde, feasibility_A
from wpme.services.geometry.curvature import CurvatureReport
from wpme.services.geometry.manifold import ManifoldSpec


class FeasibilityCheck(CheckPlugin):
    name = "feasibility"
    description = "Coefficient A(ε₁, ε₂) of the fast-diffusion estimate at the given point"
    check_ids = ["feasibility"]
    refinable = False

    def validate(self, spec: CheckSpec, p: float, manifold: ManifoldSpec,
                 curvature: Optional[CurvatureReport]) -> None:
        super().validate(spec, p, manifold, curvature)
        feasibility_A(p, spec.m, spec.alpha, spec.eps1, spec.eps2)

    def run(self, ctx: CheckContext) -> CheckResult:
        spec = ctx.spec
        value = feasibility_A(ctx.p, spec.m, spec.alpha, spec.eps1, spec.eps2)
        gated = bool(spec.require_feasible)
        return CheckResult(
            check_id=spec.id,
            passed=value > 0.0,
            min_margin=value,
            tol=0.0,
            gated=gated,
            details={"A": value, "a_tilde": a_tilde(ctx.p, spec.m), "feasible": value > 0.0},
        )
