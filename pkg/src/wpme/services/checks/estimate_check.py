"""
Estimate Check — the global Li–Yau type bounds, one check id per estimate.
"""
from __future__ import annotations

from typing import Optional

from wpme.config.checks_config import CheckConfig
from wpme.config.settings import NumericsConfig
from wpme.schemas.scenario import CheckSpec
from wpme.services.checks.base import CheckContext, CheckPlugin, CheckResult, CheckTable
from wpme.services.estimates import (
    EstimateId,
    EstimateParams,
    a_tilde_pair,
    check_estimate,
    nonlinearity_scale,
    validate_estimate,
)
from wpme.services.geometry.curvature import CurvatureReport
from wpme.services.geometry.manifold import ManifoldSpec

ESTIMATE_HEADER = ["check", "t", "min_margin", "argmin_node", "pass"]


def estimate_params(spec: CheckSpec, p: float, K: float, M: float) -> EstimateParams:
    return EstimateParams(
        p=p,
        m=spec.m,
        K=K,
        M=M,
        alpha=spec.alpha,
        t_check_min=spec.t_min,
        tol=spec.tol,
        mkt_max=spec.mkt_max if spec.mkt_max is not None else NumericsConfig.SMALL_TIME_MKT_MAX,
    )


class EstimateCheck(CheckPlugin):
    name = "estimate_check"
    description = "Margin RHS − LHS of a Li–Yau type estimate over every checked node and snapshot"
    check_ids = CheckConfig.get_checks_by_kind("estimate")

    def validate(self, spec: CheckSpec, p: float, manifold: ManifoldSpec,
                 curvature: Optional[CurvatureReport]) -> None:
        super().validate(spec, p, manifold, curvature)
        K = curvature.K if curvature is not None else 0.0
        # M is known only after solving; any positive value exercises the other constraints
        validate_estimate(EstimateId(spec.id), estimate_params(spec, p, K, 1.0))

    def run(self, ctx: CheckContext) -> CheckResult:
        traj = ctx.trajectory
        M = nonlinearity_scale(traj)
        params = estimate_params(ctx.spec, ctx.p, ctx.K, M)
        report = check_estimate(traj, EstimateId(ctx.spec.id), params)
        at, a_n = a_tilde_pair(ctx.p, params.m, ctx.manifold.n)
        return CheckResult(
            check_id=report.check,
            passed=report.passed,
            min_margin=report.global_min_margin,
            tol=report.tol,
            argmin={"t": report.argmin_time, "node": report.argmin_node},
            details={
                "K": ctx.K,
                "M": M,
                "a_tilde": at,
                "a_dimensional": a_n,
                "snapshots": len(report.times),
            },
            tables=[CheckTable("estimates", ESTIMATE_HEADER, report.rows(), shared=True)],
        )
