"""
Entropy Check — monotonicity of N and W along a trajectory.

entropy_porous: dN ≤ tol and dW ≤ tol for p > 1.
entropy_fast:   dN ≤ tol for 0 < p < 1, and dW ≤ bound + tol when ε is given.

Both statements need Ric_φ^m ≥ 0, and the fast N statement needs
p ∈ (1 − 2/m, 1). Outside those hypotheses the trace is computed and reported
without a gate.
"""
from __future__ import annotations

from typing import List, Optional

from wpme.config.settings import NumericsConfig
from wpme.schemas.scenario import CheckSpec
from wpme.services.checks.base import CheckContext, CheckPlugin, CheckResult, CheckTable, margin_result
from wpme.services.entropy import entropy_trace
from wpme.services.entropy.entropies import fast_bound_coefficients
from wpme.services.entropy.identities import relative_mismatch
from wpme.services.entropy.trace import monotonicity_margins
from wpme.services.estimates.constants import fast_range
from wpme.services.geometry.curvature import CurvatureReport, validate_dimension_parameter
from wpme.services.geometry.manifold import ManifoldSpec

ENTROPY_HEADER = ["t", "N", "W", "dN_formula", "dN_fd", "dW_formula", "dW_fd", "bound_fast", "monotone_flag"]


def _ungated_reason(ctx: CheckContext) -> Optional[str]:
    if ctx.curvature is not None and not ctx.curvature.nonneg:
        return f"Ric_φ^m is not nonnegative (λ_min = {ctx.curvature.lambda_min:.3e})"
    if ctx.spec.id == "entropy_fast":
        lo, _ = fast_range(ctx.spec.m)
        if ctx.p <= lo:
            return f"p = {ctx.p:g} ≤ 1 − 2/m = {lo:g}: the N-rate has no asserted sign"
    return None


def _fd_mismatch(formula: List[float], fd: List[Optional[float]]) -> Optional[float]:
    pairs = [(a, b) for a, b in zip(formula, fd) if b is not None]
    if not pairs:
        return None
    return max(relative_mismatch(a, b) for a, b in pairs)


class EntropyMonotonicityCheck(CheckPlugin):
    name = "entropy_monotonicity"
    description = "Sign of the N- and W-rates, with the fast-diffusion W-rate bound"
    check_ids = ["entropy_porous", "entropy_fast"]

    def validate(self, spec: CheckSpec, p: float, manifold: ManifoldSpec,
                 curvature: Optional[CurvatureReport]) -> None:
        super().validate(spec, p, manifold, curvature)
        if spec.eps is not None:
            fast_bound_coefficients(p, spec.m, manifold.n, spec.eps,
                                    validate_dimension_parameter(manifold, spec.m))

    def run(self, ctx: CheckContext) -> CheckResult:
        spec = ctx.spec
        trace = entropy_trace(ctx.trajectory, spec.m, spec.eps, spec.t_min)
        margins = monotonicity_margins(ctx.trajectory, spec.m, trace)
        reason = _ungated_reason(ctx)

        details = {
            "eps": spec.eps,
            "dN_fd_mismatch": _fd_mismatch(trace.dN_formula, trace.dN_fd),
            "dW_fd_mismatch": _fd_mismatch(trace.dW_formula, trace.dW_fd),
        }
        if reason is not None:
            details["ungated_reason"] = reason

        return margin_result(
            spec.id,
            margins,
            trace.times,
            NumericsConfig.ENTROPY_TOL_FACTOR,
            gated=reason is None,
            details=details,
            tables=[CheckTable(spec.id, ENTROPY_HEADER, trace.rows())],
        )
