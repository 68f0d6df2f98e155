"""
Residual Checks — pointwise equations that a solution satisfies up to discretization error.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from wpme.exceptions import ParameterError
from wpme.schemas.scenario import CheckSpec
from wpme.services.checks.base import CheckContext, CheckPlugin, CheckResult, CheckTable, margin_result
from wpme.services.estimates import (
    ScheduleKind,
    a_tilde,
    coefficient_schedule,
    differential_inequality_residual,
    nonlinearity_scale,
)
from wpme.services.estimates.differential_inequality import residual_scale
from wpme.services.geometry.curvature import CurvatureReport
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.solver.pressure import pressure_residual


class PressureEquationCheck(CheckPlugin):
    """‖v_t − (p−1)vΔ_φv − |∇v|²‖∞ relative to ‖v‖∞ at every checked snapshot."""

    name = "pressure_equation"
    description = "Residual of the pressure equation along the trajectory"
    check_ids = ["pressure_equation"]
    DEFAULT_TOL = 1e-3

    def run(self, ctx: CheckContext) -> CheckResult:
        traj = ctx.trajectory
        indices = traj.centred_indices(ctx.spec.t_min)
        if not indices:
            raise ParameterError(f"pressure_equation: no interior snapshots with t >= {ctx.spec.t_min:g}")

        times, margins, rows = [], [], []
        for k in indices:
            residual = pressure_residual(traj, k).sup_norm()
            v_sup = float(np.max(np.abs(traj.pressures[k])))
            ratio = residual / v_sup
            t = float(traj.times[k])
            times.append(t)
            margins.append(-ratio)
            rows.append((t, residual, v_sup, ratio))

        tol = ctx.spec.tol if ctx.spec.tol is not None else self.DEFAULT_TOL
        return margin_result(
            ctx.spec.id,
            margins,
            times,
            tol,
            tables=[CheckTable(ctx.spec.id, ["t", "residual_sup", "pressure_sup", "ratio"], rows)],
        )


class DifferentialInequalityCheck(CheckPlugin):
    """
    Minimum of the differential-inequality residual for F = |∇v|²/v − α v_t/v − φ,
    scaled by the size of its leading term. (α, φ) is a constant α (default 1)
    with φ ≡ 0, or one of the porous-regime schedules driven by MK.
    """

    name = "differential_inequality"
    description = "Residual of the parabolic inequality satisfied by the Li–Yau quantity"
    check_ids = ["differential_inequality"]
    DEFAULT_TOL = 5e-2

    @staticmethod
    def _schedule(spec: CheckSpec) -> ScheduleKind:
        return spec.schedule if spec.schedule is not None else ScheduleKind.CONSTANT

    def validate(self, spec: CheckSpec, p: float, manifold: ManifoldSpec,
                 curvature: Optional[CurvatureReport]) -> None:
        super().validate(spec, p, manifold, curvature)
        at = a_tilde(p, spec.m)
        kind = self._schedule(spec)
        if kind != ScheduleKind.CONSTANT and not p > 1.0:
            raise ParameterError(
                f"differential_inequality: schedule '{kind.value}' applies to the porous regime, got p={p:g}"
            )
        coefficient_schedule(kind, at, 0.0, spec.alpha)

    def run(self, ctx: CheckContext) -> CheckResult:
        traj = ctx.trajectory
        m = ctx.spec.m
        kind = self._schedule(ctx.spec)
        mk = nonlinearity_scale(traj) * ctx.K
        alpha_fn, varphi_fn = coefficient_schedule(kind, a_tilde(traj.p, m), mk, ctx.spec.alpha)
        indices = [k for k in range(2, traj.last_index - 1) if traj.times[k] >= ctx.spec.t_min]
        if not indices:
            raise ParameterError(
                f"differential_inequality: needs snapshots with t >= {ctx.spec.t_min:g} "
                f"and two neighbours on each side"
            )

        times, margins, nodes, rows = [], [], [], []
        for k in indices:
            residual = differential_inequality_residual(traj, k, alpha_fn, varphi_fn, m=m)
            scale = residual_scale(traj, k, m)
            node = residual.argmin()
            t = float(traj.times[k])
            times.append(t)
            margins.append(residual.min() / scale)
            nodes.append(node)
            rows.append((t, residual.min(), scale, node))

        details = {"schedule": kind.value, "MK": mk}
        if kind == ScheduleKind.CONSTANT:
            details["alpha"] = alpha_fn(0.0)
        tol = ctx.spec.tol if ctx.spec.tol is not None else self.DEFAULT_TOL
        return margin_result(
            ctx.spec.id,
            margins,
            times,
            tol,
            nodes=nodes,
            details=details,
            tables=[CheckTable(ctx.spec.id, ["t", "min_residual", "scale", "argmin_node"], rows)],
        )
