"""
Identity Check — agreement of the integral identities behind the entropy formulas.

Per checked snapshot, the worst relative mismatch among
    d/dt ∫uv dμ        centred difference / (p−1)∫(Δ_φv)uv dμ / −p∫|∇v|²u dμ
    d/dt ∫(Δ_φv)uv dμ  centred difference / closed form
    W                  centred difference of t·N / closed form
    dW/dt              completed-square form / expanded form
"""
from __future__ import annotations

from typing import List

from wpme.exceptions import ParameterError
from wpme.services.checks.base import CheckContext, CheckPlugin, CheckResult, CheckTable, margin_result
from wpme.services.entropy import laplacian_moment_rates, uv_integral_rates, w_entropy_rate, w_entropy_rate_expanded
from wpme.services.entropy.identities import relative_mismatch, w_entropy_consistency
from wpme.services.solver.trajectory import Trajectory

DEFAULT_TOL = 1e-2

IDENTITY_HEADER = [
    "t", "uv_fd", "uv_middle", "uv_right", "lap_fd", "lap_formula",
    "tN_fd", "W", "dW_completed", "dW_expanded", "max_mismatch",
]


def identity_indices(traj: Trajectory, t_min: float) -> List[int]:
    """Interior snapshots with t ≥ t_min whose left neighbour has t > 0."""
    indices = [k for k in traj.centred_indices(t_min) if traj.times[k - 1] > 0.0]
    if not indices:
        raise ParameterError(f"no interior snapshots with t >= {t_min:g} and t_(k-1) > 0")
    return indices


class EntropyIdentitiesCheck(CheckPlugin):
    name = "entropy_identities"
    description = "Three-way, two-way and W = d/dt[tN] agreement of the entropy identities"
    check_ids = ["entropy_identities"]

    def run(self, ctx: CheckContext) -> CheckResult:
        traj = ctx.trajectory
        m = ctx.spec.m
        tol = ctx.spec.tol if ctx.spec.tol is not None else DEFAULT_TOL

        times, margins, rows = [], [], []
        worst = {"uv": 0.0, "laplacian_moment": 0.0, "w_consistency": 0.0, "w_rate_forms": 0.0}
        for k in identity_indices(traj, ctx.spec.t_min):
            uv_fd, uv_mid, uv_right = uv_integral_rates(traj, k)
            lap_fd, lap_formula = laplacian_moment_rates(traj, k)
            tn_fd, w_value = w_entropy_consistency(traj, k, m)
            dw_completed = w_entropy_rate(traj, k, m)
            dw_expanded = w_entropy_rate_expanded(traj, k, m)

            mismatches = {
                "uv": max(
                    relative_mismatch(uv_fd, uv_mid),
                    relative_mismatch(uv_fd, uv_right),
                    relative_mismatch(uv_mid, uv_right),
                ),
                "laplacian_moment": relative_mismatch(lap_fd, lap_formula),
                "w_consistency": relative_mismatch(tn_fd, w_value),
                "w_rate_forms": relative_mismatch(dw_completed, dw_expanded),
            }
            for key, value in mismatches.items():
                worst[key] = max(worst[key], value)
            largest = max(mismatches.values())

            t = float(traj.times[k])
            times.append(t)
            margins.append(-largest)
            rows.append((t, uv_fd, uv_mid, uv_right, lap_fd, lap_formula,
                         tn_fd, w_value, dw_completed, dw_expanded, largest))

        return margin_result(
            ctx.spec.id,
            margins,
            times,
            tol,
            details={"worst_mismatch": worst},
            tables=[CheckTable(ctx.spec.id, IDENTITY_HEADER, rows)],
        )
