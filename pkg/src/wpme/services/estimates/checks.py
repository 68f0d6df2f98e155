"""
Pointwise Li–Yau quantities along a trajectory and the margin reports built on them.
"""

from __future__ import annotations

from typing import List

import numpy as np

from wpme.config.settings import NumericsConfig
from wpme.exceptions import ParameterError
from wpme.schemas.reports import EstimateReport
from wpme.services.estimates.theorems import (
    EstimateId,
    EstimateParams,
    theorem_rhs,
    validate_estimate,
)
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.operators import gradient_array
from wpme.services.solver.trajectory import Trajectory


def liyau_lhs(traj: Trajectory, k: int, alpha: float) -> ScalarField:
    """
    |∇v|²/v − α·v_t/v at snapshot k, negated in the fast regime.
    v_t is the centred difference over the neighbouring snapshots.
    """
    v_t = traj.pressure_rate(k)
    v = traj.pressures[k]
    grad_sq = np.sum(gradient_array(v, traj.manifold) ** 2, axis=0)
    values = (grad_sq - alpha * v_t) / v
    if traj.p < 1.0:
        values = -values
    return ScalarField(traj.manifold, values)


def default_tolerance(check: EstimateId, params: EstimateParams) -> float:
    """MARGIN_TOL_FACTOR·|RHS(t_check_min)|."""
    rhs = theorem_rhs(check, params, params.t_check_min).rhs
    return NumericsConfig.MARGIN_TOL_FACTOR * abs(rhs)


def checked_indices(traj: Trajectory, check: EstimateId, params: EstimateParams) -> List[int]:
    indices = traj.centred_indices(params.t_check_min)
    if check == EstimateId.SMALL_TIME_COMBINED:
        indices = [k for k in indices if params.mk * traj.times[k] <= params.mkt_max]
    return indices


def check_estimate(traj: Trajectory, check: EstimateId, params: EstimateParams) -> EstimateReport:
    """Margins RHS − LHS over every node of every interior snapshot with t ≥ t_check_min."""
    check = EstimateId(check)
    if params.p != traj.p:
        raise ParameterError(f"estimate p={params.p:g} differs from the trajectory's p={traj.p:g}")
    validate_estimate(check, params)

    indices = checked_indices(traj, check, params)
    if not indices:
        raise ParameterError(
            f"{check.value}: no interior snapshots with t >= {params.t_check_min:g}"
        )

    times, margins, nodes = [], [], []
    for k in indices:
        t = float(traj.times[k])
        bound = theorem_rhs(check, params, t)
        margin = bound.rhs - liyau_lhs(traj, k, bound.alpha).values
        node = int(np.argmin(margin))
        times.append(t)
        margins.append(float(margin.reshape(-1)[node]))
        nodes.append(node)

    worst = int(np.argmin(margins))
    tol = params.tol if params.tol is not None else default_tolerance(check, params)
    return EstimateReport(
        check=check.value,
        times=times,
        min_margins=margins,
        argmin_nodes=nodes,
        global_min_margin=margins[worst],
        argmin_time=times[worst],
        argmin_node=nodes[worst],
        tol=tol,
    )
