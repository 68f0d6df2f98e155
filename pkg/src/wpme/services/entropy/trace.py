"""
EntropyTrace assembly: N, W and their rates at every snapshot with t ≥ t_check_min.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from wpme.config.settings import NumericsConfig
from wpme.exceptions import ParameterError
from wpme.schemas.reports import EntropyTrace
from wpme.services.entropy.entropies import (
    nash_entropy,
    nash_entropy_rate,
    rate_scales,
    w_entropy,
    w_entropy_rate,
    w_entropy_rate_bound_fast,
)
from wpme.services.solver.trajectory import Trajectory


def _centred(values: list, times: list, i: int) -> Optional[float]:
    if i == 0 or i == len(values) - 1:
        return None
    return (values[i + 1] - values[i - 1]) / (times[i + 1] - times[i - 1])


def trace_indices(traj: Trajectory, t_check_min: float) -> List[int]:
    indices = [k for k in range(len(traj)) if traj.times[k] >= t_check_min and traj.times[k] > 0.0]
    if not indices:
        raise ParameterError(f"no snapshots with t >= {t_check_min:g}")
    return indices


def _margins(traj: Trajectory, indices: Sequence[int], m: float, dN: Sequence[float],
             dW: Sequence[float], bound: Sequence[Optional[float]]) -> List[float]:
    margins = []
    for i, k in enumerate(indices):
        n_scale, w_scale = rate_scales(traj, k, m)
        margin = -dN[i] / n_scale
        if traj.p > 1.0 or bound[i] is not None:
            ceiling = bound[i] if bound[i] is not None else 0.0
            margin = min(margin, (ceiling - dW[i]) / w_scale)
        margins.append(margin)
    return margins


def monotonicity_margins(traj: Trajectory, m: float, trace: EntropyTrace) -> List[float]:
    """
    Per row, min(−dN/s_N, (ceiling − dW)/s_W) with s_N, s_W the L¹ sizes of the
    rate integrands and ceiling 0 (p > 1) or the fast bound. Without a fast
    bound (0 < p < 1, no ε) only the N term enters.
    """
    indices = trace_indices(traj, trace.times[0])
    return _margins(traj, indices, m, trace.dN_formula, trace.dW_formula, trace.bound_fast)


def entropy_trace(
    traj: Trajectory,
    m: float,
    eps: Optional[float] = None,
    t_check_min: float = NumericsConfig.T_CHECK_MIN,
) -> EntropyTrace:
    """
    Finite-difference rates are taken over neighbouring snapshots of the trace,
    so the first and last rows carry none. A row is monotone when its
    normalized margin is ≥ −ENTROPY_TOL_FACTOR, i.e. dN ≤ tol and dW ≤ tol
    (p > 1) or dW ≤ bound + tol (0 < p < 1, ε given).
    """
    indices = trace_indices(traj, t_check_min)

    times = [float(traj.times[k]) for k in indices]
    N = [nash_entropy(traj, k, m) for k in indices]
    W = [w_entropy(traj, k, m) for k in indices]
    dN = [nash_entropy_rate(traj, k, m) for k in indices]
    dW = [w_entropy_rate(traj, k, m) for k in indices]
    fast = traj.p < 1.0 and eps is not None
    bound = [w_entropy_rate_bound_fast(traj, k, m, eps) if fast else None for k in indices]
    margins = _margins(traj, indices, m, dN, dW, bound)

    return EntropyTrace(
        times=times,
        N=N,
        W=W,
        dN_formula=dN,
        dN_fd=[_centred(N, times, i) for i in range(len(indices))],
        dW_formula=dW,
        dW_fd=[_centred(W, times, i) for i in range(len(indices))],
        bound_fast=bound,
        monotone_flags=[margin >= -NumericsConfig.ENTROPY_TOL_FACTOR for margin in margins],
    )
