"""
Parabolic differential inequality satisfied by the Li–Yau quantity

    F = |∇v|²/v − α(t)·v_t/v − φ(t),      L = ∂_t − (p−1)·v·Δ_φ

    L(F) ≤ −(1/ã)[(p−1)Δ_φv]² − 2(p−1)Ric_φ^m(∇v,∇v) + 2p∇v·∇F
           + (1−α)(v_t/v)² − α′·v_t/v − φ′                       (p > 1)

with the inequality reversed for 0 < p < 1. The residual is oriented so that
it is ≥ 0 in both regimes, up to discretization error.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from wpme.services.estimates.constants import a_tilde
from wpme.services.geometry.curvature import bakry_emery_tensor
from wpme.services.geometry.fields import ScalarField, VectorField
from wpme.services.geometry.operators import drift_laplacian_array, gradient_array
from wpme.services.solver.trajectory import Trajectory

Schedule = Callable[[float], float]


def _unit(_t: float) -> float:
    return 1.0


def _zero(_t: float) -> float:
    return 0.0


def _quantity(traj: Trajectory, k: int, alpha: float, varphi: float) -> np.ndarray:
    v = traj.pressures[k]
    grad_sq = np.sum(gradient_array(v, traj.manifold) ** 2, axis=0)
    return (grad_sq - alpha * traj.pressure_rate(k)) / v - varphi


def differential_inequality_residual(
    traj: Trajectory,
    k: int,
    alpha_fn: Optional[Schedule] = None,
    varphi_fn: Optional[Schedule] = None,
    *,
    m: float,
) -> ScalarField:
    """
    RHS − L(F) for p > 1, L(F) − RHS for p < 1, at snapshot k.

    v_t is needed at k−1, k, k+1, so k must have two snapshots on each side.
    F_t, α′ and φ′ are centred differences over the snapshots k ± 1.
    """
    alpha_fn = alpha_fn or _unit
    varphi_fn = varphi_fn or _zero
    traj.require_centred(k, reach=2)
    manifold = traj.manifold
    p = traj.p
    at = a_tilde(p, m)

    t_prev, t, t_next = (float(traj.times[j]) for j in (k - 1, k, k + 1))
    span = t_next - t_prev
    alpha = alpha_fn(t)
    alpha_rate = (alpha_fn(t_next) - alpha_fn(t_prev)) / span
    varphi_rate = (varphi_fn(t_next) - varphi_fn(t_prev)) / span

    f_prev = _quantity(traj, k - 1, alpha_fn(t_prev), varphi_fn(t_prev))
    f_now = _quantity(traj, k, alpha, varphi_fn(t))
    f_next = _quantity(traj, k + 1, alpha_fn(t_next), varphi_fn(t_next))

    v = traj.pressures[k]
    v_t = traj.pressure_rate(k)
    grad_v = gradient_array(v, manifold)
    grad_f = gradient_array(f_now, manifold)
    lap_v = drift_laplacian_array(v, manifold)

    operator = (f_next - f_prev) / span - (p - 1.0) * v * drift_laplacian_array(f_now, manifold)

    ricci = bakry_emery_tensor(manifold, m).quadratic_form(VectorField(manifold, grad_v)).values
    ratio = v_t / v
    rhs = (
        -((p - 1.0) * lap_v) ** 2 / at
        - 2.0 * (p - 1.0) * ricci
        + 2.0 * p * np.sum(grad_v * grad_f, axis=0)
        + (1.0 - alpha) * ratio ** 2
        - alpha_rate * ratio
        - varphi_rate
    )
    residual = rhs - operator if p > 1.0 else operator - rhs
    return ScalarField(manifold, residual)


def residual_scale(traj: Trajectory, k: int, m: float) -> float:
    """max(1, ‖(p−1)Δ_φv‖∞² / |ã|): the size of the leading term."""
    lap_v = drift_laplacian_array(traj.pressures[k], traj.manifold)
    lead = float(np.max(np.abs((traj.p - 1.0) * lap_v))) ** 2
    return max(1.0, lead / abs(a_tilde(traj.p, m)))
