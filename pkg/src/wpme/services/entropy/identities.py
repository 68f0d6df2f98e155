"""
Integral identities behind the entropy formulas, compared against centred
differences of the integrals themselves:

    d/dt ∫ uv dμ         = (p−1) ∫ (Δ_φv) uv dμ = −p ∫ |∇v|² u dμ
    d/dt ∫ (Δ_φv) uv dμ  = 2 ∫ [(p−1)(Δ_φv)² + |∇²v|² + Ric_φ(∇v,∇v)] uv dμ
    W                    = d/dt [t·N]
"""

from __future__ import annotations

from typing import Callable, Tuple

import numpy as np

from wpme.services.entropy.entropies import nash_entropy, uv_integral, w_entropy
from wpme.services.geometry.curvature import weighted_ricci
from wpme.services.geometry.fields import SymTensorField, VectorField
from wpme.services.geometry.operators import (
    drift_laplacian_array,
    gradient_array,
    hessian_array,
    weighted_sum,
)
from wpme.services.solver.trajectory import Trajectory


def _centred_rate(traj: Trajectory, k: int, quantity: Callable[[int], float]) -> float:
    traj.require_centred(k)
    return (quantity(k + 1) - quantity(k - 1)) / (traj.times[k + 1] - traj.times[k - 1])


def _laplacian_moment(traj: Trajectory, k: int) -> float:
    v = traj.pressures[k]
    lap_v = drift_laplacian_array(v, traj.manifold)
    return weighted_sum(lap_v * traj.states[k] * v, traj.manifold)


def uv_integral_rates(traj: Trajectory, k: int) -> Tuple[float, float, float]:
    """(centred difference, (p−1)∫(Δ_φv)uv dμ, −p∫|∇v|²u dμ) at snapshot k."""
    fd = _centred_rate(traj, k, lambda j: uv_integral(traj, j))
    p = traj.p
    u, v = traj.states[k], traj.pressures[k]
    manifold = traj.manifold
    middle = (p - 1.0) * weighted_sum(drift_laplacian_array(v, manifold) * u * v, manifold)
    grad_sq = np.sum(gradient_array(v, manifold) ** 2, axis=0)
    right = -p * weighted_sum(grad_sq * u, manifold)
    return fd, middle, right


def laplacian_moment_rates(traj: Trajectory, k: int) -> Tuple[float, float]:
    """(centred difference of ∫(Δ_φv)uv dμ, closed-form rate) at snapshot k."""
    fd = _centred_rate(traj, k, lambda j: _laplacian_moment(traj, j))
    p = traj.p
    manifold = traj.manifold
    u, v = traj.states[k], traj.pressures[k]
    lap_v = drift_laplacian_array(v, manifold)
    hess_sq = SymTensorField(manifold, hessian_array(v, manifold)).frobenius_sq().values
    ricci = weighted_ricci(manifold).quadratic_form(VectorField(manifold, gradient_array(v, manifold))).values
    formula = 2.0 * weighted_sum(((p - 1.0) * lap_v ** 2 + hess_sq + ricci) * u * v, manifold)
    return fd, formula


def w_entropy_consistency(traj: Trajectory, k: int, m: float) -> Tuple[float, float]:
    """(centred difference of t·N, W) at snapshot k."""
    fd = _centred_rate(traj, k, lambda j: traj.times[j] * nash_entropy(traj, j, m))
    return fd, w_entropy(traj, k, m)


def relative_mismatch(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), np.finfo(float).tiny)
