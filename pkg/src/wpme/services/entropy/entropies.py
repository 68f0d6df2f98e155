"""
Nash-type and W-type entropies of a porous-medium / fast-diffusion trajectory.

    N(t) = −t^ã ∫ uv dμ
    W(t) = d/dt[tN] = t^{ã+1} ∫ (p|∇v|²/v − (ã+1)/t) uv dμ

with their closed-form time derivatives. All integrals use the discrete
weighted quadrature; c = m(p−1)+2 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from wpme.exceptions import ParameterError
from wpme.services.estimates.constants import a_tilde
from wpme.services.geometry.curvature import (
    bakry_emery_tensor,
    validate_dimension_parameter,
    weighted_ricci,
)
from wpme.services.geometry.fields import SymTensorField, VectorField
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.geometry.operators import (
    drift_laplacian_array,
    gradient_array,
    hessian_array,
    weighted_sum,
)
from wpme.services.solver.trajectory import Trajectory

WINDOW_SLACK = 1e-12


@dataclass(frozen=True)
class _Snapshot:
    """Everything the entropy formulas read at one snapshot."""

    manifold: ManifoldSpec
    t: float
    p: float
    m: float
    a_tilde: float
    u: np.ndarray
    v: np.ndarray

    @property
    def c(self) -> float:
        return self.m * (self.p - 1.0) + 2.0

    @property
    def uv(self) -> np.ndarray:
        return self.u * self.v

    def grad_v(self) -> np.ndarray:
        return gradient_array(self.v, self.manifold)

    def lap_v(self) -> np.ndarray:
        return drift_laplacian_array(self.v, self.manifold)

    def hess_v(self) -> SymTensorField:
        return SymTensorField(self.manifold, hessian_array(self.v, self.manifold))

    def integral(self, density: np.ndarray) -> float:
        return weighted_sum(density, self.manifold)


def _snapshot(traj: Trajectory, k: int, m: float) -> _Snapshot:
    t = traj.time(k)
    if not t > 0.0:
        raise ParameterError(f"entropies are evaluated at t > 0, got t={t:g} at snapshot {k}")
    return _Snapshot(
        manifold=traj.manifold,
        t=t,
        p=traj.p,
        m=m,
        a_tilde=a_tilde(traj.p, m),
        u=traj.states[k],
        v=traj.pressures[k],
    )


# ═══════════════════════════════════════════════════════════════════
# ENTROPIES
# ═══════════════════════════════════════════════════════════════════

def uv_integral(traj: Trajectory, k: int) -> float:
    """∫ uv dμ at snapshot k."""
    return weighted_sum(traj.states[k] * traj.pressures[k], traj.manifold)


def nash_entropy(traj: Trajectory, k: int, m: float) -> float:
    s = _snapshot(traj, k, m)
    return -s.t ** s.a_tilde * s.integral(s.uv)


def w_entropy(traj: Trajectory, k: int, m: float) -> float:
    s = _snapshot(traj, k, m)
    grad_sq = np.sum(s.grad_v() ** 2, axis=0)
    density = s.p * grad_sq * s.u - (s.a_tilde + 1.0) / s.t * s.uv
    return s.t ** (s.a_tilde + 1.0) * s.integral(density)


# ═══════════════════════════════════════════════════════════════════
# RATES
# ═══════════════════════════════════════════════════════════════════

def _nash_density(s: _Snapshot) -> np.ndarray:
    return ((s.p - 1.0) * s.lap_v() + s.a_tilde / s.t) * s.uv


def nash_entropy_rate(traj: Trajectory, k: int, m: float) -> float:
    """dN/dt = −t^ã ∫ ((p−1)Δ_φv + ã/t) uv dμ."""
    s = _snapshot(traj, k, m)
    return -s.t ** s.a_tilde * s.integral(_nash_density(s))


def _w_rate_density(s: _Snapshot) -> np.ndarray:
    """Integrand of the completed-square W-rate, without the −2t^{ã+1} factor."""
    manifold = s.manifold
    active = validate_dimension_parameter(manifold, s.m)
    ct = s.c * s.t
    grad_v = s.grad_v()

    hess_sq = s.hess_v().plus_identity(1.0 / ct).frobenius_sq().values
    ricci = bakry_emery_tensor(manifold, s.m).quadratic_form(VectorField(manifold, grad_v)).values
    geometric = hess_sq + ricci
    if active:
        excess = s.m - manifold.n
        drift = np.sum(gradient_array(manifold.phi, manifold) * grad_v, axis=0)
        geometric = geometric + (drift - excess / ct) ** 2 / excess

    square = ((s.p - 1.0) * s.lap_v() + s.a_tilde / s.t) ** 2
    return ((s.p - 1.0) * geometric + square) * s.uv


def w_entropy_rate(traj: Trajectory, k: int, m: float) -> float:
    """
    dW/dt = −2(p−1)t^{ã+1} ∫ { |∇²v + g/(ct)|² + (1/(m−n))(∇φ·∇v − (m−n)/(ct))²
                               + Ric_φ^m(∇v,∇v) } uv dμ
            − 2t^{ã+1} ∫ ((p−1)Δ_φv + ã/t)² uv dμ

    The (m−n) term is dropped for m = n with constant φ.
    """
    s = _snapshot(traj, k, m)
    return -2.0 * s.t ** (s.a_tilde + 1.0) * s.integral(_w_rate_density(s))


def w_entropy_rate_expanded(traj: Trajectory, k: int, m: float) -> float:
    """
    The same rate before completing squares:
        −2t^{ã+1} ∫ [ (p−1)²(Δ_φv)² + (p−1)|∇²v|² + (p−1)Ric_φ(∇v,∇v)
                      + (p−1)(ã+1)Δ_φv/t + (ã²+ã)/(2t²) ] uv dμ
    """
    s = _snapshot(traj, k, m)
    manifold = s.manifold
    at, t, a = s.a_tilde, s.t, s.p - 1.0
    lap_v = s.lap_v()
    ricci = weighted_ricci(manifold).quadratic_form(VectorField(manifold, s.grad_v())).values
    density = (
        a * a * lap_v ** 2
        + a * s.hess_v().frobenius_sq().values
        + a * ricci
        + a * (at + 1.0) * lap_v / t
        + (at * at + at) / (2.0 * t * t)
    ) * s.uv
    return -2.0 * t ** (at + 1.0) * s.integral(density)


def fast_bound_coefficients(p: float, m: float, n: int, eps: float, active: bool = True) -> Tuple[float, float]:
    """
    (A, B) of the fast-diffusion W-rate bound, after checking the admissible window
        ε ≥ m−n,   1 − 1/(n+ε) ≤ p ≤ 1 − (m−n)/(mε)
    which is exactly where A ≥ 0 and B ≥ 0. B is 0 when the (m−n) term is dropped.
    """
    if not 0.0 < p < 1.0:
        raise ParameterError(f"the fast-diffusion W bound needs 0 < p < 1, got p={p:g}")
    if not eps > 0.0:
        raise ParameterError(f"ε must be > 0, got ε={eps:g}")
    lower = 1.0 - 1.0 / (n + eps)
    if active:
        excess = m - n
        upper = 1.0 - excess / (m * eps)
        if eps < excess - WINDOW_SLACK:
            raise ParameterError(f"ε ≥ m−n required (ε={eps:g}, m−n={excess:g})")
    else:
        upper = 1.0
    if not lower - WINDOW_SLACK <= p <= upper + WINDOW_SLACK:
        raise ParameterError(
            f"p={p:g} outside the admissible window [{lower:g}, {upper:g}] for ε={eps:g}, m={m:g}, n={n}"
        )
    A = (1.0 - n * (1.0 - p)) / (n * (1.0 - p)) - eps / n
    B = m * (1.0 - p) / (n * (m - n)) - 1.0 / (n * eps) if active else 0.0
    return A, B


def w_entropy_rate_bound_fast(traj: Trajectory, k: int, m: float, eps: float) -> float:
    """
    2t^{ã+1} ∫ { (1−p)Ric_φ^m(∇v,∇v) + A((p−1)Δ_φv + ã/t)² + B(∇φ·∇v − (m−n)/(ct))² } uv dμ

    an upper bound for dW/dt when 0 < p < 1 and (ε, p) lies in the admissible window.
    """
    s = _snapshot(traj, k, m)
    manifold = s.manifold
    active = validate_dimension_parameter(manifold, m)
    A, B = fast_bound_coefficients(s.p, m, manifold.n, eps, active)

    grad_v = s.grad_v()
    ricci = bakry_emery_tensor(manifold, m).quadratic_form(VectorField(manifold, grad_v)).values
    density = (1.0 - s.p) * ricci + A * ((s.p - 1.0) * s.lap_v() + s.a_tilde / s.t) ** 2
    if active:
        drift = np.sum(gradient_array(manifold.phi, manifold) * grad_v, axis=0)
        density = density + B * (drift - (m - manifold.n) / (s.c * s.t)) ** 2
    return 2.0 * s.t ** (s.a_tilde + 1.0) * s.integral(density * s.uv)


def rate_scales(traj: Trajectory, k: int, m: float) -> Tuple[float, float]:
    """L¹ sizes of the N- and W-rate integrands, used to scale gate tolerances."""
    s = _snapshot(traj, k, m)
    n_scale = s.t ** s.a_tilde * s.integral(np.abs(_nash_density(s)))
    w_scale = 2.0 * s.t ** (s.a_tilde + 1.0) * s.integral(np.abs(_w_rate_density(s)))
    return max(n_scale, np.finfo(float).tiny), max(w_scale, np.finfo(float).tiny)

