"""
Scalar constants of the gradient estimates.

    ã = m(p−1) / (m(p−1) + 2)
    M = (p−1)·max v         (p > 1)
    M = (1−p)·max(−v)       (0 < p < 1)
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from wpme.exceptions import ParameterError
from wpme.services.solver.trajectory import Trajectory


def _dimensional_constant(p: float, dim: float) -> float:
    denom = dim * (p - 1.0) + 2.0
    if abs(denom) < 1e-12:
        raise ParameterError(
            f"m(p−1)+2 = 0 at p={p:g}, m={dim:g}: p = 1 − 2/m is excluded"
        )
    return dim * (p - 1.0) / denom


def a_tilde(p: float, m: float) -> float:
    """ã; negative throughout the fast range p ∈ (1−2/m, 1)."""
    return _dimensional_constant(p, m)


def a_dimensional(p: float, n: int) -> float:
    """The same constant with the manifold dimension n in place of m."""
    return _dimensional_constant(p, float(n))


def a_tilde_pair(p: float, m: float, n: int) -> Tuple[float, float]:
    return a_tilde(p, m), a_dimensional(p, n)


def fast_range(m: float) -> Tuple[float, float]:
    """Open interval (1 − 2/m, 1) on which the fast-diffusion estimates apply."""
    return 1.0 - 2.0 / m, 1.0


def nonlinearity_scale(traj: Trajectory, window_end: Optional[float] = None) -> float:
    """
    M over the snapshots with t ≤ window_end (the whole trajectory by default).
    Equal to p·max u^{p−1} in both regimes.
    """
    end = traj.times[-1] if window_end is None else window_end
    window = traj.window_indices(end)
    if not window:
        raise ParameterError(f"no snapshots with t <= {end:g}")
    v = traj.pressures[window]
    p = traj.p
    if p > 1.0:
        return float((p - 1.0) * np.max(v))
    return float((1.0 - p) * np.max(-v))


def feasibility_A(p: float, m: float, alpha: float, eps1: float, eps2: float) -> float:
    """
    A(ε₁, ε₂) = [1 − ã(1−α)] − (1+ε₂)²(1−ã)²(1−α) / ((1−ε₁)(1−α−ã)).

    The fast-diffusion Li–Yau bound with 0 < α < 1 needs A > 0; this only
    evaluates the given point.
    """
    if eps1 == 1.0:
        raise ParameterError("ε₁ = 1 makes A(ε₁, ε₂) singular")
    at = a_tilde(p, m)
    if abs(alpha + at - 1.0) < 1e-15:
        raise ParameterError(f"α + ã = 1 makes A(ε₁, ε₂) singular (α={alpha:g}, ã={at:g})")

    lo, hi = fast_range(m)
    if not lo < p < hi:
        raise ParameterError(f"p must lie in ({lo:g}, 1) for m={m:g}, got p={p:g}")
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"0 < α < 1 required, got α={alpha:g}")
    for label, eps in (("ε₁", eps1), ("ε₂", eps2)):
        if not 0.0 < eps < 1.0 or not math.isfinite(eps):
            raise ParameterError(f"{label} must lie in (0, 1), got {eps:g}")

    head = 1.0 - at * (1.0 - alpha)
    tail = (1.0 + eps2) ** 2 * (1.0 - at) ** 2 * (1.0 - alpha) / ((1.0 - eps1) * (1.0 - alpha - at))
    return head - tail
