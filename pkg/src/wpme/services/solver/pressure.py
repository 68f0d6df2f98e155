"""
Pressure variable v = p/(p−1)·u^{p−1} and the pressure-equation residual

    v_t = (p−1)·v·Δ_φv + |∇v|²
"""

from __future__ import annotations

import numpy as np

from wpme.exceptions import ParameterError
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.operators import drift_laplacian_array, gradient_array
from wpme.services.solver.trajectory import Trajectory


def pressure_array(u: np.ndarray, p: float) -> np.ndarray:
    if p == 1.0:
        raise ParameterError("p≠1 required for the pressure variable")
    return p / (p - 1.0) * u ** (p - 1.0)


def pressure(u: ScalarField, p: float) -> ScalarField:
    """Positive for p > 1, negative for 0 < p < 1."""
    if np.any(u.values <= 0.0):
        raise ParameterError("pressure needs strictly positive u")
    return ScalarField(u.manifold, pressure_array(u.values, p))


def pressure_residual(traj: Trajectory, k: int) -> ScalarField:
    """Centred v_t minus the right-hand side of the pressure equation at snapshot k."""
    traj.require_centred(k)
    manifold = traj.manifold
    v = traj.pressures[k]
    grad_sq = np.sum(gradient_array(v, manifold) ** 2, axis=0)
    rhs = (traj.p - 1.0) * v * drift_laplacian_array(v, manifold) + grad_sq
    return ScalarField(manifold, traj.pressure_rate(k) - rhs)
