"""
Weighted Bochner formula, evaluated with the discrete operators.

    ½Δ_φ|∇w|² = |∇²w|² + ∇w·∇Δ_φw + Ric_φ(∇w, ∇w)
              ≥ (1/m)(Δ_φw)² + ∇w·∇Δ_φw + Ric_φ^m(∇w, ∇w)
"""

from __future__ import annotations

from typing import Tuple

from wpme.services.geometry.curvature import bakry_emery_tensor, weighted_ricci
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.operators import (
    gradient,
    hessian,
    pointwise_drift_laplacian,
    witten_laplacian,
)


def bochner_defect(w: ScalarField, m: float) -> Tuple[ScalarField, ScalarField]:
    """
    Returns (equality defect, inequality slack).

    The equality defect is pure discretization error. The slack uses the
    pointwise drift Laplacian tr ∇²w − ∇φ·∇w in its (1/m) term.
    """
    manifold = w.manifold
    ric_m = bakry_emery_tensor(manifold, m)

    grad_w = gradient(w)
    hess_w = hessian(w)
    half_lap_grad_sq = 0.5 * witten_laplacian(grad_w.norm_sq())
    transport = grad_w.dot(gradient(witten_laplacian(w)))

    defect = (
        half_lap_grad_sq
        - hess_w.frobenius_sq()
        - transport
        - weighted_ricci(manifold).quadratic_form(grad_w)
    )

    lap_pointwise = pointwise_drift_laplacian(w)
    slack = (
        half_lap_grad_sq
        - lap_pointwise.map(lambda x: x * x / m)
        - transport
        - ric_m.quadratic_form(grad_w)
    )
    return defect, slack


def hessian_trace_slack(w: ScalarField) -> ScalarField:
    """|∇²w|² − (1/n)(tr ∇²w)², nonnegative per node."""
    hess_w = hessian(w)
    n = w.manifold.n
    return hess_w.frobenius_sq() - hess_w.trace().map(lambda x: x * x / n)


def operator_slack(w: ScalarField, m: float) -> ScalarField:
    """
    The inequality slack with the conservative Δ_φw in its (1/m) term.

    It differs from the pointwise slack by (1/m)[(tr ∇²w − ∇φ·∇w)² − (Δ_φw)²],
    which vanishes at second order under refinement.
    """
    grad_w = gradient(w)
    return (
        0.5 * witten_laplacian(grad_w.norm_sq())
        - witten_laplacian(w).map(lambda x: x * x / m)
        - grad_w.dot(gradient(witten_laplacian(w)))
        - bakry_emery_tensor(w.manifold, m).quadratic_form(grad_w)
    )
