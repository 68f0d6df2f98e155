"""
m-dimensional Bakry–Émery Ricci curvature on flat model manifolds.

With a flat base, Ric ≡ 0 and
    Ric_φ   = ∇²φ
    Ric_φ^m = ∇²φ − (∇φ ⊗ ∇φ)/(m − n)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wpme.config.settings import NumericsConfig
from wpme.exceptions import ParameterError
from wpme.services.geometry.fields import SymTensorField, outer
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.geometry.operators import hessian, phi_field, phi_gradient


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    m: float
    tensor: SymTensorField
    lambda_min: float
    K: float
    nonneg: bool
    tol_eig: float
    argmin_node: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "lambda_min": self.lambda_min,
            "K": self.K,
            "nonneg": self.nonneg,
            "tol_eig": self.tol_eig,
            "argmin_node": self.argmin_node,
        }


def validate_dimension_parameter(manifold: ManifoldSpec, m: float) -> bool:
    """
    Check the admissible range of m for Ric_φ^m.
    Returns True when the (m − n) term is active, False when it is dropped
    (m = n with constant φ).
    """
    if not math.isfinite(m):
        raise ParameterError(f"m must be finite, got {m}")
    n = manifold.n
    if m > n:
        return True
    if m == n and manifold.phi_is_constant:
        return False
    raise ParameterError(f"m must exceed n (m={m}, n={n})")


def weighted_ricci(manifold: ManifoldSpec) -> SymTensorField:
    """Ric_φ = ∇²φ."""
    return hessian(phi_field(manifold))


def bakry_emery_tensor(manifold: ManifoldSpec, m: float) -> SymTensorField:
    ric_phi = weighted_ricci(manifold)
    if not validate_dimension_parameter(manifold, m):
        return ric_phi
    dphi = outer(phi_gradient(manifold))
    return SymTensorField(manifold, ric_phi.entries - dphi.entries / (m - manifold.n))


def bakry_emery(manifold: ManifoldSpec, m: float) -> CurvatureReport:
    """Curvature report for Ric_φ^m with K = max(0, −λ_min)."""
    tensor = bakry_emery_tensor(manifold, m)
    eigen = tensor.min_eigenvalue()
    lambda_min = eigen.min()
    tol_eig = NumericsConfig.EIG_TOL_FACTOR * (1.0 + tensor.sup_norm())
    return CurvatureReport(
        m=float(m),
        tensor=tensor,
        lambda_min=lambda_min,
        K=max(0.0, -lambda_min),
        nonneg=bool(lambda_min >= -tol_eig),
        tol_eig=tol_eig,
        argmin_node=int(np.argmin(eigen.values)),
    )
