"""
Discrete differential operators on periodic uniform grids.

The drift (Witten) Laplacian is assembled in divergence form
    Δ_φf_j = (1/w_j) Σ_axes [w_{j+½}(f_{j+1} − f_j) − w_{j−½}(f_j − f_{j−1})] / h²
so that it is exactly symmetric in the discrete weighted inner product,
annihilates constants and integrates to zero against dμ up to round-off.
Gradient and Hessian use centred differences.
"""

from __future__ import annotations

import numpy as np

from wpme.services.geometry.fields import (
    ScalarField,
    SymTensorField,
    VectorField,
    ensure_same_manifold,
)
from wpme.services.geometry.manifold import ManifoldSpec


def _ahead(values: np.ndarray, axis: int, steps: int = 1) -> np.ndarray:
    """values at j + steps along axis (periodic)."""
    return np.roll(values, -steps, axis=axis)


# ═══════════════════════════════════════════════════════════════════
# ARRAY KERNELS (used on the solver hot path)
# ═══════════════════════════════════════════════════════════════════

def gradient_array(values: np.ndarray, manifold: ManifoldSpec) -> np.ndarray:
    out = np.empty((manifold.n, *manifold.shape))
    for axis, h in enumerate(manifold.spacings):
        out[axis] = (_ahead(values, axis, 1) - _ahead(values, axis, -1)) / (2.0 * h)
    return out


def hessian_array(values: np.ndarray, manifold: ManifoldSpec) -> np.ndarray:
    spacings = manifold.spacings

    def second(axis: int) -> np.ndarray:
        h = spacings[axis]
        return (_ahead(values, axis, 1) - 2.0 * values + _ahead(values, axis, -1)) / (h * h)

    if manifold.n == 1:
        return second(0)[np.newaxis]

    hx, hy = spacings
    xp = _ahead(values, 0, 1)
    xm = _ahead(values, 0, -1)
    cross = (
        _ahead(xp, 1, 1) - _ahead(xp, 1, -1) - _ahead(xm, 1, 1) + _ahead(xm, 1, -1)
    ) / (4.0 * hx * hy)
    return np.stack([second(0), cross, second(1)])


def drift_laplacian_array(values: np.ndarray, manifold: ManifoldSpec) -> np.ndarray:
    total = np.zeros(manifold.shape)
    for axis, h in enumerate(manifold.spacings):
        flux = manifold.half_weight(axis) * (_ahead(values, axis, 1) - values)
        total += (flux - _ahead(flux, axis, -1)) / (h * h)
    return total / manifold.weight


def weighted_sum(values: np.ndarray, manifold: ManifoldSpec) -> float:
    return float(np.sum(values * manifold.weight) * manifold.cell_volume)


# ═══════════════════════════════════════════════════════════════════
# FIELD OPERATORS
# ═══════════════════════════════════════════════════════════════════

def gradient(f: ScalarField) -> VectorField:
    return VectorField(f.manifold, gradient_array(f.values, f.manifold))


def hessian(f: ScalarField) -> SymTensorField:
    """Second centred differences on the diagonal, 4-point centred cross difference off it."""
    return SymTensorField(f.manifold, hessian_array(f.values, f.manifold))


def witten_laplacian(f: ScalarField) -> ScalarField:
    """Δ_φf = Δf − ∇φ·∇f in weighted divergence form."""
    return ScalarField(f.manifold, drift_laplacian_array(f.values, f.manifold))


def weighted_integral(f: ScalarField) -> float:
    """∫ f dμ = Σ f_j e^{−φ_j} · cell volume."""
    return weighted_sum(f.values, f.manifold)


def symmetry_defect(u: ScalarField, v: ScalarField) -> float:
    """|∫ u Δ_φv dμ − ∫ v Δ_φu dμ|."""
    manifold = ensure_same_manifold(u, v)
    lhs = weighted_sum(u.values * drift_laplacian_array(v.values, manifold), manifold)
    rhs = weighted_sum(v.values * drift_laplacian_array(u.values, manifold), manifold)
    return abs(lhs - rhs)


def phi_field(manifold: ManifoldSpec) -> ScalarField:
    return ScalarField(manifold, manifold.phi)


def phi_gradient(manifold: ManifoldSpec) -> VectorField:
    return VectorField(manifold, gradient_array(manifold.phi, manifold))


def pointwise_drift_laplacian(f: ScalarField) -> ScalarField:
    """tr ∇²f − ∇φ·∇f from the centred Hessian and gradient."""
    manifold = f.manifold
    trace = hessian(f).trace().values
    drift = np.sum(gradient_array(manifold.phi, manifold) * gradient_array(f.values, manifold), axis=0)
    return ScalarField(manifold, trace - drift)
