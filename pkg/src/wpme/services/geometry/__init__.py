"""
Geometry kernel: model manifolds, discrete operators and Bakry–Émery curvature.
"""
from wpme.services.geometry.manifold import ManifoldKind, ManifoldSpec, PhiKind
from wpme.services.geometry.fields import ScalarField, SymTensorField, VectorField
from wpme.services.geometry.operators import (
    gradient,
    hessian,
    symmetry_defect,
    weighted_integral,
    witten_laplacian,
)
from wpme.services.geometry.curvature import CurvatureReport, bakry_emery
from wpme.services.geometry.bochner import bochner_defect, hessian_trace_slack, operator_slack

__all__ = [
    "ManifoldKind", "ManifoldSpec", "PhiKind",
    "ScalarField", "SymTensorField", "VectorField",
    "gradient", "hessian", "symmetry_defect", "weighted_integral", "witten_laplacian",
    "CurvatureReport", "bakry_emery",
    "bochner_defect", "hessian_trace_slack", "operator_slack",
]
