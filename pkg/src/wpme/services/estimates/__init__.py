from wpme.services.estimates.checks import check_estimate, liyau_lhs
from wpme.services.estimates.constants import (
    a_tilde,
    a_tilde_pair,
    feasibility_A,
    nonlinearity_scale,
)
from wpme.services.estimates.differential_inequality import differential_inequality_residual
from wpme.services.estimates.schedules import ScheduleKind, coefficient_schedule
from wpme.services.estimates.theorems import (
    EstimateId,
    EstimateParams,
    TheoremBound,
    theorem_rhs,
    validate_estimate,
)

__all__ = [
    "EstimateId",
    "EstimateParams",
    "ScheduleKind",
    "TheoremBound",
    "a_tilde",
    "a_tilde_pair",
    "check_estimate",
    "coefficient_schedule",
    "differential_inequality_residual",
    "feasibility_A",
    "liyau_lhs",
    "nonlinearity_scale",
    "theorem_rhs",
    "validate_estimate",
]
