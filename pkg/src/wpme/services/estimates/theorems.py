"""
Right-hand sides of the global (compact / R→∞) Li–Yau type estimates.

Every estimate is read as  LHS(α) ≤ RHS  with
    LHS(α) = σ·(|∇v|²/v − α·v_t/v),   σ = +1 (p > 1), −1 (0 < p < 1)
so the margin is RHS − LHS. For the schedule forms RHS is φ(t) and α is α(t).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from wpme.config.settings import NumericsConfig
from wpme.exceptions import ParameterError, UnsupportedEstimateError
from wpme.services.estimates.constants import a_tilde, fast_range
from wpme.services.estimates.schedules import (
    hamilton_alpha,
    hyperbolic_schedule,
    linear_schedule,
    small_time_bound,
)


class EstimateId(str, Enum):
    POROUS_LI_YAU = "porous_li_yau"
    FAST_LI_YAU_LIMIT = "fast_li_yau_limit"
    POROUS_LI_YAU_SHARP = "porous_li_yau_sharp"
    FAST_DAVIES = "fast_davies"
    POROUS_HAMILTON = "porous_hamilton"
    POROUS_LI_XU_HYPERBOLIC = "porous_li_xu_hyperbolic"
    POROUS_LI_XU_LINEAR = "porous_li_xu_linear"
    SMALL_TIME_COMBINED = "small_time_combined"

    @property
    def is_fast(self) -> bool:
        return self in (EstimateId.FAST_LI_YAU_LIMIT, EstimateId.FAST_DAVIES)

    @property
    def uses_schedule(self) -> bool:
        """α(t) comes from a schedule instead of the parameters."""
        return self in _SCHEDULED


_SCHEDULED = frozenset({
    EstimateId.POROUS_HAMILTON,
    EstimateId.POROUS_LI_XU_HYPERBOLIC,
    EstimateId.POROUS_LI_XU_LINEAR,
    EstimateId.SMALL_TIME_COMBINED,
})


@dataclass(frozen=True)
class EstimateParams:
    p: float
    m: float
    K: float
    M: float
    alpha: Optional[float] = None
    t_check_min: float = NumericsConfig.T_CHECK_MIN
    tol: Optional[float] = None
    mkt_max: float = NumericsConfig.SMALL_TIME_MKT_MAX

    @property
    def a_tilde(self) -> float:
        return a_tilde(self.p, self.m)

    @property
    def mk(self) -> float:
        return self.M * self.K


@dataclass(frozen=True)
class TheoremBound:
    rhs: float
    alpha: float


def validate_estimate(check: EstimateId, params: EstimateParams) -> None:
    """Regime and parameter constraints of each estimate. Raises ParameterError."""
    check = EstimateId(check)
    p, m = params.p, params.m
    if params.K < 0.0:
        raise ParameterError(f"K must be >= 0, got {params.K:g}")
    if not params.M > 0.0:
        raise ParameterError(f"M must be > 0, got {params.M:g}")
    if not params.t_check_min > 0.0:
        raise ParameterError(f"t_check_min must be > 0, got {params.t_check_min:g}")

    if check.is_fast:
        lo, hi = fast_range(m)
        if not lo < p < hi:
            raise ParameterError(f"{check.value} needs p in ({lo:g}, 1) for m={m:g}, got p={p:g}")
    elif p <= 1.0:
        raise ParameterError(f"{check.value} needs p > 1, got p={p:g}")

    if check in (EstimateId.POROUS_LI_YAU, EstimateId.POROUS_LI_YAU_SHARP):
        if params.alpha is None or not params.alpha > 1.0:
            raise ParameterError(f"{check.value} needs a constant α > 1, got α={params.alpha}")
    elif check == EstimateId.FAST_DAVIES:
        if params.alpha is None or not 0.0 < params.alpha < 1.0:
            raise ParameterError(f"{check.value} needs 0 < α < 1, got α={params.alpha}")
    elif check == EstimateId.FAST_LI_YAU_LIMIT and params.K > 0.0:
        raise UnsupportedEstimateError(
            f"{check.value} has a global form only for Ric_φ^m ≥ 0 (K=0), got K={params.K:g}"
        )

    a_tilde(p, m)  # raises at p = 1 − 2/m


def theorem_rhs(check: EstimateId, params: EstimateParams, t: float) -> TheoremBound:
    check = EstimateId(check)
    if not t > 0.0:
        raise ParameterError(f"estimates are evaluated at t > 0, got t={t:g}")
    at = params.a_tilde
    mk = params.mk
    alpha = params.alpha

    if check == EstimateId.POROUS_LI_YAU:
        return TheoremBound(alpha * alpha / (alpha - 1.0) * at * mk + at * alpha * alpha / t, alpha)
    if check == EstimateId.FAST_LI_YAU_LIMIT:
        if params.K > 0.0:
            raise UnsupportedEstimateError(f"{check.value} requires K = 0")
        return TheoremBound(-at / t, 1.0)
    if check == EstimateId.POROUS_LI_YAU_SHARP:
        return TheoremBound(alpha * alpha / (2.0 * (alpha - 1.0)) * at * mk + at * alpha * alpha / t, alpha)
    if check == EstimateId.FAST_DAVIES:
        k_term = (alpha * alpha / (2.0 * (1.0 - alpha)) + 2.0 * (1.0 - at)) * mk
        return TheoremBound(k_term + (1.0 - alpha - at) / t, alpha)
    if check == EstimateId.POROUS_HAMILTON:
        alpha_t = hamilton_alpha(mk, t)
        return TheoremBound(at * alpha_t * alpha_t / t, alpha_t)
    if check == EstimateId.POROUS_LI_XU_HYPERBOLIC:
        phi, alpha_t = hyperbolic_schedule(at, mk, t)
        return TheoremBound(phi, alpha_t)
    if check == EstimateId.POROUS_LI_XU_LINEAR:
        phi, alpha_t = linear_schedule(at, mk, t)
        return TheoremBound(phi, alpha_t)
    if check == EstimateId.SMALL_TIME_COMBINED:
        _, alpha_t = linear_schedule(at, mk, t)
        return TheoremBound(small_time_bound(at, mk, t), alpha_t)
    raise UnsupportedEstimateError(f"no bound for {check}")
