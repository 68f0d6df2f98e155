"""
Time-dependent coefficient schedules α(t), φ(t) of the curvature-aware estimates.

All schedules depend on (ã, M, K) only through the product MK and take their
analytic limits when MK → 0.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Callable, Optional, Tuple

from wpme.config.settings import NumericsConfig
from wpme.exceptions import ParameterError


def _check_time(t: float) -> None:
    if not t > 0.0:
        raise ParameterError(f"schedules need t > 0, got t={t:g}")


def hamilton_alpha(mk: float, t: float) -> float:
    """α(t) = e^{2MKt}."""
    return math.exp(2.0 * mk * t)


def hyperbolic_schedule(a_t: float, mk: float, t: float) -> Tuple[float, float]:
    """
    (φ(t), α(t)) with s = MKt:
        φ(t) = ãMK(coth s + 1) = ã(s·coth s / t + MK)
        α(t) = 1 + (cosh s·sinh s − s) / sinh² s
    Small s uses s·coth s ≈ 1 + s²/3 and α − 1 ≈ (2s/3)(1 − 2s²/15).
    """
    _check_time(t)
    s = mk * t
    if s < NumericsConfig.MK_SERIES_CUTOFF:
        s_coth = 1.0 + s * s / 3.0
        alpha = 1.0 + (2.0 * s / 3.0) * (1.0 - 2.0 * s * s / 15.0)
    else:
        sinh = math.sinh(s)
        s_coth = s * math.cosh(s) / sinh
        alpha = 1.0 + (math.cosh(s) * sinh - s) / (sinh * sinh)
    return a_t * (s_coth / t + mk), alpha


def linear_schedule(a_t: float, mk: float, t: float) -> Tuple[float, float]:
    """φ(t) = ã/t + ãMK + (ã/3)(MK)²t,  α(t) = 1 + (2/3)MKt."""
    _check_time(t)
    phi = a_t / t + a_t * mk + (a_t / 3.0) * mk * mk * t
    return phi, 1.0 + (2.0 / 3.0) * mk * t


def small_time_bound(a_t: float, mk: float, t: float) -> float:
    """2ãMK + ã/t; dominates both schedules' φ(t) while MKt stays small."""
    _check_time(t)
    return 2.0 * a_t * mk + a_t / t


class ScheduleKind(str, Enum):
    """Coefficient pair (α(t), φ(t)) fed to the differential inequality."""
    CONSTANT = "constant"                   # α given (default 1), φ ≡ 0
    HAMILTON = "hamilton"                   # α = e^{2MKt}, φ = ãα²/t
    LI_XU_HYPERBOLIC = "li_xu_hyperbolic"
    LI_XU_LINEAR = "li_xu_linear"


def coefficient_schedule(
    kind: ScheduleKind,
    a_t: float,
    mk: float,
    alpha: Optional[float] = None,
) -> Tuple[Callable[[float], float], Callable[[float], float]]:
    """(α(t), φ(t)) as callables. A constant α only goes with kind = constant."""
    kind = ScheduleKind(kind)
    if kind == ScheduleKind.CONSTANT:
        value = 1.0 if alpha is None else alpha
        return (lambda _t: value), (lambda _t: 0.0)
    if alpha is not None:
        raise ParameterError(f"schedule '{kind.value}' sets α(t) itself; drop alpha")
    if kind == ScheduleKind.HAMILTON:
        return (
            lambda t: hamilton_alpha(mk, t),
            lambda t: a_t * hamilton_alpha(mk, t) ** 2 / t,
        )
    pair = hyperbolic_schedule if kind == ScheduleKind.LI_XU_HYPERBOLIC else linear_schedule
    return (lambda t: pair(a_t, mk, t)[1]), (lambda t: pair(a_t, mk, t)[0])
