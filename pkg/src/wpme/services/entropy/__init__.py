from wpme.services.entropy.entropies import (
    nash_entropy,
    nash_entropy_rate,
    w_entropy,
    w_entropy_rate,
    w_entropy_rate_bound_fast,
    w_entropy_rate_expanded,
)
from wpme.services.entropy.identities import laplacian_moment_rates, uv_integral_rates
from wpme.services.entropy.trace import entropy_trace

__all__ = [
    "entropy_trace",
    "laplacian_moment_rates",
    "nash_entropy",
    "nash_entropy_rate",
    "uv_integral_rates",
    "w_entropy",
    "w_entropy_rate",
    "w_entropy_rate_bound_fast",
    "w_entropy_rate_expanded",
]
