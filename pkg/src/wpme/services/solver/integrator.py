"""
Explicit time stepping for u_t = Δ_φ(u^p) on a closed model manifold.

Euler:  u_{k+1} = u_k + dt·Δ_φ(u_k^p)
RK4:    classical four-stage analogue

Mass ∫u dμ is conserved to round-off because the discrete Δ_φ integrates to
zero against dμ.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from wpme.config.settings import NumericsConfig
from wpme.exceptions import NonFiniteStateError, PositivityBreachError
from wpme.services.common import Stopwatch, log_debug, log_info, log_warning
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.geometry.operators import drift_laplacian_array, gradient_array
from wpme.services.solver.config import Scheme, SolverConfig
from wpme.services.solver.trajectory import Trajectory


def _rate(manifold: ManifoldSpec, p: float) -> Callable[[np.ndarray], np.ndarray]:
    def rate(u: np.ndarray) -> np.ndarray:
        return drift_laplacian_array(u ** p, manifold)
    return rate


def _euler_step(rate, u: np.ndarray, dt: float) -> np.ndarray:
    return u + dt * rate(u)


def _rk4_step(rate, u: np.ndarray, dt: float) -> np.ndarray:
    k1 = rate(u)
    k2 = rate(u + 0.5 * dt * k1)
    k3 = rate(u + 0.5 * dt * k2)
    k4 = rate(u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


_STEPPERS = {
    Scheme.EXPLICIT_EULER: (_euler_step, NumericsConfig.EULER_STABILITY_RADIUS),
    Scheme.RK4: (_rk4_step, NumericsConfig.RK4_STABILITY_RADIUS),
}


def peak_diffusivity(u: np.ndarray, p: float) -> float:
    """max_j p·u_j^{p−1}."""
    return float(p * np.max(u ** (p - 1.0)))


def auto_time_step(u0: ScalarField, p: float, cfl_fraction: float) -> float:
    """dt = cfl·h_min² / (n·p·max u^{p−1}·(1 + ‖∇φ‖∞·h_min))."""
    manifold = u0.manifold
    h = manifold.h_min
    grad_phi = float(np.max(np.abs(gradient_array(manifold.phi, manifold))))
    return cfl_fraction * h * h / (manifold.n * peak_diffusivity(u0.values, p) * (1.0 + grad_phi * h))


def spectral_radius_bound(u: ScalarField, p: float) -> float:
    """Gershgorin bound on the spectral radius of the linearised operator Δ_φ ∘ diag(p u^{p−1})."""
    manifold = u.manifold
    row = np.zeros(manifold.shape)
    for axis, h in enumerate(manifold.spacings):
        w_half = manifold.half_weight(axis)
        row += (w_half + np.roll(w_half, 1, axis=axis)) / (h * h)
    row /= manifold.weight
    return 2.0 * float(np.max(row)) * peak_diffusivity(u.values, p)


def stability_bound(u: ScalarField, cfg: SolverConfig) -> float:
    _, radius = _STEPPERS[cfg.scheme]
    return radius / spectral_radius_bound(u, cfg.p)


def _guard(u: np.ndarray, t: float, floor: float) -> None:
    if not np.all(np.isfinite(u)):
        raise NonFiniteStateError(t)
    u_min = float(np.min(u))
    if u_min <= floor:
        raise PositivityBreachError(t, u_min, floor)


def solve(u0: ScalarField, cfg: SolverConfig) -> Trajectory:
    """
    Integrate from u0 up to cfg.t_end, storing every snapshot_stride-th step.

    Raises PositivityBreachError / NonFiniteStateError with the offending time.
    A step above the explicit stability bound is recorded in metadata.
    """
    manifold = u0.manifold
    stopwatch = Stopwatch()
    _guard(u0.values, 0.0, cfg.positivity_floor)

    dt = cfg.dt
    auto = dt is None
    if auto:
        dt = auto_time_step(u0, cfg.p, cfg.cfl_fraction)
    steps = max(1, math.ceil(cfg.t_end / dt - 1e-9))
    # the last step is shortened so the final snapshot lands on t_end
    final_dt = cfg.t_end - (steps - 1) * dt
    clamped = final_dt < dt * (1.0 - 1e-9)
    if not clamped:
        final_dt = dt

    bound = stability_bound(u0, cfg)
    unstable = dt > bound
    if unstable:
        log_warning(f"dt={dt:.3e} exceeds the {cfg.scheme.value} stability bound {bound:.3e}")

    log_info(
        f"Solving p={cfg.p:g} on {manifold.kind.value} {manifold.grid}: "
        f"{steps} {cfg.scheme.value} steps of dt={dt:.3e}"
    )

    step, _ = _STEPPERS[cfg.scheme]
    rate = _rate(manifold, cfg.p)
    u = np.array(u0.values, dtype=float)
    times = [0.0]
    states = [u.copy()]
    for k in range(1, steps + 1):
        if clamped and k == steps:
            u = step(rate, u, final_dt)
            t = cfg.t_end
        else:
            u = step(rate, u, dt)
            t = k * dt
        _guard(u, t, cfg.positivity_floor)
        if k % cfg.snapshot_stride == 0 or k == steps:
            times.append(t)
            states.append(u.copy())

    elapsed = stopwatch.elapsed()
    log_debug(f"solve finished: {len(times)} snapshots in {elapsed:.2f}s")
    metadata = {
        "dt": dt,
        "auto_dt": auto,
        "steps": steps,
        "final_dt": final_dt,
        "scheme": cfg.scheme.value,
        "stability_bound": bound,
        "stability_warning": unstable,
        "wall_time": elapsed,
    }
    return Trajectory(manifold, np.array(times), np.stack(states), cfg, metadata)
