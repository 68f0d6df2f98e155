"""
PME / fast-diffusion solver: u_t = Δ_φ(u^p) with explicit time stepping.
"""
from wpme.services.solver.config import FlowRegime, Scheme, SolverConfig
from wpme.services.solver.trajectory import Trajectory
from wpme.services.solver.integrator import solve
from wpme.services.solver.pressure import pressure, pressure_residual

__all__ = [
    "FlowRegime", "Scheme", "SolverConfig",
    "Trajectory", "solve",
    "pressure", "pressure_residual",
]
