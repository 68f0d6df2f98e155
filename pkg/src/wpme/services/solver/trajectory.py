"""
Trajectory: time-stamped snapshots of a positive solution plus solver metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import List, Mapping

import numpy as np

from wpme.exceptions import IndexRangeError, ParameterError
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.geometry.operators import weighted_sum
from wpme.services.solver.config import SolverConfig


@dataclass(frozen=True, eq=False)
class Trajectory:
    manifold: ManifoldSpec
    times: np.ndarray          # (K,)
    states: np.ndarray         # (K, *manifold.shape)
    config: SolverConfig
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        states = np.array(self.states, dtype=float)
        if times.ndim != 1 or states.shape != (len(times), *self.manifold.shape):
            raise ParameterError("trajectory times and states are misaligned")
        if len(times) == 0 or times[0] != 0.0 or np.any(np.diff(times) <= 0.0):
            raise ParameterError("trajectory times must start at 0 and increase strictly")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    def __len__(self) -> int:
        return len(self.times)

    @property
    def p(self) -> float:
        return self.config.p

    @property
    def last_index(self) -> int:
        return len(self.times) - 1

    def time(self, k: int) -> float:
        self._check_index(k)
        return float(self.times[k])

    def snapshot(self, k: int) -> ScalarField:
        self._check_index(k)
        return ScalarField(self.manifold, self.states[k])

    @cached_property
    def pressures(self) -> np.ndarray:
        """v = p/(p−1)·u^{p−1} for every snapshot."""
        p = self.config.p
        out = p / (p - 1.0) * self.states ** (p - 1.0)
        out.setflags(write=False)
        return out

    def pressure_field(self, k: int) -> ScalarField:
        self._check_index(k)
        return ScalarField(self.manifold, self.pressures[k])

    def pressure_rate(self, k: int) -> np.ndarray:
        """Centred time difference of v at snapshot k."""
        self.require_centred(k)
        dt = self.times[k + 1] - self.times[k - 1]
        return (self.pressures[k + 1] - self.pressures[k - 1]) / dt

    def mass(self, k: int) -> float:
        self._check_index(k)
        return weighted_sum(self.states[k], self.manifold)

    def centred_indices(self, t_min: float = 0.0) -> List[int]:
        """Interior snapshot indices with t_k ≥ t_min."""
        return [k for k in range(1, self.last_index) if self.times[k] >= t_min]

    def window_indices(self, window_end: float) -> List[int]:
        return [k for k in range(len(self.times)) if self.times[k] <= window_end]

    def require_centred(self, k: int, reach: int = 1) -> None:
        if not (reach <= k <= self.last_index - reach):
            raise IndexRangeError(
                f"snapshot index {k} needs {reach} neighbour(s) on each side "
                f"(valid range {reach}..{self.last_index - reach})"
            )

    def _check_index(self, k: int) -> None:
        if not (0 <= k <= self.last_index):
            raise IndexRangeError(f"snapshot index {k} outside 0..{self.last_index}")
