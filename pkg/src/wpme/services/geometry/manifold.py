"""
Closed flat model manifolds: the weighted circle and the weighted 2-torus.

A manifold carries its periodic uniform grid and the weight φ sampled at the
grid nodes. The weighted measure is dμ = e^{−φ} dv; the half-node weights used
by the drift Laplacian are e^{−(φ_j + φ_{j+1})/2} along each axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from wpme.config.settings import NumericsConfig
from wpme.exceptions import ParameterError


class ManifoldKind(str, Enum):
    CIRCLE = "circle"
    TORUS2 = "torus2"


class PhiKind(str, Enum):
    ZERO = "zero"
    SIN = "sin"            # amplitude · sin(2π x₁ / L₁)
    CONSTANT = "constant"  # amplitude everywhere
    CUSTOM = "custom"      # user-supplied samples


_DIMENSION = {ManifoldKind.CIRCLE: 1, ManifoldKind.TORUS2: 2}


@dataclass(frozen=True, eq=False)
class ManifoldSpec:
    """Closed flat model geometry with weight field and grid resolution."""

    kind: ManifoldKind
    lengths: Tuple[float, ...]
    grid: Tuple[int, ...]
    phi_kind: PhiKind = PhiKind.ZERO
    phi_amplitude: float = 0.0
    phi_samples: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        kind = ManifoldKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "phi_kind", PhiKind(self.phi_kind))
        object.__setattr__(self, "lengths", tuple(float(v) for v in self.lengths))
        object.__setattr__(self, "grid", tuple(int(v) for v in self.grid))

        n = _DIMENSION[kind]
        if len(self.lengths) != n or len(self.grid) != n:
            raise ParameterError(
                f"{kind.value} needs {n} length(s) and {n} grid count(s), "
                f"got lengths={self.lengths}, grid={self.grid}"
            )
        for length in self.lengths:
            if not (math.isfinite(length) and length > 0.0):
                raise ParameterError(f"lengths must be positive and finite, got {self.lengths}")
        for count in self.grid:
            if count < NumericsConfig.MIN_GRID_POINTS:
                raise ParameterError(
                    f"grid counts must be >= {NumericsConfig.MIN_GRID_POINTS}, got {self.grid}"
                )
        if not math.isfinite(self.phi_amplitude):
            raise ParameterError("phi amplitude must be finite")

        samples = self._evaluate_phi()
        if samples.shape != self.shape:
            raise ParameterError(f"phi samples have shape {samples.shape}, expected {self.shape}")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("phi samples must be finite")
        samples = np.array(samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(self, "phi_samples", samples)

    # ─── constructors ───────────────────────────────────────────────

    @classmethod
    def circle(cls, points: int, length: float = 2.0 * math.pi,
               phi: PhiKind | str = PhiKind.ZERO, amplitude: float = 0.0,
               samples: Optional[np.ndarray] = None) -> "ManifoldSpec":
        return cls(ManifoldKind.CIRCLE, (length,), (points,), PhiKind(phi), amplitude, samples)

    @classmethod
    def torus(cls, points: Sequence[int], lengths: Sequence[float] = (2.0 * math.pi, 2.0 * math.pi),
              phi: PhiKind | str = PhiKind.ZERO, amplitude: float = 0.0,
              samples: Optional[np.ndarray] = None) -> "ManifoldSpec":
        return cls(ManifoldKind.TORUS2, tuple(lengths), tuple(points), PhiKind(phi), amplitude, samples)

    def refined(self, factor: int = 2) -> "ManifoldSpec":
        """Same geometry with every grid count multiplied by `factor`."""
        if self.phi_kind == PhiKind.CUSTOM:
            raise ParameterError("custom phi samples cannot be refined")
        return ManifoldSpec(self.kind, self.lengths, tuple(c * factor for c in self.grid),
                            self.phi_kind, self.phi_amplitude)

    def with_phi_shift(self, shift: float) -> "ManifoldSpec":
        """Same grid with φ + shift (custom samples)."""
        return ManifoldSpec(self.kind, self.lengths, self.grid, PhiKind.CUSTOM, 0.0,
                            np.asarray(self.phi_samples) + shift)

    # ─── geometry ───────────────────────────────────────────────────

    @property
    def n(self) -> int:
        return _DIMENSION[self.kind]

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.grid

    @property
    def node_count(self) -> int:
        return int(np.prod(self.grid))

    @property
    def spacings(self) -> Tuple[float, ...]:
        return tuple(length / count for length, count in zip(self.lengths, self.grid))

    @property
    def h_min(self) -> float:
        return min(self.spacings)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return np.arange(self.grid[axis]) * self.spacings[axis]

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """Node coordinates as arrays of the grid shape (indexing='ij')."""
        axes = [self.axis_coordinates(i) for i in range(self.n)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    # ─── weight ─────────────────────────────────────────────────────

    @property
    def phi(self) -> np.ndarray:
        return self.phi_samples

    @cached_property
    def weight(self) -> np.ndarray:
        """Node weights e^{−φ}."""
        out = np.exp(-self.phi_samples)
        out.setflags(write=False)
        return out

    @cached_property
    def half_weights(self) -> Tuple[np.ndarray, ...]:
        """e^{−φ} at the half nodes j+½ per axis (geometric mean of the node weights)."""
        phi = self.phi_samples
        out = []
        for axis in range(self.n):
            w = np.exp(-0.5 * (phi + np.roll(phi, -1, axis=axis)))
            w.setflags(write=False)
            out.append(w)
        return tuple(out)

    def half_weight(self, axis: int) -> np.ndarray:
        return self.half_weights[axis]

    @property
    def phi_is_constant(self) -> bool:
        return bool(np.ptp(self.phi_samples) == 0.0)

    def same_as(self, other: "ManifoldSpec") -> bool:
        if self is other:
            return True
        return (
            isinstance(other, ManifoldSpec)
            and self.kind == other.kind
            and self.lengths == other.lengths
            and self.grid == other.grid
            and np.array_equal(self.phi_samples, other.phi_samples)
        )

    def describe(self) -> dict:
        return {
            "kind": self.kind.value,
            "lengths": list(self.lengths),
            "grid": list(self.grid),
            "phi": self.phi_kind.value,
            "phi_amplitude": self.phi_amplitude,
        }

    def _evaluate_phi(self) -> np.ndarray:
        if self.phi_kind == PhiKind.CUSTOM:
            if self.phi_samples is None:
                raise ParameterError("custom phi requires samples")
            return np.asarray(self.phi_samples, dtype=float).reshape(self.shape)
        if self.phi_kind == PhiKind.ZERO:
            return np.zeros(self.shape)
        if self.phi_kind == PhiKind.CONSTANT:
            return np.full(self.shape, float(self.phi_amplitude))
        x1 = self.coordinates()[0]
        return self.phi_amplitude * np.sin(2.0 * math.pi * x1 / self.lengths[0])
