"""
Grid-sampled fields on a ManifoldSpec.

Values are stored as read-only numpy arrays:
    ScalarField.values      shape = manifold.shape
    VectorField.components  shape = (n, *manifold.shape)
    SymTensorField.entries  shape = (n(n+1)/2, *manifold.shape), order xx | xx, xy, yy
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from wpme.exceptions import ManifoldMismatchError, ParameterError
from wpme.services.geometry.manifold import ManifoldSpec


def _frozen(array: np.ndarray, shape, label: str) -> np.ndarray:
    out = np.array(array, dtype=float)
    if out.shape != tuple(shape):
        raise ParameterError(f"{label} has shape {out.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(out)):
        raise ParameterError(f"{label} contains non-finite values")
    out.setflags(write=False)
    return out


def ensure_same_manifold(*fields) -> ManifoldSpec:
    """Return the shared manifold or raise ManifoldMismatchError."""
    manifold = fields[0].manifold
    for other in fields[1:]:
        if not manifold.same_as(other.manifold):
            raise ManifoldMismatchError("fields live on different manifolds")
    return manifold


Scalar = Union["ScalarField", float, int]


@dataclass(frozen=True, eq=False)
class ScalarField:
    manifold: ManifoldSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, self.manifold.shape, "scalar field"))

    @classmethod
    def constant(cls, manifold: ManifoldSpec, value: float) -> "ScalarField":
        return cls(manifold, np.full(manifold.shape, float(value)))

    @classmethod
    def from_function(cls, manifold: ManifoldSpec, fn: Callable[..., np.ndarray]) -> "ScalarField":
        """Sample fn(x) (circle) or fn(x, y) (torus) at the grid nodes."""
        values = fn(*manifold.coordinates())
        return cls(manifold, np.broadcast_to(np.asarray(values, dtype=float), manifold.shape))

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "ScalarField":
        return ScalarField(self.manifold, fn(self.values))

    def _other(self, other: Scalar):
        if isinstance(other, ScalarField):
            ensure_same_manifold(self, other)
            return other.values
        return float(other)

    def __add__(self, other: Scalar) -> "ScalarField":
        return ScalarField(self.manifold, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "ScalarField":
        return ScalarField(self.manifold, self.values - self._other(other))

    def __rsub__(self, other: Scalar) -> "ScalarField":
        return ScalarField(self.manifold, self._other(other) - self.values)

    def __mul__(self, other: Scalar) -> "ScalarField":
        return ScalarField(self.manifold, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "ScalarField":
        return ScalarField(self.manifold, self.values / self._other(other))

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.manifold, -self.values)

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def argmin(self) -> int:
        """C-order flat node index of the minimum."""
        return int(np.argmin(self.values))

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)


@dataclass(frozen=True, eq=False)
class VectorField:
    manifold: ManifoldSpec
    components: np.ndarray

    def __post_init__(self):
        shape = (self.manifold.n, *self.manifold.shape)
        object.__setattr__(self, "components", _frozen(self.components, shape, "vector field"))

    def component(self, axis: int) -> ScalarField:
        return ScalarField(self.manifold, self.components[axis])

    def dot(self, other: "VectorField") -> ScalarField:
        ensure_same_manifold(self, other)
        return ScalarField(self.manifold, np.sum(self.components * other.components, axis=0))

    def norm_sq(self) -> ScalarField:
        return ScalarField(self.manifold, np.sum(self.components ** 2, axis=0))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.components)))


@dataclass(frozen=True, eq=False)
class SymTensorField:
    manifold: ManifoldSpec
    entries: np.ndarray

    def __post_init__(self):
        n = self.manifold.n
        shape = (n * (n + 1) // 2, *self.manifold.shape)
        object.__setattr__(self, "entries", _frozen(self.entries, shape, "symmetric tensor field"))

    def entry(self, i: int, j: int) -> ScalarField:
        return ScalarField(self.manifold, self.entries[_slot(self.manifold.n, i, j)])

    def trace(self) -> ScalarField:
        if self.manifold.n == 1:
            return ScalarField(self.manifold, self.entries[0])
        return ScalarField(self.manifold, self.entries[0] + self.entries[2])

    def frobenius_sq(self) -> ScalarField:
        if self.manifold.n == 1:
            return ScalarField(self.manifold, self.entries[0] ** 2)
        xx, xy, yy = self.entries
        return ScalarField(self.manifold, xx ** 2 + 2.0 * xy ** 2 + yy ** 2)

    def quadratic_form(self, vec: VectorField) -> ScalarField:
        """T(X, X) per node."""
        ensure_same_manifold(self, vec)
        x = vec.components
        if self.manifold.n == 1:
            return ScalarField(self.manifold, self.entries[0] * x[0] ** 2)
        xx, xy, yy = self.entries
        return ScalarField(self.manifold, xx * x[0] ** 2 + 2.0 * xy * x[0] * x[1] + yy * x[1] ** 2)

    def min_eigenvalue(self) -> ScalarField:
        """Smallest eigenvalue per node, closed form for 1×1 and 2×2."""
        if self.manifold.n == 1:
            return ScalarField(self.manifold, self.entries[0])
        xx, xy, yy = self.entries
        mean = 0.5 * (xx + yy)
        radius = np.hypot(0.5 * (xx - yy), xy)
        return ScalarField(self.manifold, mean - radius)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def plus_identity(self, scale: float) -> "SymTensorField":
        """T + scale·g for the flat metric g."""
        n = self.manifold.n
        entries = np.array(self.entries)
        for i in range(n):
            entries[_slot(n, i, i)] += scale
        return SymTensorField(self.manifold, entries)

    def __sub__(self, other: "SymTensorField") -> "SymTensorField":
        ensure_same_manifold(self, other)
        return SymTensorField(self.manifold, self.entries - other.entries)


def _slot(n: int, i: int, j: int) -> int:
    if n == 1:
        if i != 0 or j != 0:
            raise ParameterError(f"entry ({i}, {j}) out of range for n=1")
        return 0
    i, j = sorted((i, j))
    return {(0, 0): 0, (0, 1): 1, (1, 1): 2}[(i, j)]


def outer(vec: VectorField) -> SymTensorField:
    """X ⊗ X as a symmetric tensor field."""
    x = vec.components
    if vec.manifold.n == 1:
        return SymTensorField(vec.manifold, x[0:1] ** 2)
    return SymTensorField(vec.manifold, np.stack([x[0] ** 2, x[0] * x[1], x[1] ** 2]))
