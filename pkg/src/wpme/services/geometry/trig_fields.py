"""
Seeded random trigonometric polynomials with analytic derivatives.

    f(x) = c₀ + Σ_k [a_k cos(κ_k·x) + b_k sin(κ_k·x)],   κ_k = 2π k / L

Used as smooth test fields and as oracles for the discrete operators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from wpme.exceptions import ParameterError
from wpme.services.geometry.fields import ScalarField, SymTensorField, VectorField
from wpme.services.geometry.manifold import ManifoldSpec


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    lengths: Tuple[float, ...]
    wavenumbers: np.ndarray   # (modes, n) integers
    cos_coeffs: np.ndarray    # (modes,)
    sin_coeffs: np.ndarray    # (modes,)
    offset: float = 0.0

    @property
    def n(self) -> int:
        return len(self.lengths)

    def _angular(self) -> np.ndarray:
        return 2.0 * math.pi * self.wavenumbers / np.asarray(self.lengths)

    def _phases(self, manifold: ManifoldSpec) -> Tuple[np.ndarray, np.ndarray]:
        if manifold.n != self.n or tuple(manifold.lengths) != tuple(self.lengths):
            raise ParameterError("trig polynomial and manifold lengths disagree")
        kappa = self._angular()
        coords = manifold.coordinates()
        theta = sum(
            kappa[:, axis].reshape((-1,) + (1,) * manifold.n) * coords[axis]
            for axis in range(self.n)
        )
        return np.cos(theta), np.sin(theta)

    def _expand(self, coeffs: np.ndarray, n_axes: int) -> np.ndarray:
        return coeffs.reshape((-1,) + (1,) * n_axes)

    def field(self, manifold: ManifoldSpec) -> ScalarField:
        cos_t, sin_t = self._phases(manifold)
        a = self._expand(self.cos_coeffs, manifold.n)
        b = self._expand(self.sin_coeffs, manifold.n)
        return ScalarField(manifold, self.offset + np.sum(a * cos_t + b * sin_t, axis=0))

    def gradient_field(self, manifold: ManifoldSpec) -> VectorField:
        cos_t, sin_t = self._phases(manifold)
        a = self._expand(self.cos_coeffs, manifold.n)
        b = self._expand(self.sin_coeffs, manifold.n)
        kappa = self._angular()
        base = -a * sin_t + b * cos_t
        comps = [np.sum(self._expand(kappa[:, i], manifold.n) * base, axis=0) for i in range(self.n)]
        return VectorField(manifold, np.stack(comps))

    def hessian_field(self, manifold: ManifoldSpec) -> SymTensorField:
        cos_t, sin_t = self._phases(manifold)
        a = self._expand(self.cos_coeffs, manifold.n)
        b = self._expand(self.sin_coeffs, manifold.n)
        kappa = self._angular()
        base = -(a * cos_t + b * sin_t)

        def entry(i: int, j: int) -> np.ndarray:
            ki = self._expand(kappa[:, i], manifold.n)
            kj = self._expand(kappa[:, j], manifold.n)
            return np.sum(ki * kj * base, axis=0)

        if self.n == 1:
            return SymTensorField(manifold, entry(0, 0)[np.newaxis])
        return SymTensorField(manifold, np.stack([entry(0, 0), entry(0, 1), entry(1, 1)]))

    def sup_bound(self) -> float:
        """Upper bound on |f − offset|."""
        return float(np.sum(np.hypot(self.cos_coeffs, self.sin_coeffs)))


def random_trig_polynomial(lengths: Tuple[float, ...], seed: int, modes: int = 3,
                           max_wavenumber: int = 4, amplitude: float = 1.0,
                           offset: float = 0.0, rng: Optional[np.random.Generator] = None) -> TrigPolynomial:
    """
    Draw `modes` distinct nonzero wavenumber vectors with entries ≤ max_wavenumber
    and coefficients uniform in [−amplitude/modes, amplitude/modes].
    """
    n = len(lengths)
    if modes < 1:
        raise ParameterError("modes must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(seed)

    if n == 1:
        candidates = [(k,) for k in range(1, max_wavenumber + 1)]
    else:
        candidates = [
            (kx, ky)
            for kx, ky in itertools.product(range(-max_wavenumber, max_wavenumber + 1), repeat=2)
            if (kx, ky) != (0, 0) and (kx > 0 or (kx == 0 and ky > 0))
        ]
    if modes > len(candidates):
        raise ParameterError(f"cannot draw {modes} distinct modes with max wavenumber {max_wavenumber}")

    picked = rng.choice(len(candidates), size=modes, replace=False)
    wavenumbers = np.array([candidates[i] for i in sorted(picked)], dtype=float)
    scale = amplitude / modes
    return TrigPolynomial(
        lengths=tuple(float(v) for v in lengths),
        wavenumbers=wavenumbers,
        cos_coeffs=rng.uniform(-scale, scale, size=modes),
        sin_coeffs=rng.uniform(-scale, scale, size=modes),
        offset=float(offset),
    )
