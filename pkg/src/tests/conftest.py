"""
Test configuration — shared fixtures for all tests.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure the wpme package is importable
sys.path.insert(0, str(Path(__file__).parent.parent))

from dotenv import load_dotenv
load_dotenv(Path(__file__).parent.parent.parent / '.env')

from wpme.services.geometry.manifold import ManifoldSpec, PhiKind
from wpme.services.geometry.trig_fields import random_trig_polynomial

TWO_PI = 2.0 * math.pi
SEED = 20240607


@pytest.fixture
def circle128():
    return ManifoldSpec.circle(128)


@pytest.fixture
def weighted_circle128():
    """φ = 0.3 sin x on the circle of length 2π."""
    return ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=0.3)


@pytest.fixture
def weighted_torus32():
    return ManifoldSpec.torus((32, 32), phi=PhiKind.SIN, amplitude=0.3)


@pytest.fixture
def trig_circle():
    return random_trig_polynomial((TWO_PI,), seed=SEED, modes=3)


@pytest.fixture
def trig_circle_pair():
    rng = np.random.default_rng(SEED)
    return (
        random_trig_polynomial((TWO_PI,), seed=SEED, modes=3, rng=rng),
        random_trig_polynomial((TWO_PI,), seed=SEED, modes=3, rng=rng),
    )


@pytest.fixture
def trig_torus_pair():
    rng = np.random.default_rng(SEED)
    return (
        random_trig_polynomial((TWO_PI, TWO_PI), seed=SEED, modes=4, rng=rng),
        random_trig_polynomial((TWO_PI, TWO_PI), seed=SEED, modes=4, rng=rng),
    )


# ═══════════════════════════════════════════════════════════════════
# Trajectory helpers
# ═══════════════════════════════════════════════════════════════════

def cosine_bump(manifold, amplitude=0.5, base=1.0):
    """u0 = base + amplitude·cos(first coordinate)."""
    from wpme.services.geometry.fields import ScalarField
    return ScalarField.from_function(manifold, lambda x, *rest: base + amplitude * np.cos(x))


def integrate(manifold, p, t_end, dt=None, stride=1, scheme="explicit-euler", u0=None):
    from wpme.services.solver.config import SolverConfig
    from wpme.services.solver.integrator import solve
    cfg = SolverConfig(p=p, dt=dt, t_end=t_end, snapshot_stride=stride, scheme=scheme)
    return solve(u0 if u0 is not None else cosine_bump(manifold), cfg)


@pytest.fixture(scope="session")
def porous_trajectory():
    """p = 2, φ ≡ 0, u0 = 1 + 0.5 cos x on the 128-point circle; snapshots every 2e-4."""
    return integrate(ManifoldSpec.circle(128), p=2.0, t_end=0.02, dt=1e-5, stride=20)


@pytest.fixture(scope="session")
def weighted_porous_trajectory():
    """Same data with φ = 0.3 sin x."""
    m = ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=0.3)
    return integrate(m, p=2.0, t_end=0.02, dt=1e-5, stride=20)


@pytest.fixture(scope="session")
def fast_trajectory():
    """p = 0.9, φ ≡ 0 on the 128-point circle."""
    return integrate(ManifoldSpec.circle(128), p=0.9, t_end=0.02, dt=1e-5, stride=20)


@pytest.fixture(scope="session")
def constant_trajectory():
    return integrate(ManifoldSpec.circle(32), p=2.0, t_end=1.0, dt=0.05,
                     u0=cosine_bump(ManifoldSpec.circle(32), amplitude=0.0))
