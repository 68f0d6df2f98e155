"""
Tests for the entropy layer: N, W, their rates, the fast-diffusion bound and
the integral identities behind them.
"""
import math

import numpy as np
import pytest

from wpme.exceptions import IndexRangeError, ParameterError
from wpme.services.common import observed_order
from wpme.services.entropy.entropies import (
    fast_bound_coefficients,
    nash_entropy,
    nash_entropy_rate,
    rate_scales,
    uv_integral,
    w_entropy,
    w_entropy_rate,
    w_entropy_rate_bound_fast,
    w_entropy_rate_expanded,
)
from wpme.services.entropy.identities import (
    laplacian_moment_rates,
    relative_mismatch,
    uv_integral_rates,
    w_entropy_consistency,
)
from wpme.services.entropy.trace import entropy_trace, monotonicity_margins
from wpme.services.estimates.constants import a_tilde
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.manifold import ManifoldSpec, PhiKind

from conftest import SEED, integrate

FOUR_PI = 4.0 * math.pi


def constant_run(p, points=16, dt=0.05, t_end=1.0):
    m = ManifoldSpec.circle(points)
    return integrate(m, p=p, t_end=t_end, dt=dt, u0=ScalarField.constant(m, 1.0))


@pytest.fixture(scope="module")
def fast_window_trajectory():
    """p = 0.7 with constant φ: inside the admissible window for m = 2, ε = 2."""
    m = ManifoldSpec.circle(64, phi=PhiKind.CONSTANT, amplitude=0.7)
    return integrate(m, p=0.7, t_end=0.05, dt=1e-4, stride=10)


# ═══════════════════════════════════════════════════════════════════
# Constant solution closed forms
# ═══════════════════════════════════════════════════════════════════

class TestConstantSolution:
    """u ≡ 1, p = 2, m = 4, φ ≡ 0 on the circle of length 2π: ∫uv dμ = 4π."""

    def test_uv_integral(self, constant_trajectory):
        assert uv_integral(constant_trajectory, 0) == pytest.approx(FOUR_PI, rel=1e-12)

    def test_values_at_unit_time(self, constant_trajectory):
        k = constant_trajectory.last_index
        assert constant_trajectory.times[k] == pytest.approx(1.0, rel=1e-15)
        assert nash_entropy(constant_trajectory, k, 4.0) == pytest.approx(-FOUR_PI, rel=1e-10)
        assert w_entropy(constant_trajectory, k, 4.0) == pytest.approx(-20.0 * math.pi / 3.0, rel=1e-10)
        assert nash_entropy_rate(constant_trajectory, k, 4.0) == pytest.approx(-(2.0 / 3.0) * FOUR_PI, rel=1e-10)
        assert w_entropy_rate(constant_trajectory, k, 4.0) == pytest.approx(-40.0 * math.pi / 9.0, rel=1e-10)

    @pytest.mark.parametrize("k", [2, 10, 15])
    def test_power_laws(self, constant_trajectory, k):
        t = constant_trajectory.times[k]
        assert nash_entropy(constant_trajectory, k, 4.0) == pytest.approx(-FOUR_PI * t ** (2.0 / 3.0), rel=1e-10)
        assert w_entropy(constant_trajectory, k, 4.0) == pytest.approx(
            -(5.0 / 3.0) * FOUR_PI * t ** (2.0 / 3.0), rel=1e-10
        )
        expected_dw = -(2.0 / 3.0) * (5.0 / 3.0) * t ** (-1.0 / 3.0) * FOUR_PI
        assert w_entropy_rate(constant_trajectory, k, 4.0) == pytest.approx(expected_dw, rel=1e-10)

    def test_expanded_rate_matches(self, constant_trajectory):
        k = constant_trajectory.last_index
        assert w_entropy_rate_expanded(constant_trajectory, k, 4.0) == pytest.approx(
            -40.0 * math.pi / 9.0, rel=1e-10
        )

    def test_unit_time_ignores_exponent(self, constant_trajectory):
        k = constant_trajectory.last_index
        for m in (1.5, 4.0, 10.0):
            assert nash_entropy(constant_trajectory, k, m) == pytest.approx(-FOUR_PI, rel=1e-12)

    def test_fast_signs(self):
        traj = constant_run(0.9)
        k = traj.last_index
        t = traj.times[k]
        at = a_tilde(0.9, 3.0)
        integral = uv_integral(traj, k)
        assert integral == pytest.approx(-9.0 * 2.0 * math.pi, rel=1e-12)
        assert nash_entropy(traj, k, 3.0) > 0.0
        w = w_entropy(traj, k, 3.0)
        assert w == pytest.approx(-(at + 1.0) * t ** at * integral, rel=1e-10)
        assert w > 0.0

    def test_identity_for_fuzzed_parameters(self):
        rng = np.random.default_rng(SEED)
        checked = 0
        while checked < 20:
            p, m = rng.uniform(0.05, 4.0), rng.uniform(1.0, 10.0)
            c = m * (p - 1.0) + 2.0
            if abs(c) < 0.1 or abs(p - 1.0) < 1e-3:
                continue
            at = a_tilde(p, m)
            assert at * (at + 1.0) == pytest.approx(2.0 * m * (p - 1.0) * (m * (p - 1.0) + 1.0) / c ** 2, rel=1e-10)
            checked += 1

    def test_zero_time_rejected(self, constant_trajectory):
        with pytest.raises(ParameterError, match="t > 0"):
            nash_entropy(constant_trajectory, 0, 4.0)


# ═══════════════════════════════════════════════════════════════════
# Rates along smooth trajectories
# ═══════════════════════════════════════════════════════════════════

class TestRates:
    def test_nash_rate_matches_difference(self, porous_trajectory):
        traj = porous_trajectory
        k = traj.last_index // 2
        fd = (nash_entropy(traj, k + 1, 4.0) - nash_entropy(traj, k - 1, 4.0)) / (traj.times[k + 1] - traj.times[k - 1])
        assert relative_mismatch(fd, nash_entropy_rate(traj, k, 4.0)) <= 1e-3

    def test_w_rate_matches_difference(self, porous_trajectory):
        traj = porous_trajectory
        k = traj.last_index // 2
        fd = (w_entropy(traj, k + 1, 4.0) - w_entropy(traj, k - 1, 4.0)) / (traj.times[k + 1] - traj.times[k - 1])
        assert relative_mismatch(fd, w_entropy_rate(traj, k, 4.0)) <= 1e-2

    def test_w_equals_rate_of_t_times_n(self, porous_trajectory):
        fd, w = w_entropy_consistency(porous_trajectory, porous_trajectory.last_index // 2, 4.0)
        assert relative_mismatch(fd, w) <= 1e-3

    def test_completed_square_equals_expanded_for_constant_weight(self, porous_trajectory):
        k = porous_trajectory.last_index // 2
        for m in (1.5, 4.0, 10.0):
            a = w_entropy_rate(porous_trajectory, k, m)
            b = w_entropy_rate_expanded(porous_trajectory, k, m)
            assert a == pytest.approx(b, rel=1e-9)

    def test_completed_square_close_to_expanded_with_weight(self, weighted_porous_trajectory):
        k = weighted_porous_trajectory.last_index // 2
        a = w_entropy_rate(weighted_porous_trajectory, k, 3.0)
        b = w_entropy_rate_expanded(weighted_porous_trajectory, k, 3.0)
        assert relative_mismatch(a, b) <= 1e-3

    def test_dimension_parameter_for_weighted_rate(self, weighted_porous_trajectory):
        with pytest.raises(ParameterError, match="m must exceed n"):
            w_entropy_rate(weighted_porous_trajectory, 5, 1.0)

    def test_equal_dimensions_with_constant_weight(self, porous_trajectory):
        k = porous_trajectory.last_index // 2
        a = w_entropy_rate(porous_trajectory, k, 1.0)
        b = w_entropy_rate_expanded(porous_trajectory, k, 1.0)
        assert a == pytest.approx(b, rel=1e-9)

    @pytest.mark.slow
    def test_w_rate_mismatch_shrinks_under_refinement(self):
        m = ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=0.3)
        coarse = integrate(m, p=2.0, t_end=0.02, dt=1e-5, stride=20)
        fine = integrate(m.refined(), p=2.0, t_end=0.02, dt=2.5e-6, stride=20)
        k = coarse.last_index - 1
        kf = 4 * k
        assert fine.times[kf] == pytest.approx(coarse.times[k], rel=1e-12)

        def mismatch(traj, j):
            fd = (w_entropy(traj, j + 1, 3.0) - w_entropy(traj, j - 1, 3.0)) / (traj.times[j + 1] - traj.times[j - 1])
            return relative_mismatch(fd, w_entropy_rate(traj, j, 3.0))

        coarse_mismatch = mismatch(coarse, k)
        assert coarse_mismatch <= 1e-2
        assert mismatch(fine, kf) < coarse_mismatch


# ═══════════════════════════════════════════════════════════════════
# Monotonicity
# ═══════════════════════════════════════════════════════════════════

class TestPorousMonotonicity:
    @pytest.mark.parametrize("p", [1.5, 2.0])
    @pytest.mark.parametrize("m", [1.5, 2.0, 10.0])
    def test_circle_constant_weight(self, p, m):
        manifold = ManifoldSpec.circle(64, phi=PhiKind.CONSTANT, amplitude=0.7)
        traj = integrate(manifold, p=p, t_end=0.05, stride=2)
        trace = entropy_trace(traj, m)
        assert all(trace.monotone_flags)
        for k in range(len(traj)):
            if traj.times[k] < 0.01:
                continue
            n_scale, w_scale = rate_scales(traj, k, m)
            assert nash_entropy_rate(traj, k, m) <= 1e-8 * n_scale
            assert w_entropy_rate(traj, k, m) <= 1e-8 * w_scale

    @pytest.mark.parametrize("m", [2.5, 4.0, 10.0])
    def test_torus_constant_weight(self, m):
        manifold = ManifoldSpec.torus((24, 24))
        u0 = ScalarField.from_function(manifold, lambda x, y: 1.0 + 0.3 * np.cos(x) * np.cos(y))
        traj = integrate(manifold, p=2.0, t_end=0.03, stride=2, u0=u0)
        assert all(entropy_trace(traj, m).monotone_flags)


class TestFastBound:
    def test_window_endpoints_coincide(self):
        A, B = fast_bound_coefficients(1.0 / 3.0, 1.5, 1, 0.5)
        assert A == pytest.approx(0.0, abs=1e-12)
        assert B == pytest.approx(0.0, abs=1e-12)

    def test_coefficients_inside_window(self):
        A, B = fast_bound_coefficients(0.7, 2.0, 1, 2.0)
        assert A == pytest.approx(0.7 / 0.3 - 2.0, rel=1e-12)
        assert B == pytest.approx(2.0 * 0.3 - 0.5, rel=1e-12)
        assert A >= 0.0 and B >= 0.0

    @pytest.mark.parametrize("p,m,eps", [
        (0.34, 1.5, 0.5),
        (0.6, 2.0, 2.0),
        (0.7, 2.0, 0.5),
        (1.5, 2.0, 2.0),
        (0.7, 2.0, -1.0),
    ])
    def test_outside_window(self, p, m, eps):
        with pytest.raises(ParameterError):
            fast_bound_coefficients(p, m, 1, eps)

    def test_constant_solution_closed_form(self):
        traj = constant_run(0.7)
        k = traj.last_index
        t = traj.times[k]
        at = a_tilde(0.7, 2.0)
        c = 2.0 * (0.7 - 1.0) + 2.0
        A, B = fast_bound_coefficients(0.7, 2.0, 1, 2.0)
        integral = uv_integral(traj, k)
        expected = 2.0 * t ** (at + 1.0) * (A * (at / t) ** 2 + B * (1.0 / (c * t)) ** 2) * integral
        bound = w_entropy_rate_bound_fast(traj, k, 2.0, 2.0)
        assert bound == pytest.approx(expected, rel=1e-10)
        assert w_entropy_rate(traj, k, 2.0) <= bound + 1e-12 * abs(bound)

    def test_bound_holds_along_trajectory(self, fast_window_trajectory):
        traj = fast_window_trajectory
        for k in traj.centred_indices(0.01):
            _, w_scale = rate_scales(traj, k, 2.0)
            bound = w_entropy_rate_bound_fast(traj, k, 2.0, 2.0)
            assert w_entropy_rate(traj, k, 2.0) <= bound + 1e-8 * w_scale
            assert bound <= 1e-8 * w_scale

    def test_nash_rate_nonpositive(self, fast_window_trajectory):
        trace = entropy_trace(fast_window_trajectory, 2.0, eps=2.0)
        assert all(trace.monotone_flags)
        assert all(b is not None for b in trace.bound_fast)

    def test_porous_exponent_rejected(self, porous_trajectory):
        with pytest.raises(ParameterError, match="0 < p < 1"):
            w_entropy_rate_bound_fast(porous_trajectory, 5, 4.0, 3.0)


# ═══════════════════════════════════════════════════════════════════
# Integral identities
# ═══════════════════════════════════════════════════════════════════

class TestUvIntegralRates:
    def test_constant_solution(self, constant_trajectory):
        fd, middle, right = uv_integral_rates(constant_trajectory, 5)
        assert (fd, middle, right) == (0.0, 0.0, 0.0)

    def test_three_way_agreement(self, weighted_porous_trajectory):
        fd, middle, right = uv_integral_rates(weighted_porous_trajectory, weighted_porous_trajectory.last_index // 2)
        assert relative_mismatch(fd, middle) <= 1e-3
        assert relative_mismatch(middle, right) <= 1e-2
        assert right <= 0.0

    def test_fast_regime_sign(self, fast_trajectory):
        _, _, right = uv_integral_rates(fast_trajectory, 3)
        assert right <= 0.0

    def test_endpoint(self, porous_trajectory):
        with pytest.raises(IndexRangeError):
            uv_integral_rates(porous_trajectory, porous_trajectory.last_index)

    @pytest.mark.slow
    def test_mismatch_order(self):
        errors = []
        for points, dt in ((64, 4e-5), (128, 1e-5)):
            traj = integrate(ManifoldSpec.circle(points), p=2.0, t_end=0.01, dt=dt,
                             stride=int(round(2e-4 / dt)), scheme="rk4")
            _, middle, right = uv_integral_rates(traj, traj.last_index - 1)
            errors.append(relative_mismatch(middle, right))
        assert observed_order(*errors) >= 1.8


class TestLaplacianMomentRates:
    def test_constant_solution(self, constant_trajectory):
        assert laplacian_moment_rates(constant_trajectory, 5) == (0.0, 0.0)

    def test_unweighted_circle_reduces_to_second_derivative(self, porous_trajectory):
        traj = porous_trajectory
        k = traj.last_index // 2
        _, formula = laplacian_moment_rates(traj, k)
        v = traj.pressures[k]
        h = traj.manifold.spacings[0]
        second = (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / h ** 2
        expected = 2.0 * np.sum(((traj.p - 1.0) * second ** 2 + second ** 2) * traj.states[k] * v) * h
        assert formula == pytest.approx(expected, rel=1e-10)

    def test_weighted_agreement(self):
        m = ManifoldSpec.circle(256, phi=PhiKind.SIN, amplitude=0.3)
        traj = integrate(m, p=2.0, t_end=0.01, dt=1e-5, stride=20)
        fd, formula = laplacian_moment_rates(traj, traj.last_index // 2)
        assert relative_mismatch(fd, formula) <= 1e-2

    @pytest.mark.slow
    def test_mismatch_order(self):
        errors = []
        for points, dt in ((64, 4e-5), (128, 1e-5)):
            m = ManifoldSpec.circle(points, phi=PhiKind.SIN, amplitude=0.3)
            traj = integrate(m, p=2.0, t_end=0.01, dt=dt, stride=int(round(2e-4 / dt)), scheme="rk4")
            fd, formula = laplacian_moment_rates(traj, traj.last_index - 1)
            errors.append(relative_mismatch(fd, formula))
        assert observed_order(*errors) >= 1.8


# ═══════════════════════════════════════════════════════════════════
# Trace
# ═══════════════════════════════════════════════════════════════════

class TestEntropyTrace:
    def test_columns_aligned(self, porous_trajectory):
        trace = entropy_trace(porous_trajectory, 4.0)
        size = len(trace.times)
        assert size > 2
        for column in (trace.N, trace.W, trace.dN_formula, trace.dN_fd, trace.dW_formula,
                       trace.dW_fd, trace.bound_fast, trace.monotone_flags):
            assert len(column) == size
        assert trace.times[0] >= 0.01
        assert trace.dN_fd[0] is None and trace.dN_fd[-1] is None
        assert trace.dW_fd[1] is not None
        assert all(b is None for b in trace.bound_fast)

    def test_rows(self, porous_trajectory):
        rows = entropy_trace(porous_trajectory, 4.0).rows()
        assert len(rows[0]) == 9

    def test_fast_without_epsilon_has_no_bound(self, fast_trajectory):
        trace = entropy_trace(fast_trajectory, 10.0)
        assert all(b is None for b in trace.bound_fast)

    def test_empty_window(self, porous_trajectory):
        with pytest.raises(ParameterError):
            entropy_trace(porous_trajectory, 4.0, t_check_min=5.0)

    def test_margins_follow_flags(self, porous_trajectory):
        trace = entropy_trace(porous_trajectory, 4.0)
        margins = monotonicity_margins(porous_trajectory, 4.0, trace)
        assert len(margins) == len(trace.times)
        assert [mg >= -1e-8 for mg in margins] == trace.monotone_flags

    def test_fast_margin_without_bound_is_nash_only(self, fast_trajectory):
        trace = entropy_trace(fast_trajectory, 10.0)
        margins = monotonicity_margins(fast_trajectory, 10.0, trace)
        # N is non-increasing, so every normalized margin is nonnegative up to round-off
        assert min(margins) > -1e-8
