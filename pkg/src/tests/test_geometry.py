"""
Tests for the geometry kernel — operators, weighted measure, curvature, Bochner.
"""
import math

import numpy as np
import pytest

from wpme.exceptions import ManifoldMismatchError, ParameterError
from wpme.services.geometry.bochner import bochner_defect, hessian_trace_slack, operator_slack
from wpme.services.geometry.curvature import bakry_emery
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.manifold import ManifoldKind, ManifoldSpec, PhiKind
from wpme.services.geometry.operators import (
    gradient,
    hessian,
    symmetry_defect,
    weighted_integral,
    witten_laplacian,
)
from wpme.services.geometry.trig_fields import random_trig_polynomial

from conftest import SEED, TWO_PI


# ═══════════════════════════════════════════════════════════════════
# Manifold construction
# ═══════════════════════════════════════════════════════════════════

class TestManifoldSpec:
    def test_circle_dimension_and_spacing(self):
        m = ManifoldSpec.circle(64)
        assert m.kind == ManifoldKind.CIRCLE
        assert m.n == 1
        assert m.shape == (64,)
        assert m.spacings[0] == pytest.approx(TWO_PI / 64)

    def test_torus_shape(self):
        m = ManifoldSpec.torus((16, 32), lengths=(1.0, 2.0))
        assert m.n == 2
        assert m.node_count == 512
        assert m.cell_volume == pytest.approx((1.0 / 16) * (2.0 / 32))

    def test_grid_too_coarse_rejected(self):
        with pytest.raises(ParameterError, match="grid counts"):
            ManifoldSpec.circle(4)

    def test_nonpositive_length_rejected(self):
        with pytest.raises(ParameterError, match="positive"):
            ManifoldSpec.circle(16, length=0.0)

    def test_sin_phi_matches_formula(self):
        m = ManifoldSpec.circle(32, phi=PhiKind.SIN, amplitude=0.3)
        (x,) = m.coordinates()
        np.testing.assert_allclose(m.phi, 0.3 * np.sin(x), atol=1e-15)

    def test_custom_phi_requires_samples(self):
        with pytest.raises(ParameterError, match="custom phi"):
            ManifoldSpec.circle(16, phi=PhiKind.CUSTOM)

    def test_nonfinite_phi_rejected(self):
        samples = np.zeros(16)
        samples[3] = np.nan
        with pytest.raises(ParameterError, match="finite"):
            ManifoldSpec.circle(16, phi=PhiKind.CUSTOM, samples=samples)

    def test_refined_doubles_grid(self):
        m = ManifoldSpec.torus((16, 16), phi=PhiKind.SIN, amplitude=0.3).refined()
        assert m.grid == (32, 32)
        assert m.phi_kind == PhiKind.SIN


# ═══════════════════════════════════════════════════════════════════
# Gradient and Hessian
# ═══════════════════════════════════════════════════════════════════

class TestGradient:
    def test_constant_has_zero_gradient(self, circle128):
        g = gradient(ScalarField.constant(circle128, 5.0))
        assert np.all(g.components == 0.0)

    def test_sine_derivative_at_origin(self, circle128):
        g = gradient(ScalarField.from_function(circle128, np.sin))
        assert g.components[0][0] == pytest.approx(1.0, abs=1e-3)

    def test_second_order_convergence(self):
        poly = random_trig_polynomial((TWO_PI,), seed=SEED, modes=3)
        errors = []
        for points in (64, 128):
            m = ManifoldSpec.circle(points)
            numeric = gradient(poly.field(m)).components
            exact = poly.gradient_field(m).components
            errors.append(np.max(np.abs(numeric - exact)))
        assert errors[0] / errors[1] >= 3.5

    def test_torus_gradient_components(self):
        m = ManifoldSpec.torus((64, 64))
        f = ScalarField.from_function(m, lambda x, y: np.sin(x) + np.cos(2 * y))
        g = gradient(f)
        x, y = m.coordinates()
        np.testing.assert_allclose(g.components[0], np.cos(x), atol=2e-3)
        np.testing.assert_allclose(g.components[1], -2 * np.sin(2 * y), atol=2e-2)


class TestHessian:
    def test_constant_has_zero_hessian(self, weighted_torus32):
        h = hessian(ScalarField.constant(weighted_torus32, -3.0))
        assert np.all(h.entries == 0.0)

    def test_cosine_second_derivative(self, circle128):
        h = hessian(ScalarField.from_function(circle128, np.cos))
        (x,) = circle128.coordinates()
        np.testing.assert_allclose(h.entries[0], -np.cos(x), atol=1e-3)

    def test_mixed_partial_at_origin(self):
        m = ManifoldSpec.torus((64, 64))
        h = hessian(ScalarField.from_function(m, lambda x, y: np.sin(x) * np.sin(y)))
        assert h.entry(0, 1).values[0, 0] == pytest.approx(1.0, abs=5e-3)
        assert h.entry(1, 0).values[0, 0] == h.entry(0, 1).values[0, 0]

    def test_matches_analytic_hessian_on_torus(self, trig_torus_pair):
        poly, _ = trig_torus_pair
        m = ManifoldSpec.torus((128, 128))
        numeric = hessian(poly.field(m)).entries
        exact = poly.hessian_field(m).entries
        scale = np.max(np.abs(exact))
        assert np.max(np.abs(numeric - exact)) <= 0.05 * scale

    def test_identity_shift_touches_diagonal_only(self, weighted_torus32):
        h = hessian(ScalarField.from_function(weighted_torus32, lambda x, y: np.sin(x) * np.sin(y)))
        shifted = h.plus_identity(0.5)
        np.testing.assert_array_equal(shifted.entry(0, 1).values, h.entry(0, 1).values)
        np.testing.assert_allclose(shifted.trace().values, h.trace().values + 1.0, rtol=0, atol=1e-15)


# ═══════════════════════════════════════════════════════════════════
# Witten Laplacian and weighted measure
# ═══════════════════════════════════════════════════════════════════

class TestWittenLaplacian:
    def test_unweighted_reduces_to_laplacian(self, circle128):
        lap = witten_laplacian(ScalarField.from_function(circle128, np.cos))
        (x,) = circle128.coordinates()
        np.testing.assert_allclose(lap.values, -np.cos(x), atol=1e-3)

    def test_drift_term_at_origin(self):
        m = ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=1.0)
        lap = witten_laplacian(ScalarField.from_function(m, np.cos))
        assert lap.values[0] == pytest.approx(-1.0, abs=1e-3)

    def test_drift_term_everywhere(self):
        m = ManifoldSpec.circle(256, phi=PhiKind.SIN, amplitude=1.0)
        lap = witten_laplacian(ScalarField.from_function(m, np.cos))
        (x,) = m.coordinates()
        np.testing.assert_allclose(lap.values, -np.cos(x) + np.sin(x) * np.cos(x), atol=1e-3)

    @pytest.mark.parametrize("value", [0.0, 1.0, -7.25, 1e6])
    def test_constants_are_in_kernel(self, weighted_circle128, weighted_torus32, value):
        for m in (weighted_circle128, weighted_torus32):
            lap = witten_laplacian(ScalarField.constant(m, value))
            assert np.max(np.abs(lap.values)) == 0.0

    def test_divergence_identity(self, weighted_circle128, weighted_torus32, trig_circle, trig_torus_pair):
        for m, poly in ((weighted_circle128, trig_circle), (weighted_torus32, trig_torus_pair[0])):
            f = poly.field(m)
            scale = max(1.0, f.sup_norm() ** 2)
            assert abs(weighted_integral(witten_laplacian(f))) <= 1e-12 * scale


class TestWeightedIntegral:
    def test_unit_function_on_circle(self):
        m = ManifoldSpec.circle(128)
        assert weighted_integral(ScalarField.constant(m, 1.0)) == pytest.approx(TWO_PI, rel=1e-14)

    def test_constant_weight_halves_measure(self):
        m = ManifoldSpec.circle(128, phi=PhiKind.CONSTANT, amplitude=math.log(2.0))
        assert weighted_integral(ScalarField.constant(m, 1.0)) == pytest.approx(math.pi, rel=1e-14)

    def test_odd_mode_integrates_to_zero(self, circle128):
        assert abs(weighted_integral(ScalarField.from_function(circle128, np.sin))) <= 1e-14

    def test_torus_area(self):
        m = ManifoldSpec.torus((16, 24), lengths=(2.0, 3.0))
        assert weighted_integral(ScalarField.constant(m, 1.0)) == pytest.approx(6.0, rel=1e-14)


class TestSymmetryDefect:
    def test_unit_against_any_field(self, weighted_circle128, trig_circle):
        v = trig_circle.field(weighted_circle128)
        one = ScalarField.constant(weighted_circle128, 1.0)
        assert symmetry_defect(one, v) <= 1e-12 * max(1.0, v.sup_norm() ** 2)

    def test_sin_cos_pair(self):
        m = ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=1.0)
        u = ScalarField.from_function(m, np.sin)
        v = ScalarField.from_function(m, np.cos)
        assert symmetry_defect(u, v) <= 1e-10

    def test_same_field_is_exactly_zero(self, weighted_circle128, trig_circle):
        u = trig_circle.field(weighted_circle128)
        assert symmetry_defect(u, u) == 0.0

    def test_random_fields_on_circle_and_torus(self, weighted_circle128, weighted_torus32,
                                              trig_circle_pair, trig_torus_pair):
        for m, (pu, pv) in ((weighted_circle128, trig_circle_pair), (weighted_torus32, trig_torus_pair)):
            u, v = pu.field(m), pv.field(m)
            scale = max(u.sup_norm(), v.sup_norm()) ** 2
            assert symmetry_defect(u, v) <= 1e-10 * scale

    def test_mismatched_manifolds(self):
        u = ScalarField.constant(ManifoldSpec.circle(16), 1.0)
        v = ScalarField.constant(ManifoldSpec.circle(32), 1.0)
        with pytest.raises(ManifoldMismatchError):
            symmetry_defect(u, v)


# ═══════════════════════════════════════════════════════════════════
# Bakry–Émery curvature
# ═══════════════════════════════════════════════════════════════════

class TestBakryEmery:
    def test_flat_weight_is_nonnegative(self, circle128):
        report = bakry_emery(circle128, 3.0)
        assert np.all(report.tensor.entries == 0.0)
        assert report.K == 0.0
        assert report.nonneg is True

    def test_sine_weight_on_circle(self):
        m = ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=1.0)
        report = bakry_emery(m, 3.0)
        (x,) = m.coordinates()
        np.testing.assert_allclose(report.tensor.entries[0], -np.sin(x) - np.cos(x) ** 2 / 2, atol=1e-3)
        assert report.lambda_min == pytest.approx(-1.0, abs=1e-3)
        assert report.K == pytest.approx(1.0, abs=1e-3)
        assert report.nonneg is False

    def test_m_equal_n_with_nonconstant_phi(self):
        m = ManifoldSpec.circle(64, phi=PhiKind.SIN, amplitude=1.0)
        with pytest.raises(ParameterError, match="m must exceed n"):
            bakry_emery(m, 1.0)

    def test_m_below_n_rejected(self, circle128):
        with pytest.raises(ParameterError, match="m must exceed n"):
            bakry_emery(circle128, 0.5)

    def test_m_equal_n_with_constant_phi(self):
        m = ManifoldSpec.torus((16, 16), phi=PhiKind.CONSTANT, amplitude=2.0)
        report = bakry_emery(m, 2.0)
        assert report.K == 0.0
        assert report.nonneg is True

    def test_invariant_under_phi_shift(self, weighted_circle128):
        base = bakry_emery(weighted_circle128, 3.0)
        shifted = bakry_emery(weighted_circle128.with_phi_shift(5.0), 3.0)
        np.testing.assert_allclose(shifted.tensor.entries, base.tensor.entries, atol=1e-10)
        assert shifted.K == pytest.approx(base.K, abs=1e-10)

    def test_torus_sine_weight(self, weighted_torus32):
        report = bakry_emery(weighted_torus32, 3.0)
        assert report.K == pytest.approx(0.3, abs=2e-3)
        assert np.all(report.tensor.entry(0, 1).values == 0.0)

    def test_K_never_negative(self, weighted_torus32):
        for m in (2.5, 3.0, 10.0, 100.0):
            report = bakry_emery(weighted_torus32, m)
            assert report.K >= 0.0
            if report.nonneg:
                assert report.K <= report.tol_eig


# ═══════════════════════════════════════════════════════════════════
# Bochner formula
# ═══════════════════════════════════════════════════════════════════

class TestBochner:
    def test_constant_field_gives_zero(self, weighted_circle128):
        defect, slack = bochner_defect(ScalarField.constant(weighted_circle128, 2.0), 3.0)
        assert np.all(defect.values == 0.0)
        assert np.all(slack.values == 0.0)

    def test_cosine_defect_is_second_order(self):
        sups = []
        for points in (64, 128):
            m = ManifoldSpec.circle(points)
            defect, _ = bochner_defect(ScalarField.from_function(m, np.cos), 2.0)
            sups.append(defect.sup_norm())
        assert sups[0] / sups[1] >= 3.5

    def test_weighted_random_defect_is_second_order(self):
        poly = random_trig_polynomial((TWO_PI,), seed=SEED, modes=3, max_wavenumber=3)
        sups = []
        for points in (64, 128):
            m = ManifoldSpec.circle(points, phi=PhiKind.SIN, amplitude=0.3)
            defect, _ = bochner_defect(poly.field(m), 3.0)
            sups.append(defect.sup_norm())
        assert sups[0] / sups[1] >= 3.5

    @pytest.mark.parametrize("m_param", [2.0, 3.0, 10.0])
    def test_inequality_slack_floor(self, m_param, trig_circle):
        manifold = ManifoldSpec.circle(256, phi=PhiKind.SIN, amplitude=0.3)
        _, slack = bochner_defect(trig_circle.field(manifold), m_param)
        assert slack.min() >= -1e-6

    @pytest.mark.parametrize("m_param", [2.0, 3.0, 10.0])
    def test_operator_slack_converges_to_pointwise(self, m_param, trig_circle):
        gaps = []
        for points in (128, 256):
            manifold = ManifoldSpec.circle(points, phi=PhiKind.SIN, amplitude=0.3)
            w = trig_circle.field(manifold)
            _, slack = bochner_defect(w, m_param)
            gaps.append((operator_slack(w, m_param) - slack).sup_norm())
        assert gaps[1] > 0.0
        assert gaps[0] / gaps[1] >= 3.5

    def test_operator_slack_matches_pointwise_without_weight(self, circle128, trig_circle):
        w = trig_circle.field(circle128)
        _, slack = bochner_defect(w, 3.0)
        gap = operator_slack(w, 3.0) - slack
        assert gap.sup_norm() <= 1e-9 * max(1.0, slack.sup_norm())

    def test_slack_dominates_defect(self, weighted_torus32, trig_torus_pair):
        defect, slack = bochner_defect(trig_torus_pair[0].field(weighted_torus32), 4.0)
        gap = slack.values - defect.values
        assert gap.min() >= -1e-9

    def test_m_not_exceeding_n_rejected(self, weighted_torus32, trig_torus_pair):
        with pytest.raises(ParameterError, match="m must exceed n"):
            bochner_defect(trig_torus_pair[0].field(weighted_torus32), 2.0)


class TestHessianTraceSlack:
    def test_exactly_zero_on_circle(self, circle128, trig_circle):
        slack = hessian_trace_slack(trig_circle.field(circle128))
        assert np.max(np.abs(slack.values)) <= 1e-12 * max(1.0, slack.sup_norm())

    def test_nonnegative_on_torus(self, weighted_torus32, trig_torus_pair):
        w = trig_torus_pair[1].field(weighted_torus32)
        slack = hessian_trace_slack(w)
        scale = hessian(w).sup_norm() ** 2
        assert slack.min() >= -1e-12 * max(1.0, scale)
