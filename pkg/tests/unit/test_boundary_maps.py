"""
Unit tests for lift construction, extension and the membership criterion
"""

import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hqdisk.boundary_maps import (
    TAU,
    BoundaryMap,
    LiftFunction,
    Verdict,
    check_membership,
    compose,
    convex_combination,
    derivative_noise,
    difference_quotients,
    estimate_bilipschitz,
    example3_unit,
    lift_extend,
    lift_mesh,
    make_example3,
    make_identity,
    make_mobius,
    make_rotation,
    make_smoothstep,
    shift,
    smoothstep,
    smoothstep_derivative,
    smoothstep_second_derivative,
    uniform_angles,
)
from hqdisk.cantor import phi_cantor, phi_n
from hqdisk.errors import DomainError
from hqdisk.hilbert import PVConfig
from hqdisk.poisson import QuadratureConfig


@pytest.fixture
def quick_cfg():
    """Reduced sampling that keeps the membership criterion decisive"""
    return QuadratureConfig(nodes=1024, r_max=0.9, mesh=4096, hilbert_samples=64)


@pytest.fixture
def quick_pv():
    return PVConfig(epsilon=1e-6, nodes=2048)


class TestLiftExtension:
    """Canonical extension φ(t + 2kπ) = φ(t) + 2kπ"""

    def test_identity_extension(self):
        identity = make_identity()
        assert lift_extend(identity, TAU + 1.0) == pytest.approx(TAU + 1.0, abs=1e-14)

    def test_shift_by_period(self):
        lift = make_smoothstep()
        t0 = 1.234
        assert lift_extend(lift, t0 + TAU) == pytest.approx(lift_extend(lift, t0) + TAU, abs=1e-12)

    def test_example3_negative_branch(self):
        lift = make_example3()
        expected = lift(4.0 * math.pi / 3.0) - TAU
        assert lift_extend(lift, -TAU / 3.0) == pytest.approx(expected, abs=1e-12)

    def test_scalar_and_array_inputs(self):
        lift = make_smoothstep()
        assert isinstance(lift(1.0), float)
        values = lift(np.array([[0.0, 1.0], [2.0, 3.0]]))
        assert values.shape == (2, 2)

    @given(st.floats(min_value=0.0, max_value=TAU, exclude_max=True, allow_nan=False),
           st.integers(min_value=-50, max_value=50))
    @settings(max_examples=200, deadline=None)
    def test_extension_consistency(self, t, k):
        """Moving by k periods adds exactly 2kπ to the grid-aligned base value"""
        lift = make_mobius(0.3 - 0.2j)
        shifted = lift_extend(lift, t + k * TAU)
        assert shifted - lift_extend(lift, t) == pytest.approx(k * TAU, abs=1e-9)

    def test_extension_is_exact_on_grid(self):
        """Angles built as t + 2kπ from exact grid points recover k exactly"""
        lift = make_smoothstep()
        t = uniform_angles(64)
        for k in (-3, 1, 5):
            difference = lift(t + k * TAU) - lift(t)
            np.testing.assert_allclose(difference, k * TAU, atol=1e-12)

    def test_boundary_map_traverses_circle(self):
        gamma = BoundaryMap.from_lift(make_smoothstep())
        w = gamma(uniform_angles(2048))
        np.testing.assert_allclose(np.abs(w), 1.0, atol=1e-14)
        winding = np.sum(np.angle(np.roll(w, -1) / w)) / TAU
        assert winding == pytest.approx(1.0, abs=1e-9)


class TestConstructions:
    """Closed-form lifts and their derivatives"""

    def test_example3_unit_values(self):
        assert example3_unit(1.0 / 3.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert example3_unit(0.75) == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert example3_unit(1.0) == pytest.approx(1.0, abs=1e-15)
        assert example3_unit(0.0) == 0.0

    def test_example3_flags(self):
        lift = make_example3()
        assert lift.weak_only is True
        assert lift.breakpoints == pytest.approx((TAU / 3.0, 1.5 * math.pi))
        assert lift.total_increase() == pytest.approx(TAU, abs=1e-12)

    def test_smoothstep_values(self):
        assert smoothstep(0.5) == pytest.approx(0.5, abs=1e-15)
        assert smoothstep(0.25) == pytest.approx(0.103515625, abs=1e-15)
        assert smoothstep(0.0) == 0.0
        assert smoothstep(1.0) == 1.0

    def test_smoothstep_flat_ends(self):
        for x in (0.0, 1.0):
            assert smoothstep_derivative(x) == pytest.approx(0.0, abs=1e-15)
            assert smoothstep_second_derivative(x) == pytest.approx(0.0, abs=1e-15)

    def test_smoothstep_strictly_increasing(self):
        x = np.linspace(0.0, 1.0, 10001)
        assert np.all(np.diff(smoothstep(x)) > 0.0)

    def test_smoothstep_lift_derivative_matches_quotients(self):
        lift = make_smoothstep()
        t = np.linspace(0.1, 6.0, 50)
        step = 1e-6
        numeric = (lift(t + step) - lift(t - step)) / (2 * step)
        np.testing.assert_allclose(lift.derivative_eval(t), numeric, atol=1e-6)

    def test_mobius_lift_reproduces_boundary_trace(self):
        a = 0.3 + 0.1j
        lift = make_mobius(a)
        t = uniform_angles(256)
        zeta = np.exp(1j * t)
        expected = (zeta - a) / (1 - np.conj(a) * zeta)
        np.testing.assert_allclose(np.exp(1j * lift(t)), expected, atol=1e-13)
        assert lift.total_increase() == pytest.approx(TAU, abs=1e-12)

    def test_mobius_rejects_outside_disk(self):
        with pytest.raises(DomainError):
            make_mobius(1.0)

    def test_rotation_and_shift(self):
        rotation = make_rotation(0.1)
        assert rotation(2.0) == pytest.approx(2.1)
        shifted = shift(make_smoothstep(), -0.2)
        assert shifted(1.0) == pytest.approx(make_smoothstep()(1.0) - 0.2)

    def test_compose_with_identity(self):
        lift = make_smoothstep()
        composed = compose(lift, make_identity())
        t = np.linspace(-1.0, 7.0, 33)
        np.testing.assert_allclose(composed(t), lift(t), atol=1e-12)

    def test_missing_derivative_raises(self):
        with pytest.raises(DomainError):
            phi_cantor().derivative_eval(1.0)


class TestConvexCombination:
    """λφ₁ + (1 - λ)φ₂"""

    def test_endpoint(self):
        phi1, phi2 = make_smoothstep(), make_mobius(0.2)
        combo = convex_combination(phi1, phi2, 1.0)
        t = np.linspace(0.0, TAU, 101)
        np.testing.assert_allclose(combo(t), phi1(t), atol=1e-14)

    def test_idempotence(self):
        phi = make_mobius(-0.4j)
        combo = convex_combination(phi, phi, 0.37)
        t = np.linspace(0.0, TAU, 101)
        np.testing.assert_allclose(combo(t), phi(t), atol=1e-13)

    def test_midpoint_at_pi(self):
        combo = convex_combination(make_smoothstep(), make_identity(), 0.5)
        expected = 0.5 * (make_smoothstep()(math.pi) + math.pi)
        assert combo(math.pi) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("lam", [-0.1, 1.5, float("nan")])
    def test_weight_outside_unit_interval(self, lam):
        with pytest.raises(DomainError):
            convex_combination(make_identity(), make_smoothstep(), lam)

    def test_breakpoints_and_flags(self):
        combo = convex_combination(make_example3(), make_identity(), 0.5)
        assert combo.breakpoints == make_example3().breakpoints
        assert combo.weak_only is False
        assert convex_combination(make_example3(), make_identity(), 1.0).weak_only is True
        assert combo.has_derivative

    def test_derivative_dropped_without_both(self):
        combo = convex_combination(phi_cantor(), make_identity(), 0.5)
        assert not combo.has_derivative

    @given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
           st.sampled_from([0, 1, 2, 3]),
           st.sampled_from([0.3, -0.2 + 0.1j, 0.4j]))
    @settings(max_examples=40, deadline=None)
    def test_total_increase_and_monotonicity(self, lam, n, a):
        phi1, phi2 = phi_n(n), make_mobius(a)
        combo = convex_combination(phi1, phi2, lam)
        assert combo.total_increase() == pytest.approx(TAU, abs=1e-9)
        lower = min(estimate_bilipschitz(phi1, 2048).lower, estimate_bilipschitz(phi2, 2048).lower)
        assert difference_quotients(combo, 2048).min() >= lower - 1e-10

    @given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
           st.sampled_from([0, 1, 2]),
           st.sampled_from([0.3, -0.2 + 0.1j]))
    @settings(max_examples=15)
    def test_combination_stays_member(self, lam, n, a):
        """Combinations of members are members, and L⁺ never exceeds the larger generator's"""
        cfg = QuadratureConfig(nodes=1024, r_max=0.9, mesh=4096, hilbert_samples=64)
        phi1, phi2 = phi_n(n), make_mobius(a)
        combo = convex_combination(phi1, phi2, lam)

        report = check_membership(combo, cfg, PVConfig(epsilon=1e-6, nodes=2048))

        assert report.verdict is Verdict.MEMBER, report.reasons
        # Same mesh for all three, so the quotients combine linearly
        bound = max(estimate_bilipschitz(phi1, cfg.mesh, combo.breakpoints).upper,
                    estimate_bilipschitz(phi2, cfg.mesh, combo.breakpoints).upper)
        assert report.bilipschitz_upper <= bound + 1e-9

    def test_property_examples_are_reproducible(self):
        assert settings.default.derandomize


class TestBiLipschitz:
    """Difference-quotient estimates of L⁺ and L⁻"""

    def test_identity(self):
        upper, lower = estimate_bilipschitz(make_identity(), 1024)
        assert upper == pytest.approx(1.0, abs=1e-12)
        assert lower == pytest.approx(1.0, abs=1e-12)

    def test_example3_flat_segment(self):
        estimate = estimate_bilipschitz(make_example3(), 1024)
        assert estimate.lower == 0.0
        assert estimate.upper == pytest.approx(2.0, abs=1e-9)

    def test_smoothstep_upper(self):
        estimate = estimate_bilipschitz(make_smoothstep(), 65536)
        assert estimate.upper == pytest.approx(1.4375, abs=1e-6)

    def test_mesh_refined_near_breakpoints(self):
        t = lift_mesh(64, [1.0])
        assert np.all(np.diff(t) > 0.0)
        assert t[0] == 0.0 and t[-1] == pytest.approx(TAU)
        assert len(t) > 65

    def test_small_mesh_rejected(self):
        with pytest.raises(DomainError):
            estimate_bilipschitz(make_identity(), 8)

    def test_phi_n_lower_bound(self):
        for n in (0, 3, 6):
            assert estimate_bilipschitz(phi_n(n), 4096).lower >= 0.5 - 1e-12


class TestMembership:
    """Sampled harmonic quasiconformality criterion"""

    def test_identity_is_member(self, quick_cfg, quick_pv):
        report = check_membership(make_identity(), quick_cfg, quick_pv)
        assert report.verdict is Verdict.MEMBER
        assert report.is_member
        assert report.hilbert_sup == pytest.approx(0.0, abs=1e-12)
        assert report.strictly_increasing
        assert report.reasons == ()

    def test_example3_is_non_member(self, quick_cfg, quick_pv):
        report = check_membership(make_example3(), quick_cfg, quick_pv)
        assert report.verdict is Verdict.NON_MEMBER
        assert report.bilipschitz_lower == 0.0
        assert not report.strictly_increasing

    def test_cantor_lift_is_non_member(self, quick_cfg, quick_pv):
        report = check_membership(phi_cantor(), quick_cfg, quick_pv)
        assert report.verdict is Verdict.NON_MEMBER
        assert report.bilipschitz_lower >= 0.5 - 1e-12
        assert report.hilbert_sup is None

    @pytest.mark.parametrize("n", [0, 2, 4])
    def test_phi_n_members(self, n, quick_cfg, quick_pv):
        report = check_membership(phi_n(n), quick_cfg, quick_pv)
        assert report.verdict is Verdict.MEMBER, report.reasons
        assert math.isfinite(report.hilbert_sup)

    def test_mobius_member(self, quick_cfg, quick_pv):
        report = check_membership(make_mobius(0.3), quick_cfg, quick_pv)
        assert report.verdict is Verdict.MEMBER, report.reasons
        assert report.total_increase == pytest.approx(TAU, abs=1e-9)

    def test_smooth_lift_without_derivative(self, quick_cfg, quick_pv):
        """Numerical differentiation decides smooth lifts given without a derivative"""
        lift = LiftFunction(base=lambda t: t + 0.3 * np.sin(t), name="wobble")
        assert derivative_noise(lift, quick_cfg.mesh) < 1e-3
        report = check_membership(lift, quick_cfg, quick_pv)
        assert report.verdict is Verdict.MEMBER, report.reasons
        assert report.hilbert_sup == pytest.approx(0.3, abs=1e-3)

    def test_kinked_lift_without_derivative_is_inconclusive(self, quick_cfg, quick_pv):
        """A kink hidden from the breakpoint list makes numerical differentiation unreliable"""
        kink = 2.0

        def tent(t):
            return t + 0.3 * np.where(t <= kink, t, kink * (TAU - t) / (TAU - kink))

        lift = LiftFunction(base=tent, name="kinked")
        report = check_membership(lift, quick_cfg, quick_pv)
        assert report.verdict is Verdict.INCONCLUSIVE
        assert report.hilbert_sup is None
        assert any("noisy" in reason for reason in report.reasons)

    def test_wrong_total_increase(self, quick_cfg, quick_pv):
        lift = LiftFunction(base=lambda t: 0.5 * t, base_derivative=lambda t: np.full_like(t, 0.5), name="half")
        report = check_membership(lift, quick_cfg, quick_pv)
        assert report.verdict is Verdict.NON_MEMBER

    def test_report_serializes(self, quick_cfg, quick_pv):
        data = check_membership(make_identity(), quick_cfg, quick_pv).to_dict()
        assert data["verdict"] == "member"
        assert data["name"] == "identity"
