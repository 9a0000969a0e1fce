"""
Tests for the reduced space, its bracket and the critical-set analysis
"""

import math

import numpy as np
import pytest

from core.dynamics import PhaseState
from core.exceptions import ConfigError, DegenerateChart
from core.reduction import (
    HopfPoint, ReducedFunction, ReducedPoint, X, Y, axis_points, casimir_F, casimir_function,
    critical_points_Keps, critical_points_N1, epsilon_certificate, fd_restricted_hessian, gamma_samples,
    grad_F, hessian_test, hopf_map, lift_reduced_point, on_gamma, parallel_residual, psi_chart,
    reduced_bracket, reduced_K, reduced_K_eps, reduced_vector_field, restrict_to_level,
    restricted_hessian, syzygy_residual,
)
from core.symmath import R1, R2


@pytest.fixture
def x_fn():
    return ReducedFunction.from_poly(X, "x")


@pytest.fixture
def y_fn():
    return ReducedFunction.from_poly(Y, "y")


class TestHopfMap:
    """Phase space to invariants"""

    def test_unit_state(self, unit_state):
        assert hopf_map(unit_state).as_array().tolist() == [2.0, 5.0, 4.0, -2.0]

    def test_zero_state(self):
        assert hopf_map(PhaseState(0.0, 0.0, 0.0, 0.0)).as_array().tolist() == [0.0] * 4

    def test_mode1_only(self):
        assert hopf_map(PhaseState(1.0, 0.0, 0.0, 0.0)).as_array().tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_syzygy_on_image(self, rng):
        for row in rng.normal(size=(10, 4)):
            assert abs(syzygy_residual(hopf_map(PhaseState.from_sequence(row)))) < 1e-10

    def test_syzygy_off_variety(self):
        assert syzygy_residual(HopfPoint(1.0, 1.0, 1.0, 1.0)) == 1.0
        assert syzygy_residual(HopfPoint(2.0, 5.0, 4.0, -2.0)) == 0.0

    def test_level_is_h0(self, unit_state):
        assert hopf_map(unit_state).level == pytest.approx(3.5)


class TestCasimir:
    """The pinched sphere F = 0"""

    def test_pole(self):
        assert casimir_F(ReducedPoint(0.0, 0.0, 2.0), 1.0) == 0.0

    def test_pinch(self):
        for h in (0.5, 1.0, 3.0):
            assert casimir_F(ReducedPoint(0.0, 0.0, 0.0), h) == 0.0

    def test_point_of_gamma(self):
        assert casimir_F(ReducedPoint(1.0, 0.0, 1.0), 1.0) == 0.0

    def test_function_matches_closed_form(self, rng):
        F = casimir_function(1.5)
        p = ReducedPoint.from_sequence(rng.uniform(-1, 2, 3))
        assert F(p) == pytest.approx(casimir_F(p, 1.5), abs=1e-12)
        assert np.allclose(F.grad(p), grad_F(p, 1.5))


class TestReducedBracket:
    """{f, g} = 2 <grad g, grad f x grad F>"""

    def test_antisymmetric(self, x_fn, rng):
        p = ReducedPoint.from_sequence(rng.uniform(0, 1, 3))
        assert reduced_bracket(x_fn, x_fn, p, 1.0) == 0.0

    def test_casimir(self, x_fn, rng):
        F = casimir_function(1.0)
        p = ReducedPoint.from_sequence(rng.uniform(0, 1, 3))
        assert abs(reduced_bracket(x_fn, F, p, 1.0)) < 1e-12
        assert abs(reduced_bracket(F, x_fn, p, 1.0)) < 1e-12

    def test_x_y_at_pole(self, x_fn, y_fn):
        assert reduced_bracket(x_fn, y_fn, ReducedPoint(0.0, 0.0, 2.0), 1.0) == pytest.approx(-8.0)

    def test_matches_generator_bracket(self, x_fn, y_fn):
        """{rho3, rho4} = -2 rho1 (rho1 - 2 rho2) with rho2 = 2h - z"""
        h, p = 1.0, ReducedPoint(0.3, -0.2, 0.7)
        z = p.z
        assert reduced_bracket(x_fn, y_fn, p, h) == pytest.approx(-2.0 * z * (z - 2.0 * (2.0 * h - z)))

    def test_casimir_field_vanishes(self, rng):
        F = casimir_function(2.0)
        p = ReducedPoint.from_sequence(rng.uniform(0, 2, 3))
        assert np.allclose(reduced_vector_field(F, p, 2.0), 0.0)

    def test_field_of_K_vanishes_on_gamma_and_pole(self):
        K = reduced_K(1.0)
        for p in gamma_samples(1.0, 12) + [ReducedPoint(0.0, 0.0, 2.0)]:
            assert np.abs(reduced_vector_field(K, p, 1.0)).max() < 1e-12


class TestRestriction:
    """Invariants restricted to the level"""

    def test_K(self):
        K = reduced_K(1.0)
        for z in (0.25, 1.0, 1.7):
            assert K(ReducedPoint(0.0, 0.0, z)) == pytest.approx((2.0 * z - z * z) / 16.0, abs=1e-15)

    def test_energy_is_constant(self):
        E = restrict_to_level(R1 + R2, 1.5)
        assert E(ReducedPoint(0.1, 0.2, 0.3)) == pytest.approx(3.0)
        assert np.allclose(E.grad(ReducedPoint(0.1, 0.2, 0.3)), 0.0)

    def test_K_eps_gradient(self):
        h, eps = 1.0, 0.05
        p = ReducedPoint(0.4, -0.3, 0.8)
        expected = [-eps * p.x / 96.0, -eps * p.y / 24.0,
                    (h - p.z) / 8.0 - 5.0 * eps / 768.0 * (4 * h * h - 8 * h * p.z + 3 * p.z ** 2)]
        assert np.allclose(reduced_K_eps(h, eps).grad(p), expected, atol=1e-15)


class TestLift:
    """Reduced point back to phase space"""

    def test_hopf_image_round_trip(self):
        h = 1.3
        for p in gamma_samples(h, 7) + [ReducedPoint(0.0, 0.0, 2.0 * h)]:
            image = hopf_map(lift_reduced_point(p, h))
            assert np.allclose(image.reduced().as_array(), p.as_array(), atol=1e-12)
            assert image.level == pytest.approx(h)

    def test_pinch_lifts_to_mode2(self):
        s = lift_reduced_point(ReducedPoint(0.0, 0.0, 0.0), 2.0)
        assert (s.q1, s.p1, s.q2) == (0.0, 0.0, 0.0)
        assert hopf_map(s).rho2 == pytest.approx(4.0)

    def test_outside_surface(self):
        with pytest.raises(ConfigError):
            lift_reduced_point(ReducedPoint(0.0, 0.0, 3.0), 1.0)


class TestCriticalSetsN1:
    """Critical points of the first-order reduced Hamiltonian"""

    @pytest.mark.parametrize("h", [1.0, 2.0])
    def test_pole_and_circle_only(self, h):
        report = critical_points_N1(h)
        assert report.complete
        pole = report.isolated[0]
        assert np.allclose(pole.point.as_array(), [0.0, 0.0, 2.0 * h], atol=1e-9)
        assert pole.residual < 1e-10
        assert report.circle_radius_sq == pytest.approx(h ** 3)
        assert report.circle_z == h
        assert report.circle_max_residual < 1e-10
        assert report.circle_found_by_search > 0

    def test_report_dict(self):
        data = critical_points_N1(1.0, grid=120).to_dict()
        kinds = [c["type"] for c in data["critical_sets"]]
        assert kinds == ["point", "circle"]

    def test_nonpositive_level(self):
        with pytest.raises(ConfigError):
            critical_points_N1(0.0)

    def test_gamma_membership(self):
        assert on_gamma(ReducedPoint(1.0, 0.0, 1.0), 1.0)
        assert not on_gamma(ReducedPoint(0.0, 0.0, 2.0), 1.0)


class TestHessian:
    """Restricted Hessian at the pole"""

    def test_h1(self):
        report = hessian_test(1.0)
        assert np.allclose(report.eigenvalues, 1.0 / 16.0, atol=1e-12)
        assert report.determinant == pytest.approx(1.0 / 256.0, abs=1e-12)
        assert report.printed_value == pytest.approx(0.0625)
        assert report.reproduced_by == "eigenvalue"
        assert report.verdict == "non-degenerate"

    def test_h2(self):
        report = hessian_test(2.0)
        assert np.allclose(report.eigenvalues, 1.0 / 32.0, atol=1e-12)
        assert report.determinant == pytest.approx(1.0 / 1024.0, abs=1e-12)
        assert report.printed_value == pytest.approx(1.0 / 64.0)
        assert report.verdict == "non-degenerate"

    def test_finite_difference_agrees(self):
        for h in (1.0, 2.0):
            report = hessian_test(h)
            assert np.abs(report.fd_matrix - report.matrix).max() < 1e-6

    def test_implicit_chart_off_pole(self):
        K, h = reduced_K(1.0), 1.0
        p = ReducedPoint(0.2, 0.1, psi_chart(0.2, 0.1, h, 1.9))
        assert abs(casimir_F(p, h)) < 1e-12
        assert np.abs(restricted_hessian(K, p, h) - fd_restricted_hessian(K, p, h)).max() < 1e-6

    def test_chart_fails_where_dFdz_vanishes(self):
        with pytest.raises(DegenerateChart):
            psi_chart(0.0, 0.0, 1.5, 2.0)


class TestSecondOrder:
    """Degeneracy of Gamma_h resolved by K_eps"""

    def test_certificate(self):
        root, at_root, only_h0 = epsilon_certificate()
        assert root == "h"
        assert at_root == "(5/768)*h^2"
        assert only_h0

    def test_axis_points(self):
        zs = [p.z for p in axis_points(1.0)]
        assert len(zs) == 2
        assert zs[0] == pytest.approx(2.0 / 3.0, abs=1e-8)
        assert zs[1] == pytest.approx(2.0, abs=1e-8)

    def test_axis_point_off_surface(self):
        inner = axis_points(1.0)[0]
        assert casimir_F(inner, 1.0) < 0.0

    def test_scan(self):
        report = critical_points_Keps(1.0, [0.01, 0.05], grid=160)
        assert report.no_gradient_zero
        assert report.gamma_certified
        assert not report.gamma_critical_for_all
        for scan in report.scans:
            assert any(np.allclose(c.point.as_array(), [0.0, 0.0, 2.0], atol=1e-9) for c in scan.critical)
            assert not any(on_gamma(c.point, 1.0) for c in scan.critical)
            for c in scan.critical:
                assert parallel_residual(reduced_K_eps(1.0, scan.epsilon), c.point, 1.0) < 1e-10

    def test_gamma_bound(self):
        h, eps = 2.0, 0.1
        K = reduced_K_eps(h, eps)
        bound = eps * h ** 1.5 / 96.0
        assert min(np.linalg.norm(K.grad(p)) for p in gamma_samples(h)) >= bound

    def test_epsilon_range(self):
        with pytest.raises(ConfigError):
            critical_points_Keps(1.0, [0.0])
        with pytest.raises(ConfigError):
            critical_points_Keps(1.0, [1.5])

    def test_n1_gradient_vanishes_on_gamma_only_in_z(self):
        """First-order gradient on Gamma_h is exactly zero; K_eps lifts it"""
        p = gamma_samples(1.0, 4)[1]
        assert np.allclose(reduced_K(1.0).grad(p), 0.0, atol=1e-15)
        assert np.linalg.norm(reduced_K_eps(1.0, 0.01).grad(p)) > 0.0
        assert math.isclose(p.z, 1.0)
