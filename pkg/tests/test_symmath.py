"""
Tests for the exact polynomial algebra: brackets, averaging, Hopf rewriting
"""

import math

import numpy as np
import pytest
from sympy.polys.domains import QQ

from core.dynamics import PhaseState, h0_flow
from core.exceptions import ConfigError, NotInvariant
from core.symmath import (
    N2_PRINTED, P1, P2, PHASE_RING, Q1, Q2, R1, R2, R3, R4, WILBERFORCE_H1, average, bracket_table,
    canonicalize, equal_mod_syzygy, evaluate, expand_hopf, format_poly, h0_poly, hopf_generators,
    normal_form_order1, normal_form_order2, poisson, poly_from_dict, poly_to_dict, pullback_flow,
    random_phase_poly, s_operator, syzygy, to_hopf,
)


class TestPoisson:
    """Canonical bracket"""

    def test_canonical_pair(self):
        assert poisson(Q1, P1) == PHASE_RING.one
        assert poisson(P1, Q1) == -PHASE_RING.one
        assert not poisson(Q1, P2)

    def test_generator_relation(self):
        r1, _, r3, r4 = hopf_generators()
        assert poisson(r1, r3) == -4 * r4

    def test_antisymmetry(self, rng):
        f = random_phase_poly(rng, 4)
        g = random_phase_poly(rng, 3)
        assert not poisson(f, f)
        assert poisson(f, g) == -poisson(g, f)

    def test_jacobi_identity(self, rng):
        f, g, k = (random_phase_poly(rng, 3, n_terms=4) for _ in range(3))
        total = poisson(f, poisson(g, k)) + poisson(g, poisson(k, f)) + poisson(k, poisson(f, g))
        assert not total


class TestPullback:
    """Fourier series of f along the H0 flow"""

    def test_q1_has_first_harmonics(self):
        series = pullback_flow(Q1)
        assert series.harmonics == [-1, 1]
        assert series.is_real()

    def test_rho1_is_constant(self):
        r1 = hopf_generators()[0]
        series = pullback_flow(r1)
        assert series.harmonics == [0]
        assert series.at_zero() == r1

    def test_matches_numerical_flow(self, rng):
        f = Q1 ** 2 * Q2 + P1 * P2 ** 2
        s = PhaseState.from_sequence(rng.uniform(-1, 1, 4))
        series = pullback_flow(f)
        for t in (0.0, 0.4, 2.1):
            moved = h0_flow(1.0, 2.0, s, t)
            value = series.evaluate(t, s.as_tuple())
            assert value.real == pytest.approx(evaluate(f, moved.as_tuple()), abs=1e-12)
            assert abs(value.imag) < 1e-12

    def test_rejects_non_integer_frequencies(self):
        with pytest.raises(ConfigError):
            pullback_flow(Q1, 1, 0)


class TestAverage:
    """Averaging over the 2pi-periodic flow"""

    def test_pure_harmonic_averages_to_zero(self):
        assert not average(Q1)

    def test_q1_squared(self):
        assert average(Q1 ** 2) == (Q1 ** 2 + P1 ** 2) * QQ(1, 2)

    def test_perturbation(self):
        expected = (Q1 ** 2 + P1 ** 2) * (4 * Q2 ** 2 + P2 ** 2) * QQ(1, 16)
        assert average(WILBERFORCE_H1) == expected

    def test_average_is_invariant(self, rng):
        assert not poisson(average(random_phase_poly(rng, 4)), h0_poly())


class TestSOperator:
    """Solution of the homological equation"""

    def test_invariants_map_to_zero(self, rng):
        assert not s_operator(hopf_generators()[0])
        assert not s_operator(average(random_phase_poly(rng, 4)))

    def test_homological_identity_for_perturbation(self):
        assert poisson(h0_poly(), s_operator(WILBERFORCE_H1)) == average(WILBERFORCE_H1) - WILBERFORCE_H1

    def test_homological_identity_random(self, rng):
        for _ in range(5):
            f = random_phase_poly(rng, 4)
            assert poisson(h0_poly(), s_operator(f)) == average(f) - f


class TestNormalForm:
    """First and second order normal form of the pendulum"""

    def test_order1(self):
        assert to_hopf(normal_form_order1(WILBERFORCE_H1)) == R1 * R2 * QQ(1, 16)

    def test_order1_of_invariant_is_itself(self):
        r1 = hopf_generators()[0]
        assert normal_form_order1(r1) == r1

    def test_order1_of_odd_term_vanishes(self):
        assert not normal_form_order1(Q1)

    def test_order2_printed(self):
        n2 = to_hopf(normal_form_order2(WILBERFORCE_H1, "printed"))
        assert equal_mod_syzygy(n2, N2_PRINTED)

    def test_order2_half(self):
        printed = normal_form_order2(WILBERFORCE_H1, "printed")
        half = normal_form_order2(WILBERFORCE_H1, "half")
        assert half * 2 == printed

    def test_order2_of_invariant_vanishes(self):
        r1, r2, _, _ = hopf_generators()
        assert not normal_form_order2(r1 * r2)

    def test_unknown_convention(self):
        with pytest.raises(ConfigError):
            normal_form_order2(WILBERFORCE_H1, "deprit")


class TestHopf:
    """Generators, syzygy and rewriting"""

    def test_generators_at_unit_state(self):
        values = [evaluate(r, (1.0, 1.0, 1.0, 1.0)) for r in hopf_generators()]
        assert values == [2.0, 5.0, 4.0, -2.0]

    def test_syzygy_is_exact(self):
        assert not expand_hopf(syzygy())

    def test_general_coprime_syzygy(self):
        assert not expand_hopf(syzygy(2, 3), 2, 3)

    def test_generators_are_invariant(self):
        for r in hopf_generators():
            assert not poisson(r, h0_poly())

    def test_to_hopf_generator(self):
        assert to_hopf(Q1 ** 2 + P1 ** 2) == R1

    def test_to_hopf_average(self):
        assert to_hopf(average(WILBERFORCE_H1)) == R1 * R2 * QQ(1, 16)

    def test_not_invariant(self):
        with pytest.raises(NotInvariant):
            to_hopf(Q1)

    def test_round_trip(self, rng):
        f = average(random_phase_poly(rng, 6, n_terms=8))
        assert expand_hopf(to_hopf(f)) == f

    def test_canonical_form_has_no_rho3_squared(self):
        c = canonicalize(R3 ** 3 + R3 ** 2 * R4)
        assert all(m[2] < 2 for m in c.monoms())
        assert equal_mod_syzygy(c, R3 ** 3 + R3 ** 2 * R4)


class TestBracketTable:
    """Generator commutation relations"""

    def test_five_printed_relations(self):
        rows = {r.pair: r for r in bracket_table()}
        for pair in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4)):
            assert rows[pair].matches_expected and rows[pair].matches_printed

    def test_rho3_rho4_coefficient(self):
        row = {r.pair: r for r in bracket_table()}[(3, 4)]
        assert row.matches_expected
        assert not row.matches_printed
        assert equal_mod_syzygy(row.computed, -2 * R1 * (R1 - 2 * R2))


class TestFormatting:
    """Text and dict export"""

    def test_format(self):
        assert format_poly(R1 * R2 * QQ(1, 16)) == "(1/16)*rho1*rho2"
        assert format_poly(PHASE_RING.zero) == "0"

    def test_format_negative_leading(self):
        assert format_poly(-R1 + R2 * 3) == "-rho1 + 3*rho2"

    def test_dict_export(self):
        data = poly_to_dict(N2_PRINTED)
        assert data["1,2,0,0"] == "-5/768"
        assert poly_from_dict(data) == N2_PRINTED

    def test_evaluate_array(self):
        xs = np.linspace(-1.0, 1.0, 5)
        values = evaluate(Q1 ** 2 + P1, (xs, xs, xs, xs))
        assert np.allclose(values, xs ** 2 + xs)

    def test_evaluate_scalar(self):
        assert evaluate(Q1 * Q2 * QQ(1, 3), (3.0, 0.0, math.pi, 0.0)) == pytest.approx(math.pi)
