from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import derivatives, fd_adomian, rach_polynomials
from vadm.adomian import (U, Const, ModeSeries, adomian_coefficient, adomian_field,
                          adomian_polynomials, arctan, cos, exp, sin)
from vadm.fem import QuadratureSpace
from vadm.jet import Jet
from vadm.mesh import build_unit_square_mesh

REACTIONS = {
    "square": U ** 2,
    "exp": exp(U),
    "sin": sin(U),
    "cos": cos(U),
    "arctan": arctan(U),
    "cubic": U - U ** 3,
    "bratu": -2 * exp(U),
    "mixed": sin(U) * exp(U) - 3 * U ** 4 + arctan(2 * U),
}

mode_values = st.floats(-1.5, 1.5, allow_nan=False, allow_infinity=False)


class TestJet:
    def test_order_zero_is_plain_evaluation(self):
        for r in REACTIONS.values():
            assert r.evaluate(Jet([0.3])).c[0] == pytest.approx(r(0.3), rel=1e-15)

    def test_taylor_of_exp_sin(self):
        u = 0.7
        assert exp(U).taylor(u, 3) == pytest.approx([np.exp(u), np.exp(u), np.exp(u) / 2, np.exp(u) / 6])
        assert sin(U).taylor(u, 3) == pytest.approx([np.sin(u), np.cos(u), -np.sin(u) / 2, -np.cos(u) / 6])

    def test_taylor_of_arctan(self):
        u = 0.4
        d1 = 1 / (1 + u * u)
        d2 = -2 * u / (1 + u * u) ** 2
        d3 = (6 * u * u - 2) / (1 + u * u) ** 3
        assert arctan(U).taylor(u, 3) == pytest.approx([np.arctan(u), d1, d2 / 2, d3 / 6], rel=1e-14)

    @given(st.lists(mode_values, min_size=4, max_size=4), st.lists(mode_values, min_size=4, max_size=4),
           st.lists(mode_values, min_size=4, max_size=4))
    def test_associative_exact(self, a, b, c):
        A, B, C = (Jet([Fraction(v) for v in x]) for x in (a, b, c))
        assert ((A * B) * C).c == (A * (B * C)).c
        assert (A * (B + C)).c == (A * B + A * C).c

    def test_exp_recurrence_exact_rationals(self):
        # exp jet with c_0 = 0 and rational higher coefficients: e' = e u' holds exactly
        u = Jet([0.0, Fraction(1, 2), Fraction(-1, 3), Fraction(2, 7)])
        e = u.exp()
        de = Jet([(k + 1) * e[k + 1] for k in range(3)])
        du = Jet([(k + 1) * u[k + 1] for k in range(3)])
        assert (de - e * du).c == [0, 0, 0]

    def test_sincos_pythagoras(self):
        u = Jet([0.3, 1.1, -0.4, 0.25, 0.9])
        s, c = u.sincos()
        assert np.allclose((s * s + c * c).c, [1, 0, 0, 0, 0], atol=1e-15)

    def test_power_with_zero_constant(self):
        u = Jet([0.0, 1.0, 0.0, 0.0])
        assert (u ** 3).c == [0.0, 0.0, 0.0, 1.0]
        assert (u ** 0).c == [1.0, 0.0, 0.0, 0.0]


class TestClosedForms:
    @given(st.lists(mode_values, min_size=3, max_size=3))
    def test_square(self, m):
        P = adomian_polynomials(U ** 2, m)
        p0, p1, p2 = m
        assert P == pytest.approx([p0 ** 2, 2 * p0 * p1, p1 ** 2 + 2 * p0 * p2], abs=1e-12)

    @given(st.lists(mode_values, min_size=3, max_size=3))
    def test_twice_exp_zero_start(self, m):
        p1, p2, p3 = m
        P = adomian_polynomials(2 * exp(U), [0.0, p1, p2, p3])
        assert P == pytest.approx([2, 2 * p1, 2 * p2 + p1 ** 2, p1 ** 3 / 3 + 2 * p3 + 2 * p1 * p2], abs=1e-12)

    @given(st.lists(mode_values, min_size=6, max_size=6), st.floats(-3, 3))
    def test_linear(self, m, c):
        P = adomian_polynomials(c * U, m)
        assert P == pytest.approx([c * v for v in m], abs=1e-14)

    def test_remark_all_zero(self):
        P = adomian_polynomials(U ** 3 - U, [0.0] * 8)
        assert all(p == 0 for p in P)

    def test_constant_reaction(self):
        P = adomian_polynomials(Const(2.5), [0.3, 0.1, -0.2])
        assert P == [2.5, 0.0, 0.0]

    def test_sin_at_half_pi(self):
        t = 0.37
        assert adomian_coefficient(sin(U), [np.pi / 2, t]) == pytest.approx(0.0, abs=1e-16)
        # cross-check with finite differences in lambda
        assert fd_adomian("sin", [np.pi / 2, t], 1) == pytest.approx(0.0, abs=1e-12)

    def test_single_mode(self):
        for r in REACTIONS.values():
            P = adomian_polynomials(r, [0.42, 0.0, 0.0, 0.0])
            assert P[0] == pytest.approx(r(0.42), rel=1e-15)
            assert P[1:] == [0.0, 0.0, 0.0]

    def test_nonfinite_reported(self):
        with pytest.raises(FloatingPointError):
            adomian_coefficient(exp(U), [1e4, 1.0])


@pytest.mark.parametrize("name", ["square", "exp", "sin"])
def test_rach_recursion(name):
    rng = np.random.default_rng(7)
    for _ in range(20):
        modes = rng.uniform(-1, 1, size=7)
        expected = rach_polynomials(derivatives(name, modes[0], 6), modes)
        got = adomian_polynomials(REACTIONS[name], modes)
        assert np.allclose(got, expected, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("name", sorted(REACTIONS))
def test_reconstruction_finite_differences(name):
    rng = np.random.default_rng(11)
    modes = rng.uniform(-0.8, 0.8, size=5)
    P = adomian_polynomials(REACTIONS[name], modes)
    for k in range(5):
        fd = fd_adomian(name, modes, k)
        assert P[k] == pytest.approx(fd, rel=1e-6, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(mode_values, min_size=6, max_size=6), st.lists(mode_values, min_size=2, max_size=2))
def test_dependency_only_on_lower_modes(m, noise):
    for r in REACTIONS.values():
        P = adomian_polynomials(r, m)
        k = 3
        perturbed = list(m)
        perturbed[4] += noise[0]
        perturbed[5] += noise[1]
        assert adomian_polynomials(r, perturbed)[k] == P[k]


@pytest.mark.parametrize("name", sorted(REACTIONS))
def test_linear_in_top_mode(name):
    r = REACTIONS[name]
    rng = np.random.default_rng(5)
    modes = list(rng.uniform(-0.7, 0.7, size=5))
    for k in range(1, 5):
        base = adomian_polynomials(r, modes[:k + 1])[k]
        bumped = modes[:k + 1]
        bumped[k] += 1.0
        slope = adomian_polynomials(r, bumped)[k] - base
        assert slope == pytest.approx(r.derivative(modes[0]), rel=1e-10, abs=1e-12)


class TestModeSeries:
    def test_partial_sum_telescopes(self):
        rng = np.random.default_rng(0)
        s = ModeSeries()
        for _ in range(5):
            s.append(rng.normal(size=7))
        for M in range(1, 5):
            assert np.allclose(s.partial_sum(M) - s.partial_sum(M - 1), s[M], atol=1e-15)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            ModeSeries([np.zeros(3)]).partial_sum(1)


class TestAdomianField:
    def setup_method(self):
        self.mesh = build_unit_square_mesh(3)
        self.space = QuadratureSpace(self.mesh)

    def test_constant_reaction(self):
        s = ModeSeries([np.ones(16), np.ones(16)])
        assert np.all(adomian_field(Const(3.0), s, 0, self.space) == 3.0)
        assert np.all(adomian_field(Const(3.0), s, 1, self.space) == 0.0)

    def test_matches_pointwise(self):
        rng = np.random.default_rng(2)
        s = ModeSeries([rng.normal(size=16) for _ in range(4)])
        vals = adomian_field(sin(U), s, 3, self.space)
        pts = [self.space.at_points(m) for m in s.modes]
        for q in (0, 17, 40):
            assert vals[q] == pytest.approx(adomian_coefficient(sin(U), [p[q] for p in pts]), abs=1e-15)

    def test_needs_modes(self):
        with pytest.raises(ValueError):
            adomian_field(U, ModeSeries([np.zeros(16)]), 1, self.space)
