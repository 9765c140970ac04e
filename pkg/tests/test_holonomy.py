"""Integrator vs closed-form oracles, composition, sweeps, convergence order."""

import cmath
import math

import numpy as np
import pytest

from holonomy_lab import (
    IDENTITY,
    I_THREE_HALVES,
    SU2Element,
    ToleranceNotMet,
    ValidationError,
    circle_profile,
    compose,
    f_rt,
    holonomy_circle,
    holonomy_circle_beta,
    holonomy_straight,
    integrate_holonomy,
    inverse,
    spiral_profile,
    straight_profile,
    sweep,
)
from holonomy_lab.holonomy import _integrate_fixed


def frobenius(h1, h2):
    return math.sqrt(2.0 * (abs(h1.a - h2.a) ** 2 + abs(h1.b - h2.b) ** 2))


class TestClosedForms:
    def test_straight_values(self):
        h = holonomy_straight(1.0, 0.0)
        assert (h.a, h.b) == (1.0, 0.0)
        h = holonomy_straight(1.0, math.pi / 2)
        assert h.a == pytest.approx(0.0, abs=1e-15)
        assert h.b == pytest.approx(1j, abs=1e-15)
        h = holonomy_straight(2.0, math.pi)  # period 2 pi / l in c
        assert h.a == pytest.approx(1.0, abs=1e-12)
        assert abs(h.b) < 1e-12

    def test_circle_closed_form_is_unitary(self):
        for r in (0.5, 1.0, 2.0):
            for c in (0.1, 3.0, 47.0):
                h = holonomy_circle(r, 2 * math.pi, c)
                assert h.unitarity_defect() < 1e-14

    def test_circle_beta_matches_displayed_modulus(self):
        # |h^1_2| = |sin(2 pi c sqrt(1 + 1/(4c^2)))| / sqrt(1 + 1/(4c^2))
        for c in (0.3, 1.0, 7.7, 42.0):
            beta = holonomy_circle_beta(1.0, 2 * math.pi, c)
            s = math.sqrt(1.0 + 1.0 / (4 * c * c))
            assert abs(beta) == pytest.approx(abs(math.sin(2 * math.pi * c * s)) / s, abs=1e-13)

    def test_circle_beta_at_zero_c(self):
        assert holonomy_circle_beta(1.0, 2 * math.pi, 0.0) == 0

    def test_circle_beta_is_b_over_continuous_root(self):
        # at r = 1 the arclength and the sqrt(i r) conventions coincide
        p = circle_profile(1.0, math.pi)
        c = 10.0
        h = integrate_holonomy(p, c, 1e-11)
        beta_num = h.b / p.sqrt_m(math.pi)
        assert abs(beta_num - holonomy_circle_beta(1.0, math.pi, c)) < 1e-10


class TestIntegrateHolonomy:
    def test_straight_at_pi(self):
        h = integrate_holonomy(straight_profile(1.0), math.pi, 1e-10)
        assert abs(h.a - (-1.0)) < 1e-9
        assert abs(h.b) < 1e-9

    @pytest.mark.parametrize("p", [
        straight_profile(1.0),
        circle_profile(1.0, 2 * math.pi),
        spiral_profile(0.3, 0.1, 1.4, 3.0),
    ])
    def test_c_zero_gives_identity(self, p):
        h = integrate_holonomy(p, 0.0, 1e-10)
        assert h.a == 1.0 and h.b == 0.0
        h = integrate_holonomy(p, 1e-8, 1e-10)
        assert frobenius(h, IDENTITY) < 1e-6

    def test_circle_matches_ode(self):
        p = circle_profile(1.0, 2 * math.pi)
        c = 1.0
        h = integrate_holonomy(p, c, 1e-10)
        assert abs(h.b - holonomy_circle(1.0, 2 * math.pi, c).b) < 1e-9

    def test_oracle_agreement_full_grid(self):
        tol = 1e-10
        cs = np.arange(-50.0, 50.5, 0.5)
        worst = 0.0
        for length in (0.3, 1.0, 2.0):
            p = straight_profile(length)
            for c in cs:
                worst = max(worst, frobenius(
                    integrate_holonomy(p, c, tol), holonomy_straight(length, c)))
        for r in (0.5, 1.0, 2.0):
            for t in (math.pi, 2 * math.pi):
                p = circle_profile(r, t)
                for c in cs:
                    worst = max(worst, frobenius(
                        integrate_holonomy(p, c, tol), holonomy_circle(r, t, c)))
        assert worst < 10 * tol

    def test_unitarity_drift(self):
        tol = 1e-10
        for p in (circle_profile(0.5, math.pi), spiral_profile(0.2, 0.08, 1.1, 2.0)):
            for c in (0.0, 3.3, 25.0, 50.0):
                h = integrate_holonomy(p, c, tol)
                assert h.unitarity_defect() < 100 * tol

    def test_tolerance_validation(self):
        p = straight_profile(1.0)
        with pytest.raises(ValidationError):
            integrate_holonomy(p, 1.0, 1e-14)
        with pytest.raises(ValidationError):
            integrate_holonomy(p, 1.0, 1e-2)

    def test_tolerance_not_met_reports_achieved(self):
        p = circle_profile(1.0, 2 * math.pi)
        with pytest.raises(ToleranceNotMet) as err:
            integrate_holonomy(p, 5000.0, 1e-12, max_steps=200)
        assert "200" in str(err.value)


class TestConvergenceOrder:
    def test_fixed_step_halving_reduces_error(self):
        # empirical order >= 2: halving the step cuts the error by >= 4x
        p = circle_profile(1.0, 2 * math.pi)
        c = 3.0
        exact = holonomy_circle(1.0, 2 * math.pi, c)
        errors = []
        for n in (40, 80, 160):
            h = _integrate_fixed(p, c, n)
            errors.append(frobenius(h, exact))
        assert errors[1] < errors[0] / 4.0
        assert errors[2] < errors[1] / 4.0

    def test_adaptive_error_tracks_tolerance(self):
        p = circle_profile(1.0, 2 * math.pi)
        c = 30.0
        exact = holonomy_circle(1.0, 2 * math.pi, c)
        coarse = frobenius(integrate_holonomy(p, c, 1e-5), exact)
        fine = frobenius(integrate_holonomy(p, c, 1e-9), exact)
        assert fine < coarse / 4.0


class TestComposition:
    def test_identity_and_inverse(self):
        h = holonomy_circle(1.0, math.pi, 2.3)
        assert frobenius(compose(IDENTITY, h), h) == 0
        assert frobenius(compose(h, inverse(h)), IDENTITY) < 1e-14

    def test_straight_segments_add(self):
        for c in (0.7, 5.0, -3.2):
            h = compose(holonomy_straight(2.0, c), holonomy_straight(1.0, c))
            assert frobenius(h, holonomy_straight(3.0, c)) < 1e-12

    def test_straight_segments_add_through_ode(self):
        c, tol = 4.0, 1e-10
        h1 = integrate_holonomy(straight_profile(1.2), c, tol)
        h2 = integrate_holonomy(straight_profile(0.8), c, tol)
        assert frobenius(compose(h2, h1), holonomy_straight(2.0, c)) < 20 * tol

    @pytest.mark.parametrize("p", [
        circle_profile(1.0, 2 * math.pi),
        spiral_profile(0.3, 0.1, 1.4, 3.0),
    ])
    def test_homomorphism_under_random_splits(self, p):
        rng = np.random.default_rng(11)
        tol = 1e-10
        for c in (1.5, 17.0):
            whole = integrate_holonomy(p, c, tol)
            for t_star in rng.uniform(0.2, p.t_end - 0.2, 5):
                first = integrate_holonomy(p.subsegment(0.0, t_star), c, tol)
                second = integrate_holonomy(p.subsegment(t_star, p.t_end), c, tol)
                assert frobenius(compose(second, first), whole) < 20 * tol


class TestSweep:
    def test_straight_sweep_values(self):
        sw = sweep(straight_profile(1.0), [0.0, math.pi, 2 * math.pi], 1e-10)
        expected = [(1.0, 0.0), (-1.0, 0.0), (1.0, 0.0)]
        for h, (ea, eb) in zip(sw.values, expected):
            assert abs(h.a - ea) < 1e-9 and abs(h.b - eb) < 1e-9

    def test_empty_grid(self):
        sw = sweep(straight_profile(1.0), [], 1e-10)
        assert sw.values == ()

    def test_grid_must_increase(self):
        with pytest.raises(ValidationError):
            sweep(straight_profile(1.0), [1.0, 1.0], 1e-10)

    def test_circle_sweep_against_oracle(self):
        tol = 1e-10
        p = circle_profile(1.0, 2 * math.pi)
        grid = np.linspace(5.0, 50.0, 64)
        sw = sweep(p, grid, tol)
        for c, h in zip(sw.c_grid, sw.values):
            assert frobenius(h, holonomy_circle(1.0, 2 * math.pi, c)) < 10 * tol

    def test_sweep_matches_elementwise_calls(self):
        p = spiral_profile(0.3, 0.1, 1.4, 2.0)
        grid = [0.5, 2.0, 9.0]
        sw = sweep(p, grid, 1e-9)
        for c, h in zip(grid, sw.values):
            single = integrate_holonomy(p, c, 1e-9)
            assert h.a == single.a and h.b == single.b

    def test_concurrent_entries_are_order_independent(self):
        from concurrent.futures import ThreadPoolExecutor

        p = circle_profile(1.0, 2 * math.pi)
        grid = list(np.linspace(0.5, 20.0, 16))
        serial = [integrate_holonomy(p, c, 1e-9) for c in grid]
        with ThreadPoolExecutor(max_workers=4) as pool:
            threaded = list(pool.map(lambda c: integrate_holonomy(p, c, 1e-9), grid))
        shuffled_idx = [7, 0, 15, 3, 11, 1, 9, 5, 13, 2, 10, 6, 14, 4, 12, 8]
        reshuffled = [integrate_holonomy(p, grid[i], 1e-9) for i in shuffled_idx]
        for i, (a, b) in enumerate(zip(serial, threaded)):
            assert a.a == b.a and a.b == b.b
        for i, h in zip(shuffled_idx, reshuffled):
            assert h.a == serial[i].a and h.b == serial[i].b


class TestFrt:
    def test_zero_at_origin_exactly(self):
        for r, t in ((0.5, math.pi), (1.0, 2 * math.pi), (2.0, 1.0)):
            assert f_rt(r, t, 0.0) == 0.0

    def test_decay_at_large_c(self):
        assert abs(f_rt(1.0, 2 * math.pi, 1000.0)) < 1e-2
        assert abs(f_rt(1.0, 2 * math.pi, -1000.0)) < 1e-2

    def test_residual_relation_between_closed_forms(self):
        # i^{3/2} sqrt(r) f_{r,t}(c) = beta(c) - i^{3/2} sqrt(r) sin(ct)
        for r in (0.5, 1.0, 2.0):
            for c in (0.3, 2.0, 31.0):
                t = 2 * math.pi
                lhs = I_THREE_HALVES * math.sqrt(r) * f_rt(r, t, c)
                rhs = holonomy_circle_beta(r, t, c) - I_THREE_HALVES * math.sqrt(r) * math.sin(c * t)
                assert abs(lhs - rhs) < 1e-13

    def test_vectorized_evaluation(self):
        cs = np.linspace(-5, 5, 11)
        vals = f_rt(1.0, 2 * math.pi, cs)
        assert vals.shape == cs.shape
        assert vals[5] == 0.0  # c = 0

    @pytest.mark.parametrize("r,t", [(0.5, math.pi), (1.0, 2 * math.pi), (2.0, 2 * math.pi)])
    def test_linear_bound_near_origin(self, r, t):
        # |f| <= L |c| near 0; L fitted on a coarse grid must dominate a
        # finer one, and agree with the slope |2r sin(t/(2r)) - t| at 0
        coarse = np.linspace(1e-4, 0.2, 50)
        L = float(np.max(np.abs(f_rt(r, t, coarse) / coarse)))
        assert np.isfinite(L)
        fine = np.linspace(1e-6, 0.2, 997)
        assert np.all(np.abs(f_rt(r, t, fine)) <= 1.01 * L * fine + 1e-14)
        slope = abs(2 * r * math.sin(t / (2 * r)) - t)
        tiny = 1e-6
        assert abs(f_rt(r, t, tiny)) == pytest.approx(slope * tiny, rel=1e-4, abs=1e-12)

    def test_domain_validation(self):
        with pytest.raises(ValidationError):
            f_rt(-1.0, 1.0, 0.5)


class TestSU2Element:
    def test_rejects_grossly_non_unitary(self):
        with pytest.raises(ValidationError):
            SU2Element(2.0 + 0.0j, 0.0j)

    def test_matrix_layout(self):
        h = SU2Element(0.6 + 0.0j, 0.8j)
        m = h.matrix()
        assert m[1, 0] == -np.conj(m[0, 1])
        assert m[1, 1] == np.conj(m[0, 0])
