"""Oscillatory part, residuals, decay certificates, Bohr means, AP witnesses."""

import cmath
import math

import numpy as np
import pytest

from holonomy_lab import (
    ALPHA,
    BETA,
    I_THREE_HALVES,
    InconclusiveWitness,
    InsufficientGrid,
    TrigPolynomial,
    ValidationError,
    asymptotic_part_for,
    bohr_mean,
    character,
    circle_profile,
    dyadic_grid,
    f_rt,
    fourier_bohr_coefficient,
    initial_data,
    is_nonap_witness,
    residual_sweep,
    spiral_profile,
    straight_profile,
    verify_decay_bound,
)
from holonomy_lab.asymptotics import BOUNDED, SUSPICIOUS

SQRT2 = math.sqrt(2.0)


def spiral():
    return spiral_profile(0.3, 0.1, 1.0 / 0.7, 3.0)


class TestAsymptoticPart:
    def test_straight_alpha_is_cosine(self):
        asym = asymptotic_part_for(straight_profile(1.3), ALPHA)
        assert asym.coeff_plus == pytest.approx(0.5, abs=1e-14)
        assert asym.coeff_minus == pytest.approx(0.5, abs=1e-14)
        assert asym.phase_phi == pytest.approx(0.0, abs=1e-14)
        for c in (0.0, 2.2, -17.5):
            assert asym(c) == pytest.approx(math.cos(1.3 * c), abs=1e-13)

    def test_straight_beta_is_i_sine(self):
        asym = asymptotic_part_for(straight_profile(0.7), BETA)
        for c in (0.5, 9.0):
            assert asym(c) == pytest.approx(1j * math.sin(0.7 * c), abs=1e-13)

    def test_circle_beta_oscillatory_part(self):
        t = 2 * math.pi
        asym = asymptotic_part_for(circle_profile(1.0, t), BETA)
        for c in (0.4, 3.0, 12.0):
            assert asym(c) == pytest.approx(I_THREE_HALVES * math.sin(c * t), abs=1e-12)

    def test_frequencies_are_plus_minus_t_end(self):
        asym = asymptotic_part_for(spiral(), ALPHA)
        poly = asym.as_trig_polynomial()
        assert [f for _, f in poly.terms] == [-3.0, 3.0]

    def test_spiral_phase_is_half_integral_of_rho1(self):
        # rho1 = i theta'/cos(theta) + psi' sin(theta) for the spiral family;
        # both parts integrate in closed form.
        th0, eps, om, t_end = 0.3, 0.1, 1.0 / 0.7, 3.0
        th1 = th0 + eps * t_end
        # int theta'/cos = log(sec+tan), int psi' sin(theta) = -(om/eps)(cos th1 - cos th0)
        im_part = math.log((1 / math.cos(th1)) + math.tan(th1)) - \
            math.log((1 / math.cos(th0)) + math.tan(th0))
        re_part = -(om / eps) * (math.cos(th1) - math.cos(th0))
        expected = 0.5 * complex(re_part, im_part)
        asym = asymptotic_part_for(spiral(), ALPHA)
        assert asym.phase_phi == pytest.approx(expected, abs=1e-12)


class TestResidualSweep:
    def test_straight_residuals_vanish(self):
        tol = 1e-10
        res = residual_sweep(straight_profile(1.0), ALPHA, [0.0, 1.0, 12.0, 300.0], tol)
        assert max(abs(r) for _, r in res) < 100 * tol

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_circle_residual_equals_frt(self, r):
        # beta_0(c) = i^{3/2} f_{r,t}(c) for arclength circles (the sqrt(r)
        # prefactor of the non-normalized convention drops out)
        tol = 1e-9
        t = 2 * math.pi
        cs = np.linspace(1.0, 200.0, 30)
        res = residual_sweep(circle_profile(r, t), BETA, cs, tol)
        worst = max(abs(v - I_THREE_HALVES * f_rt(r, t, c)) for c, v in res)
        assert worst < 10 * tol

    def test_spiral_residual_at_origin_matches_formula(self):
        # at c = 0 the beta entry vanishes identically, so the residual is
        # -beta_inf(0) = i sigma11 sin(phi); reported, and checked against
        # that closed expression (origin-vanishing itself is not asserted).
        p = spiral()
        asym = asymptotic_part_for(p, BETA)
        init = initial_data(p, BETA)
        (c0, value), = residual_sweep(p, BETA, [0.0], 1e-10)
        predicted = 1j * init.sigma11 * cmath.sin(asym.phase_phi)
        print(f"spiral beta residual at c=0: {value:.6f} (|.| = {abs(value):.6f})")
        assert value == pytest.approx(predicted, abs=1e-9)

    def test_spiral_residual_bounded_by_k_over_c(self):
        p = spiral()
        cs = np.linspace(5.0, 160.0, 40)
        res = residual_sweep(p, ALPHA, cs, 1e-9)
        k_fit = max(abs(c * v) for c, v in res)
        assert np.isfinite(k_fit)
        for c, v in res:
            assert abs(v) <= k_fit / c + 1e-12


class TestVerifyDecayBound:
    def grid(self, windows=5):
        return dyadic_grid(5.0, windows, 80)

    def test_one_over_c_is_bounded(self):
        res = [(c, 0.3 / c) for c in self.grid()]
        rep = verify_decay_bound(res, 5.0)
        assert rep.verdict == BOUNDED
        assert rep.global_sup == pytest.approx(0.3, abs=1e-12)

    def test_sqrt_decay_is_suspicious(self):
        res = [(c, c**-0.5) for c in self.grid()]
        rep = verify_decay_bound(res, 5.0)
        assert rep.verdict == SUSPICIOUS
        assert rep.offending_window is not None

    def test_noise_level_residuals_are_bounded(self):
        res = [(c, 1e-12 * math.sin(c)) for c in self.grid()]
        rep = verify_decay_bound(res, 5.0)
        assert rep.verdict == BOUNDED

    def test_insufficient_windows_rejected(self):
        res = [(c, 1.0 / c) for c in dyadic_grid(5.0, 3, 80)]
        with pytest.raises(InsufficientGrid):
            verify_decay_bound(res, 5.0)

    def test_insufficient_points_rejected(self):
        res = [(c, 1.0 / c) for c in dyadic_grid(5.0, 5, 32)]
        with pytest.raises(InsufficientGrid):
            verify_decay_bound(res, 5.0)

    def test_circle_certificate_on_reduced_span(self):
        # the acceptance suite runs the full [5, 640] span
        grid = dyadic_grid(5.0, 4, 64)
        res = residual_sweep(circle_profile(1.0, 2 * math.pi), BETA, grid, 1e-9)
        rep = verify_decay_bound(res, 5.0)
        assert rep.verdict == BOUNDED
        # window sups of |c f_{1,2pi}| settle near t/(8 r^2) = pi/4
        assert rep.windows[-1][2] == pytest.approx(math.pi / 4, rel=0.05)

    def test_straight_certificate(self):
        grid = dyadic_grid(5.0, 4, 64)
        res = residual_sweep(straight_profile(1.0), ALPHA, grid, 1e-10)
        rep = verify_decay_bound(res, 5.0)
        assert rep.verdict == BOUNDED
        assert rep.global_sup < 1e-7

    def test_random_spiral_family_certifies_bounded(self):
        rng = np.random.default_rng(99)
        grid = dyadic_grid(5.0, 4, 64)
        for trial in range(3):
            p = spiral_profile(
                rng.uniform(0.1, 0.5), rng.uniform(0.02, 0.12),
                rng.uniform(0.5, 2.0), rng.uniform(1.0, 3.0),
            )
            branch = ALPHA if trial % 2 == 0 else BETA
            rep = verify_decay_bound(residual_sweep(p, branch, grid, 1e-9), 5.0)
            assert rep.verdict == BOUNDED


class TestBohrMean:
    def test_constant_function(self):
        value, err = bohr_mean(lambda c: np.ones_like(np.asarray(c)), 100.0, 4096)
        assert value == pytest.approx(1.0, abs=1e-14)

    def test_single_character_closed_form(self):
        # (1/2T) int e^{ilc} = sin(lT)/(lT)
        l, T = 1.3, 100.0
        value, err = bohr_mean(character(l), T, 2**17)
        assert value == pytest.approx(math.sin(l * T) / (l * T), abs=1e-9)
        assert abs(value) <= 1.0 / (l * T) + 1e-9

    def test_character_against_its_conjugate(self):
        poly = character(SQRT2)
        value, _ = bohr_mean(lambda c: poly(c) * np.conj(poly(c)), 1000.0, 2**15)
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValidationError):
            bohr_mean(lambda c: c, -1.0, 4096)
        with pytest.raises(ValidationError):
            bohr_mean(lambda c: c, 10.0, 512)

    def test_error_estimate_is_honest(self):
        l, T = 2.0, 200.0
        value, err = bohr_mean(character(l), T, 2**14)
        exact = math.sin(l * T) / (l * T)
        assert abs(value - exact) < 10 * err + 1e-12


class TestFourierBohr:
    def test_coefficient_recovery(self):
        poly = TrigPolynomial([(3.0, 2.0)])
        value, _ = fourier_bohr_coefficient(poly, 2.0, 1000.0, 2**16)
        assert value == pytest.approx(3.0, abs=3.0 / (4.0 * 1000.0) + 1e-6)

    def test_off_frequency_is_small(self):
        poly = TrigPolynomial([(3.0, 2.0)])
        value, _ = fourier_bohr_coefficient(poly, 5.0, 1000.0, 2**16)
        assert abs(value) < 2e-3

    @pytest.mark.parametrize("l", [0.0, 1.0, SQRT2])
    def test_c0_function_has_vanishing_coefficients(self, l):
        value, _ = fourier_bohr_coefficient(
            lambda c: f_rt(1.0, 2 * math.pi, c), l, 1e4, 2**19
        )
        assert abs(value) < 1e-2

    def test_gram_matrix_of_three_characters(self):
        freqs = [1.0, SQRT2, 1.0 + SQRT2]
        T, samples = 1e4, 2**17
        gram = np.empty((3, 3), dtype=complex)
        for i, li in enumerate(freqs):
            for j, lj in enumerate(freqs):
                gram[i, j] = fourier_bohr_coefficient(character(li), lj, T, samples).value
        assert np.max(np.abs(gram - np.eye(3))) < 5e-3


class TestTrigPolynomial:
    def test_duplicate_frequencies_merge(self):
        poly = TrigPolynomial([(1.0, 2.0), (2.0, 2.0), (1j, 0.0)])
        assert poly.terms == ((1j, 0.0), (3.0 + 0.0j, 2.0))

    def test_exact_bohr_mean_is_zero_frequency_coefficient(self):
        poly = TrigPolynomial([(1.5 + 0.5j, 0.0), (2.0, 1.0)])
        assert poly.bohr_mean_exact == 1.5 + 0.5j
        assert TrigPolynomial([(2.0, 1.0)]).bohr_mean_exact == 0.0

    def test_zero_frequency_extraction_randomized(self):
        rng = np.random.default_rng(23)
        T, samples = 1e4, 2**18
        for _ in range(8):
            n_terms = rng.integers(1, 5)
            freqs = rng.uniform(0.05, 5.0, n_terms) * rng.choice([-1, 1], n_terms)
            coeffs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
            terms = list(zip(coeffs, freqs))
            if rng.random() < 0.5:
                terms.append((complex(rng.normal(), rng.normal()), 0.0))
            poly = TrigPolynomial(terms)
            total = sum(abs(a) for a, _ in poly.terms)
            value, _ = bohr_mean(poly, T, samples)
            assert abs(value - poly.bohr_mean_exact) < 5e-3 * total


class TestNonApWitness:
    def probes(self):
        return np.concatenate([np.linspace(0.1, 100, 400), np.linspace(1e3, 2e3, 200)])

    def test_frt_is_a_witness(self):
        assert is_nonap_witness(lambda c: f_rt(1.0, 2 * math.pi, c), self.probes()) is True

    def test_sine_is_not(self):
        assert is_nonap_witness(np.sin, self.probes()) is False

    def test_zero_is_not(self):
        assert is_nonap_witness(lambda c: np.zeros_like(np.asarray(c)), self.probes()) is False

    def test_grey_zone_is_inconclusive(self):
        def stubborn(c):
            return np.maximum(0.05, np.exp(-np.abs(np.asarray(c)) / 50.0))

        with pytest.raises(InconclusiveWitness):
            is_nonap_witness(stubborn, self.probes())

    def test_probe_grid_must_reach_tail(self):
        with pytest.raises(ValidationError):
            is_nonap_witness(np.sin, np.linspace(0, 500, 100))
