"""Oscillatory-part decomposition, decay certification and Bohr means.

For a validated segment the holonomy entry, transformed by the continuous
root branch of sqrt(m), splits as

    alpha(c) = alpha_inf(c) + alpha_0(c),

where alpha_inf is the two-frequency trigonometric polynomial

    alpha_inf(c) = (s00 + s11)/2 e^{-i phi} e^{+i c t_end}
                 + (s00 - s11)/2 e^{+i phi} e^{-i c t_end},
    phi = 1/2 int_0^t_end rho1,

and sup_c |c alpha_0(c)| is bounded.  This module builds alpha_inf from a
coefficient profile and initial data, sweeps residuals against the
integrated holonomy, certifies boundedness of |c alpha_0| over dyadic
windows, and provides the Bohr-mean quadratures underlying character
orthogonality.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .errors import (
    InconclusiveWitness,
    InsufficientGrid,
    QuadratureFailure,
    ValidationError,
)
from .holonomy import DEFAULT_TOL, integrate_holonomy
from .paths import ALPHA, coefficient_profile, initial_data

BOUNDED = "bounded"
SUSPICIOUS = "suspicious"

DEFAULT_WINDOW_RATIO = 1.5
DEFAULT_ZERO_FLOOR = 1e-6


class TrigPolynomial:
    """Finite sum of characters, sum_i a_i e^{i l_i c}.

    Terms with equal frequency are merged on construction; frequencies are
    kept sorted so the representation is canonical.
    """

    def __init__(self, terms):
        acc = {}
        for coeff, freq in terms:
            freq = float(freq)
            acc[freq] = acc.get(freq, 0.0 + 0.0j) + complex(coeff)
        self.terms = tuple(sorted(acc.items(), key=lambda kv: kv[0]))
        self.terms = tuple((c, f) for f, c in self.terms)

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        out = np.zeros(c.shape, dtype=complex)
        for coeff, freq in self.terms:
            out += coeff * np.exp(1j * freq * c)
        return out if out.shape else complex(out)

    @property
    def bohr_mean_exact(self):
        """Coefficient at frequency 0 (the exact Bohr mean)."""
        for coeff, freq in self.terms:
            if freq == 0.0:
                return coeff
        return 0.0 + 0.0j

    def coefficient(self, freq):
        for coeff, f in self.terms:
            if f == float(freq):
                return coeff
        return 0.0 + 0.0j


def character(freq, coeff=1.0 + 0.0j):
    """The single character chi_freq as a TrigPolynomial."""
    return TrigPolynomial([(coeff, freq)])


@dataclass(frozen=True)
class AsymptoticPart:
    """Two-frequency oscillatory part of a holonomy entry."""

    coeff_plus: complex
    coeff_minus: complex
    phase_phi: complex
    t_end: float

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        out = self.coeff_plus * np.exp(1j * self.t_end * c) + \
            self.coeff_minus * np.exp(-1j * self.t_end * c)
        return out if out.shape else complex(out)

    def as_trig_polynomial(self):
        return TrigPolynomial(
            [(self.coeff_plus, self.t_end), (self.coeff_minus, -self.t_end)]
        )


@dataclass(frozen=True)
class DecayReport:
    """Dyadic-window certificate for sup |c alpha_0|."""

    windows: tuple  # of (c_lo, c_hi, sup)
    global_sup: float
    verdict: str
    offending_window: int = None
    ratio: float = DEFAULT_WINDOW_RATIO


def asymptotic_part(cp, init, t_end):
    """Oscillatory part from a coefficient profile and initial data.

    phi = 1/2 int_0^t_end rho1, by adaptive quadrature with absolute error
    below 1e-12 (QuadratureFailure otherwise); the two frequencies are
    +-t_end.
    """
    rho1 = cp.rho1
    re, re_err = quad(lambda t: rho1(t).real, 0.0, t_end, epsabs=1e-14, epsrel=1e-13, limit=200)
    im, im_err = quad(lambda t: rho1(t).imag, 0.0, t_end, epsabs=1e-14, epsrel=1e-13, limit=200)
    if re_err + im_err > 1e-12:
        raise QuadratureFailure(
            f"phase integral error estimate {re_err + im_err:.3e} exceeds 1e-12"
        )
    phi = 0.5 * complex(re, im)
    minus_iphi = np.exp(-1j * phi)
    plus_iphi = np.exp(1j * phi)
    return AsymptoticPart(
        coeff_plus=0.5 * (init.sigma00 + init.sigma11) * minus_iphi,
        coeff_minus=0.5 * (init.sigma00 - init.sigma11) * plus_iphi,
        phase_phi=phi,
        t_end=float(t_end),
    )


def asymptotic_part_for(p, branch):
    """Convenience wrapper: sign-validate p and build its oscillatory part."""
    return asymptotic_part(coefficient_profile(p), initial_data(p, branch), p.t_end)


def residual_sweep(p, branch, c_grid, tol=DEFAULT_TOL):
    """Residuals alpha_0(c) = alpha(c) - alpha_inf(c) over the grid.

    alpha(c) is a(t_end)/sqrt(m(t_end)) for the alpha branch (b for beta),
    with the continuous root branch; the grid may include c = 0, where the
    system is regular.
    """
    asym = asymptotic_part_for(p, branch)
    root = p.sqrt_m(p.t_end)
    out = []
    for c in c_grid:
        h = integrate_holonomy(p, float(c), tol)
        entry = h.a if branch == ALPHA else h.b
        out.append((float(c), entry / root - asym(float(c))))
    return out


def dyadic_grid(c0, n_windows, points_per_window):
    """Grid covering [c0, c0 2^n] with uniform points per dyadic window."""
    pieces = []
    for j in range(n_windows):
        lo, hi = c0 * 2.0**j, c0 * 2.0 ** (j + 1)
        pieces.append(np.linspace(lo, hi, points_per_window, endpoint=False))
    pieces.append(np.array([c0 * 2.0**n_windows]))
    return np.concatenate(pieces)


def verify_decay_bound(residuals, c0, ratio=DEFAULT_WINDOW_RATIO,
                       zero_floor=DEFAULT_ZERO_FLOOR, min_windows=4,
                       min_points=64):
    """Certify boundedness of sup |c alpha_0| over dyadic windows.

    Windows are [c0, 2 c0], [2 c0, 4 c0], ...  The verdict is bounded iff
    every window sup stays within ``ratio`` times both the previous window
    and the first window (no single-step jump and no cumulative growth
    trend); sups below ``zero_floor`` count as zero so integration noise on
    exactly cancelling profiles certifies cleanly.
    """
    cs = np.array([c for c, _ in residuals], dtype=float)
    vals = np.array([v for _, v in residuals], dtype=complex)
    if cs.size == 0:
        raise InsufficientGrid("empty residual grid")
    cmax = cs.max()
    k = int(math.floor(math.log2(cmax / c0) + 1e-9))
    if k < min_windows:
        raise InsufficientGrid(
            f"grid spans only {k} dyadic windows from {c0:g}, need >= {min_windows}"
        )
    weighted = np.abs(cs * vals)
    windows = []
    for j in range(k):
        lo, hi = c0 * 2.0**j, c0 * 2.0 ** (j + 1)
        if j == k - 1:
            mask = (cs >= lo) & (cs <= hi * (1 + 1e-12))
        else:
            mask = (cs >= lo) & (cs < hi)
        count = int(mask.sum())
        if count < min_points:
            raise InsufficientGrid(
                f"window [{lo:g}, {hi:g}] holds {count} points, need >= {min_points}"
            )
        windows.append((lo, hi, float(weighted[mask].max())))

    sups = [w[2] for w in windows]
    verdict = BOUNDED
    offending = None
    for j in range(1, k):
        ok_step = sups[j] <= ratio * sups[j - 1] or sups[j] <= zero_floor
        ok_total = sups[j] <= ratio * sups[0] or sups[j] <= zero_floor
        if not (ok_step and ok_total):
            verdict = SUSPICIOUS
            offending = j
            break
    return DecayReport(
        windows=tuple(windows),
        global_sup=float(max(sups)),
        verdict=verdict,
        offending_window=offending,
        ratio=ratio,
    )


class BohrMean(NamedTuple):
    value: complex
    error: float


def _eval_on(f, xs):
    try:
        v = np.asarray(f(xs), dtype=complex)
        if v.shape == xs.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(float(x))) for x in xs], dtype=complex)


def _simpson(values, h):
    return h / 3.0 * (values[0] + values[-1]
                      + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum())


def bohr_mean(f, T, samples=65536):
    """(1/2T) int_{-T}^{T} f(c) dc by composite Simpson quadrature.

    Returns the value together with a Richardson error estimate from the
    half-resolution rule.
    """
    if T <= 0:
        raise ValidationError(f"T must be positive, got {T}")
    if samples < 1024:
        raise ValidationError(f"need samples >= 1024, got {samples}")
    n = int(samples)
    if n % 2:
        n += 1
    xs = np.linspace(-T, T, n + 1)
    values = _eval_on(f, xs)
    h = 2.0 * T / n
    full = _simpson(values, h)
    half = _simpson(values[::2], 2.0 * h)
    value = full / (2.0 * T)
    error = abs(full - half) / 15.0 / (2.0 * T) + 1e-15
    return BohrMean(value=complex(value), error=float(error))


def fourier_bohr_coefficient(f, l, T, samples=65536):
    """Bohr mean of c -> f(c) e^{-i l c} (the coefficient at frequency l)."""
    def shifted(c):
        return np.asarray(f(c)) * np.exp(-1j * l * np.asarray(c))

    return bohr_mean(shifted, T, samples)


def is_nonap_witness(f, probe_grid, eps=1e-2, eps_tail=1e-2,
                     core_max=100.0, tail_min=1000.0):
    """Certify "vanishes at infinity but not identically zero".

    True when sup |f| over the core probes (|c| <= core_max) exceeds
    10 * eps while the far tail (|c| >= tail_min) stays below eps_tail;
    nonzero almost-periodic functions attain their sup norm along
    arbitrarily large c, so a witness cannot be almost periodic.  False
    when the core sup is negligible or the tail clearly does not vanish;
    InconclusiveWitness when the tail lands in the grey zone
    [eps_tail, 10 eps_tail).
    """
    grid = np.asarray(probe_grid, dtype=float)
    if grid.size == 0 or np.abs(grid).max() < tail_min:
        raise ValidationError(f"probe grid must reach |c| >= {tail_min:g}")
    core = grid[np.abs(grid) <= core_max]
    tail = grid[np.abs(grid) >= tail_min]
    if core.size == 0:
        raise ValidationError(f"probe grid has no core points with |c| <= {core_max:g}")
    core_sup = float(np.abs(_eval_on(f, core)).max())
    tail_sup = float(np.abs(_eval_on(f, tail)).max())
    if core_sup <= 10.0 * eps:
        return False
    if tail_sup < eps_tail:
        return True
    if tail_sup >= 10.0 * eps_tail:
        return False
    raise InconclusiveWitness(
        f"tail sup {tail_sup:.3e} in the grey zone [{eps_tail:g}, {10 * eps_tail:g})"
    )
