"""Parallel transport along path profiles for connections c*A0.

Integrates the first-order system

    da/dt = i c (n a - m conj(b)),    db/dt = i c (n b + m conj(a)),
    a(0) = 1, b(0) = 0,

whose solution is the SU(2) holonomy [[a, b], [-conj(b), conj(a)]], and
provides the closed forms for straight lines and circles that serve as
independent oracles, the circle-minus-line family f_{r,t}, composition of
holonomies, and sweeps over c grids.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ToleranceNotMet, ValidationError
from .paths import kernel_for

TOL_MIN = 1e-13
TOL_MAX = 1e-3
DEFAULT_TOL = 1e-10
MAX_STEPS = 1_000_000

# i^{3/2} with the principal convention, e^{3 pi i / 4}.
I_THREE_HALVES = cmath.exp(0.75j * math.pi)


@dataclass(frozen=True)
class SU2Element:
    """Entries (a, b) of the matrix [[a, b], [-conj(b), conj(a)]]."""

    a: complex
    b: complex

    def __post_init__(self):
        if self.unitarity_defect() > 1e-2:
            raise ValidationError(
                f"not close to SU(2): | |a|^2+|b|^2 - 1 | = {self.unitarity_defect():.3e}"
            )

    def unitarity_defect(self):
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0)

    def matrix(self):
        return np.array(
            [[self.a, self.b], [-self.b.conjugate(), self.a.conjugate()]]
        )


IDENTITY = SU2Element(1.0 + 0.0j, 0.0 + 0.0j)


@dataclass(frozen=True)
class CSweep:
    """Sampled map c -> holonomy over a strictly increasing grid."""

    c_grid: tuple
    values: tuple
    profile: object
    tol: float


def _ceiling(c, t_end):
    return min(t_end, 1.0 / (1.0 + abs(c)))


def integrate_holonomy(p, c, tol=DEFAULT_TOL, max_steps=MAX_STEPS):
    """Holonomy (a(t_end), b(t_end)) for the connection parameter c.

    Adaptive Dormand-Prince 8(5,3) with local error budget tol scaled per
    unit step and a step ceiling 1/(1+|c|) so the oscillation in c stays
    resolved.  Raises ToleranceNotMet when the step budget runs out.
    """
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ValidationError(f"tol must lie in [{TOL_MIN:g}, {TOL_MAX:g}], got {tol:g}")
    mn, params, jitted = kernel_for(p)
    solver = _kernels.solve_adaptive if jitted else _kernels.solve_adaptive_py
    a, b, status, achieved, n_steps = solver(
        mn, params, float(c), p.t_end, tol, _ceiling(c, p.t_end), max_steps
    )
    if status != _kernels.STATUS_OK:
        reason = "step budget exhausted" if status == _kernels.STATUS_BUDGET else "step size underflow"
        raise ToleranceNotMet(
            f"{reason} after {n_steps} steps at c={c:g} "
            f"(last local error estimate {achieved:.3e})",
            achieved=achieved,
        )
    return SU2Element(a, b)


def _integrate_fixed(p, c, n_steps):
    """Fixed-step variant used by the empirical order check."""
    mn, params, jitted = kernel_for(p)
    solver = _kernels.solve_fixed if jitted else _kernels.solve_fixed_py
    a, b = solver(mn, params, float(c), p.t_end, n_steps)
    return SU2Element(a, b)


def holonomy_straight(length, c):
    """Closed form for a straight line: a = cos(c l), b = i sin(c l)."""
    if length <= 0:
        raise ValidationError(f"length must be positive, got {length}")
    cl = c * length
    return SU2Element(complex(math.cos(cl)), 1j * math.sin(cl))


def holonomy_circle(r, t, c):
    """Closed form for the arclength circle profile of radius r at time t.

    With w = sqrt(c^2 + 1/(4r^2)):

        a = e^{i t/(2r)} (cos(w t) - i sin(w t) / (2 r w)),
        b = -e^{i t/(2r)} (c / w) sin(w t),

    which is sqrt(m(t)) times the (alpha, beta) closed forms under the
    continuous root branch.
    """
    if r <= 0 or t <= 0:
        raise ValidationError("circle requires r > 0 and t > 0")
    w = math.sqrt(c * c + 1.0 / (4.0 * r * r))
    phase = cmath.exp(0.5j * t / r)
    a = phase * (math.cos(w * t) - 1j * math.sin(w * t) / (2.0 * r * w))
    b = -phase * (c / w) * math.sin(w * t)
    return SU2Element(a, b)


def holonomy_circle_beta(r, t, c):
    """The transformed-entry closed form for circles,

        beta(t) = i^{3/2} c sqrt(r) / sqrt(c^2 + 1/(4r^2))
                  * sin(t sqrt(c^2 + 1/(4r^2))),

    with i^{3/2} = e^{3 pi i / 4}.  Note the sqrt(r) normalization ties
    this expression to the root branch sqrt(i r); the b entry of
    holonomy_circle corresponds to the arclength branch sqrt(i), so the two
    coincide (after multiplying by the continuous sqrt(m)) exactly at r = 1.
    """
    if r <= 0 or t <= 0:
        raise ValidationError("circle requires r > 0 and t > 0")
    w = math.sqrt(c * c + 1.0 / (4.0 * r * r))
    return I_THREE_HALVES * c * math.sqrt(r) / w * math.sin(t * w)


def f_rt(r, t, c):
    """Circle-minus-line combination

        f_{r,t}(c) = c/sqrt(c^2 + 1/(4r^2)) sin(t sqrt(c^2 + 1/(4r^2))) - sin(c t),

    continuous, f(0) = 0 exactly, vanishing as |c| -> infinity; works on
    scalars and numpy arrays.
    """
    if r <= 0 or t <= 0:
        raise ValidationError("f_rt requires r > 0 and t > 0")
    w = np.sqrt(c * c + 1.0 / (4.0 * r * r))
    return c / w * np.sin(t * w) - np.sin(c * t)


def compose(h_later, h_earlier):
    """Matrix product h_later . h_earlier.

    For the concatenation gamma1 followed by gamma2 the total holonomy is
    compose(h(gamma2), h(gamma1)), consistent with the propagator equation
    dg/dt = -c A(gamma') g.
    """
    a2, b2 = h_later.a, h_later.b
    a1, b1 = h_earlier.a, h_earlier.b
    return SU2Element(
        a2 * a1 - b2 * b1.conjugate(),
        a2 * b1 + b2 * a1.conjugate(),
    )


def inverse(h):
    """Inverse in SU(2): (a, b) -> (conj(a), -b)."""
    return SU2Element(h.a.conjugate(), -h.b)


def sweep(p, c_grid, tol=DEFAULT_TOL):
    """Element-wise integrate_holonomy over a strictly increasing c grid.

    Entries are independent and deterministic; a ToleranceNotMet from any
    entry propagates with the offending c in its message.
    """
    c_grid = tuple(float(c) for c in c_grid)
    if any(b <= a for a, b in zip(c_grid, c_grid[1:])):
        raise ValidationError("c grid must be strictly increasing")
    values = tuple(integrate_holonomy(p, c, tol) for c in c_grid)
    return CSweep(c_grid=c_grid, values=values, profile=p, tol=tol)
