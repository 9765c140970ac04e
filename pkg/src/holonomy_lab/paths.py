"""Analytic path segments represented by their (m, n) profile.

A path gamma(t) = (x, y, z) in R^3, parametrized by arclength on
[0, t_end], enters the parallel-transport equation only through

    m = dx/dt - i dy/dt,      n = dz/dt,

with |m|^2 + n^2 = 1 and m != 0 everywhere.  This module validates that
normalization, produces the coefficient functions

    rho0 = M^2/4 - Mdot/2,    rho1 = i (ndot - M n),    M = mdot/m,

tracks the continuous branch of sqrt(m), splits segments where Im rho0 or
Im rho1 changes sign, and computes the initial data feeding the
oscillatory-part formula.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from . import _kernels
from .errors import ArclengthViolation, SchemaError, SignChange, ZeroM

EPS_ARC = 1e-8
M_MIN = 1e-6
EPS_SIGN = 1e-10
EPS_ROOT = 1e-10
GRID_SIZE = 256

ALPHA = "alpha"
BETA = "beta"

_TWO_PI = 2.0 * math.pi


@dataclass(eq=False)
class PathProfile:
    """Validated (m, n) profile of an arclength path segment.

    Instances are immutable by convention; build them through the factory
    functions below, which run the arclength and zero-m checks on a grid of
    ``GRID_SIZE`` points.  ``_fast`` names a compiled integration kernel for
    the built-in kinds; general profiles integrate through their Python
    closures.
    """

    kind: str
    t_end: float
    m: callable
    n: callable
    m_dot: callable
    n_dot: callable
    m_ddot: callable
    length: float = None
    radius: float = None
    _fast: tuple = None
    _ts: np.ndarray = field(default=None, repr=False)
    _theta: np.ndarray = field(default=None, repr=False)

    def sqrt_m(self, t):
        """Continuous branch of sqrt(m(t)), principal at t = 0.

        The branch is fixed by unwrapping arg m along the validation grid;
        between grid nodes the winding is assumed below pi (guaranteed for
        profiles whose eigenframe turns slower than GRID_SIZE/t_end).
        """
        idx = int(round(t / self.t_end * (len(self._ts) - 1)))
        idx = min(max(idx, 0), len(self._ts) - 1)
        mv = self.m(t)
        raw = cmath.phase(mv)
        k = round((self._theta[idx] - raw) / _TWO_PI)
        return math.sqrt(abs(mv)) * cmath.exp(0.5j * (raw + _TWO_PI * k))

    def subsegment(self, t0, t1):
        """Profile of the restriction to [t0, t1], re-based to start at 0."""
        if not 0.0 <= t0 < t1 <= self.t_end + 1e-12:
            raise ValueError(f"invalid subsegment [{t0}, {t1}]")
        m, n = self.m, self.n
        md, nd, mdd = self.m_dot, self.n_dot, self.m_ddot
        return _build_profile(
            "general",
            t1 - t0,
            lambda s: m(t0 + s),
            lambda s: n(t0 + s),
            lambda s: md(t0 + s),
            lambda s: nd(t0 + s),
            lambda s: mdd(t0 + s),
        )


@dataclass(frozen=True)
class CoefficientProfile:
    """rho0, rho1 and M of a validated segment, with Im-sign tags in {-1, 0, +1}."""

    rho0: callable
    rho1: callable
    M: callable
    sign_im_rho0: int
    sign_im_rho1: int


@dataclass(frozen=True)
class InitialData:
    """Initial data (sigma00, sigma10, sigma11) of the transformed equation."""

    sigma00: complex
    sigma10: complex
    sigma11: complex
    branch: str


def _sample(f, ts):
    return np.array([f(t) for t in ts])


def _build_profile(kind, t_end, m, n, m_dot, n_dot, m_ddot, *,
                   length=None, radius=None, fast=None,
                   eps_arc=EPS_ARC, m_min=M_MIN):
    if not t_end > 0:
        raise ArclengthViolation(f"t_end must be positive, got {t_end}")
    ts = np.linspace(0.0, t_end, GRID_SIZE)
    mv = _sample(m, ts).astype(complex)
    nv = _sample(n, ts).astype(float)
    defect = np.abs(np.abs(mv) ** 2 + nv**2 - 1.0)
    worst = float(defect.max())
    if worst > eps_arc:
        raise ArclengthViolation(
            f"max ||m|^2 + n^2 - 1| = {worst:.3e} exceeds {eps_arc:.1e}"
        )
    m_lo = float(np.abs(mv).min())
    if m_lo < m_min:
        raise ZeroM(f"min |m| = {m_lo:.3e} below {m_min:.1e} on the grid")
    theta = np.unwrap(np.angle(mv))
    return PathProfile(
        kind=kind, t_end=float(t_end), m=m, n=n, m_dot=m_dot, n_dot=n_dot,
        m_ddot=m_ddot, length=length, radius=radius, _fast=fast,
        _ts=ts, _theta=theta,
    )


def straight_profile(length):
    """Straight line of the given length: m = 1, n = 0."""
    return _build_profile(
        "straight", length,
        lambda t: 1.0 + 0.0j, lambda t: 0.0,
        lambda t: 0.0j, lambda t: 0.0, lambda t: 0.0j,
        length=length, fast=("straight", np.array([0.0])),
    )


def circle_profile(radius, t_end):
    """Arclength circle of radius r (curve (r cos(t/r), -r sin(t/r), 0)).

    Gives m(t) = i e^{i t / r}, n = 0; a full loop is t_end = 2 pi r.
    """
    r = float(radius)
    if r <= 0:
        raise ArclengthViolation(f"radius must be positive, got {radius}")
    return _build_profile(
        "circle", t_end,
        lambda t: 1j * cmath.exp(1j * t / r), lambda t: 0.0,
        lambda t: (1j / r) * 1j * cmath.exp(1j * t / r), lambda t: 0.0,
        lambda t: (-1.0 / r**2) * 1j * cmath.exp(1j * t / r),
        radius=r, fast=("circle", np.array([r])),
    )


def spiral_profile(theta0, theta_rate, turn_rate, t_end):
    """Rising-pitch analytic profile with n not identically 0.

    m = cos(theta) e^{i psi}, n = sin(theta) with theta = theta0 +
    theta_rate * t and psi = turn_rate * t; arclength holds exactly.  Keep
    theta away from 0 and +-pi/2 so the Im-sign tags stay constant.
    """
    th0, eps, om = float(theta0), float(theta_rate), float(turn_rate)

    def m(t):
        return math.cos(th0 + eps * t) * cmath.exp(1j * om * t)

    def n(t):
        return math.sin(th0 + eps * t)

    def m_dot(t):
        th = th0 + eps * t
        return (-eps * math.sin(th) + 1j * om * math.cos(th)) * cmath.exp(1j * om * t)

    def n_dot(t):
        return eps * math.cos(th0 + eps * t)

    def m_ddot(t):
        th = th0 + eps * t
        return (-(eps**2 + om**2) * math.cos(th) - 2j * om * eps * math.sin(th)) * cmath.exp(1j * om * t)

    return _build_profile(
        "general", t_end, m, n, m_dot, n_dot, m_ddot,
        fast=("spiral", np.array([th0, eps, om])),
    )


def general_profile(m, n, m_dot, n_dot, t_end, m_ddot=None):
    """Profile from user-supplied evaluators with analytic derivatives.

    If m_ddot is omitted it is replaced by a central difference of m_dot
    (only the rho0 sign tags depend on it, not the integration or the
    oscillatory part).
    """
    if m_ddot is None:
        h = 1e-6 * t_end

        def m_ddot(t):
            lo = max(t - h, 0.0)
            hi = min(t + h, t_end)
            return (m_dot(hi) - m_dot(lo)) / (hi - lo)

    return _build_profile("general", t_end, m, n, m_dot, n_dot, m_ddot)


def profile_from_curve(x, y, z, t_end):
    """Profile of the curve t -> (x, y, z).

    Each coordinate is given as a triple of callables (f, f', f''); the
    caller asserts analyticity and arclength parametrization.  m'' is
    approximated by differencing m' (third curve derivatives are not part
    of the interface).
    """
    (xf, xd, xdd), (yf, yd, ydd), (zf, zd, zdd) = x, y, z

    def m(t):
        return complex(xd(t), -yd(t))

    def m_dot(t):
        return complex(xdd(t), -ydd(t))

    return general_profile(m, zd, m_dot, zdd, t_end)


def profile_from_samples(samples, t_end):
    """Cubic-spline profile from rows (t, m_re, m_im, n).

    Interpolation-grade only: closed-form accuracy tests should use
    analytic evaluators.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] < 4 or arr.shape[0] < 8:
        raise SchemaError("samples must be >= 8 rows of (t, m_re, m_im, n)")
    ts = arr[:, 0]
    if not np.all(np.diff(ts) > 0):
        raise SchemaError("sample times must be strictly increasing")
    sm = CubicSpline(ts, arr[:, 1] + 1j * arr[:, 2])
    sn = CubicSpline(ts, arr[:, 3])
    smd = sm.derivative()
    smdd = smd.derivative()
    snd = sn.derivative()
    return _build_profile(
        "general", t_end,
        lambda t: complex(sm(t)), lambda t: float(sn(t)),
        lambda t: complex(smd(t)), lambda t: float(snd(t)),
        lambda t: complex(smdd(t)),
    )


def _sign_tag(values, eps_sign):
    has_pos = bool(np.any(values > eps_sign))
    has_neg = bool(np.any(values < -eps_sign))
    if has_pos and has_neg:
        return None
    if has_pos:
        return 1
    if has_neg:
        return -1
    return 0


def coefficient_profile(p, eps_sign=EPS_SIGN):
    """Coefficient functions of the transformed second-order equation.

    Raises SignChange when Im rho0 or Im rho1 changes sign inside the
    segment; split first with :func:`split_at_sign_changes`.
    """

    def M(t):
        return p.m_dot(t) / p.m(t)

    def rho0(t):
        Mt = p.m_dot(t) / p.m(t)
        Mdot = p.m_ddot(t) / p.m(t) - Mt * Mt
        return 0.25 * Mt * Mt - 0.5 * Mdot

    def rho1(t):
        return 1j * (p.n_dot(t) - (p.m_dot(t) / p.m(t)) * p.n(t))

    ts = p._ts
    im0 = np.array([rho0(t).imag for t in ts])
    im1 = np.array([rho1(t).imag for t in ts])
    tag0 = _sign_tag(im0, eps_sign)
    tag1 = _sign_tag(im1, eps_sign)
    if tag0 is None or tag1 is None:
        which = "Im rho0" if tag0 is None else "Im rho1"
        raise SignChange(f"{which} changes sign within the segment")
    return CoefficientProfile(rho0=rho0, rho1=rho1, M=M,
                              sign_im_rho0=tag0, sign_im_rho1=tag1)


def _crossings(f, ts, values, eps_sign, eps_root):
    """Roots of f where the sampled values cross through zero."""
    roots = []
    prev_idx = None
    prev_sign = 0
    for i, v in enumerate(values):
        s = 1 if v > eps_sign else (-1 if v < -eps_sign else 0)
        if s == 0:
            continue
        if prev_sign != 0 and s != prev_sign:
            root = brentq(f, ts[prev_idx], ts[i], xtol=min(eps_root, 1e-12))
            roots.append(root)
        prev_idx, prev_sign = i, s
    return roots


def split_at_sign_changes(p, eps_sign=EPS_SIGN, eps_root=EPS_ROOT):
    """Split p so each returned segment passes the Im-sign invariant.

    Returns [p] unchanged when no split is needed; otherwise the returned
    segments concatenate to p, cut at the located zero crossings.
    """

    def im_rho0(t):
        Mt = p.m_dot(t) / p.m(t)
        Mdot = p.m_ddot(t) / p.m(t) - Mt * Mt
        return (0.25 * Mt * Mt - 0.5 * Mdot).imag

    def im_rho1(t):
        return (1j * (p.n_dot(t) - (p.m_dot(t) / p.m(t)) * p.n(t))).imag

    ts = p._ts
    cuts = []
    for f in (im_rho0, im_rho1):
        vals = np.array([f(t) for t in ts])
        cuts.extend(_crossings(f, ts, vals, eps_sign, eps_root))
    if not cuts:
        return [p]
    cuts = sorted(cuts)
    merged = [cuts[0]]
    for t in cuts[1:]:
        if t - merged[-1] > 1e-9 * p.t_end:
            merged.append(t)
    bounds = [0.0] + merged + [p.t_end]
    return [p.subsegment(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def initial_data(p, branch):
    """Initial data of the transformed equation for the given branch.

    Alpha is the a-entry branch, Beta the b-entry branch; sqrt(m(0)) uses
    the principal root.
    """
    s0 = p.sqrt_m(0.0)
    if branch == ALPHA:
        M0 = p.m_dot(0.0) / p.m(0.0)
        return InitialData(
            sigma00=1.0 / s0,
            sigma10=-0.5 * M0 / s0,
            sigma11=p.n(0.0) / s0,
            branch=ALPHA,
        )
    if branch == BETA:
        return InitialData(sigma00=0.0 + 0.0j, sigma10=0.0 + 0.0j,
                           sigma11=s0, branch=BETA)
    raise ValueError(f"branch must be '{ALPHA}' or '{BETA}', got {branch!r}")


def load_path_spec(spec):
    """Build a profile from the path-spec JSON dictionary.

    Format: {"kind": "straight", "length": L} |
            {"kind": "circle", "radius": r, "t_end": T} |
            {"kind": "general", "t_end": T, "samples": [[t, m_re, m_im, n], ...]}
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError("path spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "straight":
            return straight_profile(float(spec["length"]))
        if kind == "circle":
            return circle_profile(float(spec["radius"]), float(spec["t_end"]))
        if kind == "general":
            return profile_from_samples(spec["samples"], float(spec["t_end"]))
    except KeyError as exc:
        raise SchemaError(f"path spec kind {kind!r} is missing field {exc}") from exc
    raise SchemaError(f"unknown path kind {kind!r}")


def kernel_for(p):
    """(callback, params, jitted) triple used by the integrator."""
    if p._fast is not None and _kernels.NUMBA_OK:
        name, params = p._fast
        return _kernels.jit_callback(name), params, True
    m, n = p.m, p.n

    def mn(t, params):
        return complex(m(t)), float(n(t))

    return mn, np.array([0.0]), False
