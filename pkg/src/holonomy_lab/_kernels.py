"""Low-level adaptive Runge-Kutta kernels for the parallel-transport system.

The state is the pair (a, b) of holonomy matrix entries evolving under

    da/dt = i c (n a - m conj(b)),   db/dt = i c (n b + m conj(a)),

with a(0) = 1, b(0) = 0.  The path enters only through the profile callback
``mn(t, params) -> (m, n)``.

The scheme is the explicit Dormand-Prince 8(5,3) pair (12 stages, order 8
with the combined 5th/3rd-order error estimate); coefficients from Hairer,
Norsett & Wanner, "Solving Ordinary Differential Equations I", DOP853.
Step control is proportional-integral with the local error budget scaled by
h/t_end, so the accumulated error over the whole segment tracks the
requested tolerance (the flow is unitary, local errors do not amplify).

Everything here is compiled with numba when available; the same source runs
uncompiled (``*_py`` variants) for user-supplied Python profile callbacks.
"""

import cmath
import math

import numpy as np

try:
    from numba import njit

    NUMBA_OK = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but degrade gracefully
    NUMBA_OK = False

    def njit(*args, **kwargs):
        def wrap(f):
            f.py_func = f
            return f

        if args and callable(args[0]):
            return wrap(args[0])
        return wrap


# Dormand-Prince 8(5,3) tableau (Hairer's DOP853).
A = np.array([
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0],
    [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0],
    [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0],
    [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0],
])
B = np.array([
    0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409,
    1.8915178993145003, -5.801203960010585, 0.3111643669578199,
    -0.1521609496625161, 0.20136540080403034, 0.04471061572777259,
])
C = np.array([
    0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274,
    0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077,
    0.6512820512820513, 0.6, 0.8571428571428571, 1.0,
])
E3 = np.array([
    -0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409,
    1.8915178993145003, -5.801203960010585, -0.4226823213237919,
    -0.1521609496625161, 0.20136540080403034, 0.02265179219836082,
])
E5 = np.array([
    0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044,
    -0.4957589496572502, 1.6643771824549864, -0.35032884874997366,
    0.3341791187130175, 0.08192320648511571, -0.022355307863886294,
])

N_STAGES = 12

# Return statuses of the adaptive driver.
STATUS_OK = 0
STATUS_BUDGET = 1
STATUS_UNDERFLOW = 2

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
# PI controller exponents for an order-7 error estimator (Gustafsson).
_ALPHA = 0.7 / 8.0
_BETA = 0.4 / 8.0


def _mn_straight_impl(t, params):
    return 1.0 + 0.0j, 0.0


def _mn_circle_impl(t, params):
    r = params[0]
    return 1j * cmath.exp(1j * t / r), 0.0


def _mn_spiral_impl(t, params):
    theta = params[0] + params[1] * t
    psi = params[2] * t
    return math.cos(theta) * cmath.exp(1j * psi), math.sin(theta)


def _solve_adaptive_impl(mn, params, c, t_end, tol, h_max, max_steps):
    """Integrate (a, b) from 0 to t_end.

    Returns (a, b, status, achieved, n_steps) where ``achieved`` is the last
    scaled error-norm times the per-step budget (an absolute local error
    estimate, meaningful when status != 0).
    """
    a = 1.0 + 0.0j
    b = 0.0 + 0.0j
    t = 0.0
    ic = 1j * c

    ka = np.empty(N_STAGES, np.complex128)
    kb = np.empty(N_STAGES, np.complex128)

    m, n = mn(0.0, params)
    fa = ic * (n * a - m * b.conjugate())
    fb = ic * (n * b + m * a.conjugate())

    h = min(h_max, t_end * 1e-3)
    if h <= 0.0:
        h = t_end * 1e-3
    err_prev = 1.0
    n_steps = 0
    achieved = 0.0

    while t < t_end:
        if n_steps >= max_steps:
            return a, b, STATUS_BUDGET, achieved, n_steps
        if h < 1e-14 * t_end:
            return a, b, STATUS_UNDERFLOW, achieved, n_steps
        n_steps += 1

        last = False
        if t + h >= t_end:
            h = t_end - t
            last = True

        ka[0] = fa
        kb[0] = fb
        for i in range(1, N_STAGES):
            sa = 0.0 + 0.0j
            sb = 0.0 + 0.0j
            for j in range(i):
                aij = A[i, j]
                if aij != 0.0:
                    sa += aij * ka[j]
                    sb += aij * kb[j]
            ya = a + h * sa
            yb = b + h * sb
            m, n = mn(t + C[i] * h, params)
            ka[i] = ic * (n * ya - m * yb.conjugate())
            kb[i] = ic * (n * yb + m * ya.conjugate())

        sa = 0.0 + 0.0j
        sb = 0.0 + 0.0j
        e5a = 0.0 + 0.0j
        e5b = 0.0 + 0.0j
        e3a = 0.0 + 0.0j
        e3b = 0.0 + 0.0j
        for j in range(N_STAGES):
            bj = B[j]
            if bj != 0.0:
                sa += bj * ka[j]
                sb += bj * kb[j]
            w5 = E5[j]
            if w5 != 0.0:
                e5a += w5 * ka[j]
                e5b += w5 * kb[j]
            w3 = E3[j]
            if w3 != 0.0:
                e3a += w3 * ka[j]
                e3b += w3 * kb[j]
        a_new = a + h * sa
        b_new = b + h * sb

        # Error budget proportional to the step fraction of the segment
        # (error per unit step): the summed local errors stay near tol.
        budget = tol * (h / t_end)
        sc_a = budget * (1.0 + max(abs(a), abs(a_new)))
        sc_b = budget * (1.0 + max(abs(b), abs(b_new)))
        n5 = abs(e5a / sc_a) ** 2 + abs(e5b / sc_b) ** 2
        n3 = abs(e3a / sc_a) ** 2 + abs(e3b / sc_b) ** 2
        if n5 == 0.0 and n3 == 0.0:
            err = 0.0
        else:
            err = abs(h) * n5 / math.sqrt((n5 + 0.01 * n3) * 2.0)
        achieved = err * budget

        if err <= 1.0:
            t += h
            a = a_new
            b = b_new
            m, n = mn(t, params)
            fa = ic * (n * a - m * b.conjugate())
            fb = ic * (n * b + m * a.conjugate())
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = _SAFETY * err ** (-_ALPHA) * err_prev ** _BETA
                if factor > _MAX_FACTOR:
                    factor = _MAX_FACTOR
                elif factor < _MIN_FACTOR:
                    factor = _MIN_FACTOR
            err_prev = max(err, 1e-4)
            h = min(h * factor, h_max)
            if last and t >= t_end:
                break
        else:
            factor = _SAFETY * err ** (-_ALPHA)
            if factor < _MIN_FACTOR:
                factor = _MIN_FACTOR
            h *= factor

    return a, b, STATUS_OK, achieved, n_steps


def _solve_fixed_impl(mn, params, c, t_end, n_steps):
    """Fixed-step variant of the same scheme (no error control)."""
    a = 1.0 + 0.0j
    b = 0.0 + 0.0j
    ic = 1j * c
    h = t_end / n_steps

    ka = np.empty(N_STAGES, np.complex128)
    kb = np.empty(N_STAGES, np.complex128)

    for step in range(n_steps):
        t = step * h
        for i in range(N_STAGES):
            sa = 0.0 + 0.0j
            sb = 0.0 + 0.0j
            for j in range(i):
                aij = A[i, j]
                if aij != 0.0:
                    sa += aij * ka[j]
                    sb += aij * kb[j]
            ya = a + h * sa
            yb = b + h * sb
            m, n = mn(t + C[i] * h, params)
            ka[i] = ic * (n * ya - m * yb.conjugate())
            kb[i] = ic * (n * yb + m * ya.conjugate())
        sa = 0.0 + 0.0j
        sb = 0.0 + 0.0j
        for j in range(N_STAGES):
            bj = B[j]
            if bj != 0.0:
                sa += bj * ka[j]
                sb += bj * kb[j]
        a = a + h * sa
        b = b + h * sb

    return a, b


if NUMBA_OK:
    mn_straight = njit(cache=True)(_mn_straight_impl)
    mn_circle = njit(cache=True)(_mn_circle_impl)
    mn_spiral = njit(cache=True)(_mn_spiral_impl)
    solve_adaptive = njit(cache=True)(_solve_adaptive_impl)
    solve_fixed = njit(cache=True)(_solve_fixed_impl)
else:  # pragma: no cover
    mn_straight = _mn_straight_impl
    mn_circle = _mn_circle_impl
    mn_spiral = _mn_spiral_impl
    solve_adaptive = _solve_adaptive_impl
    solve_fixed = _solve_fixed_impl

solve_adaptive_py = _solve_adaptive_impl
solve_fixed_py = _solve_fixed_impl

_JIT_CALLBACKS = {
    "straight": mn_straight,
    "circle": mn_circle,
    "spiral": mn_spiral,
}
_PY_CALLBACKS = {
    "straight": _mn_straight_impl,
    "circle": _mn_circle_impl,
    "spiral": _mn_spiral_impl,
}


def jit_callback(name):
    return _JIT_CALLBACKS[name]


def py_callback(name):
    return _PY_CALLBACKS[name]


def warmup():
    """Force JIT compilation of all built-in kernel specializations."""
    if not NUMBA_OK:  # pragma: no cover
        return
    p1 = np.array([1.0])
    p3 = np.array([0.3, 0.1, 1.0])
    for mn, params in ((mn_straight, p1), (mn_circle, p1), (mn_spiral, p3)):
        solve_adaptive(mn, params, 1.0, 0.01, 1e-6, 0.01, 1000)
        solve_fixed(mn, params, 1.0, 0.01, 2)
