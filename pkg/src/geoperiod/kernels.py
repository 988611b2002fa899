"""Numerical kernels with optional JIT acceleration.

The hot inner loops of the package live here: tensor-grid oscillatory
quadrature sums, fixed-step propagation of warped-surface geodesics used
inside boundary-value shooting, and integer lattice shell counts.  When
numba is importable and the environment variable ``GEOPERIOD_NO_NUMBA``
is unset (or ``0``), the scalar-loop kernels are compiled with ``njit``.
Vectorized pure-numpy implementations of the same reductions are always
available under ``*_numpy`` names so both paths can be exercised and
benchmarked; ``benchmarks/bench_kernels.py`` compares them.

Summation order is fixed per kernel (rows accumulated in index order),
so repeated calls with identical inputs produce identical results on a
given backend.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLE = os.environ.get("GEOPERIOD_NO_NUMBA", "") not in ("", "0")

HAS_NUMBA = False
if not _DISABLE:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

USE_NUMBA = HAS_NUMBA

# Warp profile kind codes shared with manifold.WarpProfile subclasses.
PROFILE_COSH = 0
PROFILE_QUADRATIC = 1
PROFILE_COSH_QUAD = 2
PROFILE_POLY = 3


# ---------------------------------------------------------------------------
# warp profile scalar math
#
# Each profile f(r) is evaluated through ratio forms (f'/f, f''/f, 1/f^2)
# that stay finite long after f itself would overflow; stable-Jacobi
# integrations walk geodesics out to r ~ 1e6.
# ---------------------------------------------------------------------------


def _sech(x):
    # 2 e^{-|x|} / (1 + e^{-2|x|}): no overflow for any x.
    a = abs(x)
    e = math.exp(-a)
    return 2.0 * e / (1.0 + e * e)


def profile_f(kind, par, r):
    """Profile value f(r); may overflow to inf for huge arguments."""
    if kind == PROFILE_COSH:
        x = par[0] * r
        if abs(x) > 709.0:
            return math.inf
        return math.cosh(x)
    if kind == PROFILE_QUADRATIC:
        return par[0] + par[1] * r * r
    if kind == PROFILE_COSH_QUAD:
        x = par[0] * r
        if abs(x) > 709.0:
            return math.inf
        return math.cosh(x) + par[1] * r * r
    # polynomial, coefficients low order first
    acc = 0.0
    for i in range(len(par) - 1, -1, -1):
        acc = acc * r + par[i]
    return acc


def profile_log_slope(kind, par, r):
    """f'(r)/f(r), finite for all r for the built-in profiles."""
    if kind == PROFILE_COSH:
        b = par[0]
        return b * math.tanh(b * r)
    if kind == PROFILE_QUADRATIC:
        a, c = par[0], par[1]
        return 2.0 * c * r / (a + c * r * r)
    if kind == PROFILE_COSH_QUAD:
        b, c = par[0], par[1]
        s = _sech(b * r)
        # (b sinh + 2 c r) / (cosh + c r^2), scaled by sech.
        return (b * math.tanh(b * r) + 2.0 * c * r * s) / (1.0 + c * r * r * s)
    acc = 0.0
    der = 0.0
    for i in range(len(par) - 1, -1, -1):
        der = der * r + acc
        acc = acc * r + par[i]
    return der / acc


def profile_neg_curv(kind, par, r):
    """f''(r)/f(r) = -K(r), the negated Gauss curvature along the fiber."""
    if kind == PROFILE_COSH:
        return par[0] * par[0]
    if kind == PROFILE_QUADRATIC:
        a, c = par[0], par[1]
        return 2.0 * c / (a + c * r * r)
    if kind == PROFILE_COSH_QUAD:
        b, c = par[0], par[1]
        s = _sech(b * r)
        return (b * b + 2.0 * c * s) / (1.0 + c * r * r * s)
    acc = 0.0
    der = 0.0
    der2 = 0.0
    for i in range(len(par) - 1, -1, -1):
        der2 = der2 * r + 2.0 * der
        der = der * r + acc
        acc = acc * r + par[i]
    return der2 / acc


def profile_inv_f2(kind, par, r):
    """1/f(r)^2, underflowing gracefully to zero."""
    if kind == PROFILE_COSH:
        s = _sech(par[0] * r)
        return s * s
    if kind == PROFILE_QUADRATIC:
        f = par[0] + par[1] * r * r
        return 1.0 / (f * f)
    if kind == PROFILE_COSH_QUAD:
        s = _sech(par[0] * r)
        den = 1.0 + par[1] * r * r * s
        return (s * s) / (den * den)
    f = 0.0
    for i in range(len(par) - 1, -1, -1):
        f = f * r + par[i]
    return 1.0 / (f * f)


# ---------------------------------------------------------------------------
# warped-surface geodesic propagation
#
# Unit-speed geodesics of dr^2 + f(r)^2 dtheta^2 obey
#     r'' = (1 - r'^2) f'(r)/f(r),     theta' = c / f(r)^2,
# with the Clairaut constant c = f^2 theta'.  The radial equation uses only
# the ratio f'/f, so propagation is stable far beyond the overflow range
# of f itself.
# ---------------------------------------------------------------------------


def warp_geodesic_rk4(kind, par, r0, th0, vr0, cl, t_total, n_steps):
    """Propagate (r, theta, r') over t_total with n_steps RK4 steps.

    Returns (r, theta, vr, r_lo, r_hi) where r_lo/r_hi track the radial
    excursion for chart-domain checks.
    """
    h = t_total / n_steps
    r = r0
    th = th0
    vr = vr0
    r_lo = r0
    r_hi = r0
    for _ in range(n_steps):
        k1r = vr
        k1t = cl * profile_inv_f2(kind, par, r)
        k1v = (1.0 - vr * vr) * profile_log_slope(kind, par, r)

        r2 = r + 0.5 * h * k1r
        v2 = vr + 0.5 * h * k1v
        k2r = v2
        k2t = cl * profile_inv_f2(kind, par, r2)
        k2v = (1.0 - v2 * v2) * profile_log_slope(kind, par, r2)

        r3 = r + 0.5 * h * k2r
        v3 = vr + 0.5 * h * k2v
        k3r = v3
        k3t = cl * profile_inv_f2(kind, par, r3)
        k3v = (1.0 - v3 * v3) * profile_log_slope(kind, par, r3)

        r4 = r + h * k3r
        v4 = vr + h * k3v
        k4r = v4
        k4t = cl * profile_inv_f2(kind, par, r4)
        k4v = (1.0 - v4 * v4) * profile_log_slope(kind, par, r4)

        r += h * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
        th += h * (k1t + 2.0 * k2t + 2.0 * k3t + k4t) / 6.0
        vr += h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        if r < r_lo:
            r_lo = r
        if r > r_hi:
            r_hi = r
    return r, th, vr, r_lo, r_hi


def warp_geodesic_table(kind, par, r0, th0, vr0, cl, t_total, n_steps):
    """Dense variant of warp_geodesic_rk4 storing the state at every node."""
    out = np.empty((n_steps + 1, 3))
    h = t_total / n_steps
    r = r0
    th = th0
    vr = vr0
    out[0, 0] = r
    out[0, 1] = th
    out[0, 2] = vr
    for i in range(n_steps):
        k1r = vr
        k1t = cl * profile_inv_f2(kind, par, r)
        k1v = (1.0 - vr * vr) * profile_log_slope(kind, par, r)

        r2 = r + 0.5 * h * k1r
        v2 = vr + 0.5 * h * k1v
        k2r = v2
        k2t = cl * profile_inv_f2(kind, par, r2)
        k2v = (1.0 - v2 * v2) * profile_log_slope(kind, par, r2)

        r3 = r + 0.5 * h * k2r
        v3 = vr + 0.5 * h * k2v
        k3r = v3
        k3t = cl * profile_inv_f2(kind, par, r3)
        k3v = (1.0 - v3 * v3) * profile_log_slope(kind, par, r3)

        r4 = r + h * k3r
        v4 = vr + h * k3v
        k4r = v4
        k4t = cl * profile_inv_f2(kind, par, r4)
        k4v = (1.0 - v4 * v4) * profile_log_slope(kind, par, r4)

        r += h * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
        th += h * (k1t + 2.0 * k2t + 2.0 * k3t + k4t) / 6.0
        vr += h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        out[i + 1, 0] = r
        out[i + 1, 1] = th
        out[i + 1, 2] = vr
    return out


# ---------------------------------------------------------------------------
# oscillatory tensor-grid sums
# ---------------------------------------------------------------------------


def bump_scalar(t, plateau):
    """Radial bump profile: 1 on [0, plateau], smooth cutoff to 0 at 1.

    Transition through s -> sig(1-s)/(sig(s)+sig(1-s)) with
    sig(u) = exp(-1/u); every derivative vanishes at both junctions.
    """
    if t <= plateau:
        return 1.0
    if t >= 1.0:
        return 0.0
    s = (t - plateau) / (1.0 - plateau)
    e1 = math.exp(-1.0 / s)
    e2 = math.exp(-1.0 / (1.0 - s))
    return e2 / (e1 + e2)


# Phase kind codes shared with oscint phase classes.
PHASE_QUADRATIC = 0
PHASE_LINEAR = 1
PHASE_LINEAR_SQUARE = 2


def osc_sum_1d(nodes, lam, kind, pp, plateau):
    acc_re = 0.0
    acc_im = 0.0
    for i in range(nodes.size):
        x = nodes[i]
        a = bump_scalar(abs(x), plateau)
        if a > 0.0:
            if kind == PHASE_QUADRATIC:
                ph = 0.5 * pp[0] * x * x
            else:
                ph = pp[0] * x
            w = lam * ph
            acc_re += a * math.cos(w)
            acc_im += a * math.sin(w)
    return complex(acc_re, acc_im)


def osc_sum_2d(nodes, lam, kind, pp, plateau):
    acc_re = 0.0
    acc_im = 0.0
    n = nodes.size
    for i in range(n):
        x = nodes[i]
        row_re = 0.0
        row_im = 0.0
        for j in range(n):
            y = nodes[j]
            t = math.sqrt(x * x + y * y)
            if t < 1.0:
                a = bump_scalar(t, plateau)
                if a > 0.0:
                    if kind == PHASE_QUADRATIC:
                        ph = 0.5 * (pp[0] * x * x + 2.0 * pp[1] * x * y + pp[3] * y * y)
                    elif kind == PHASE_LINEAR:
                        ph = pp[0] * x + pp[1] * y
                    else:
                        ph = pp[0] * x + pp[1] * y * y
                    w = lam * ph
                    row_re += a * math.cos(w)
                    row_im += a * math.sin(w)
        acc_re += row_re
        acc_im += row_im
    return complex(acc_re, acc_im)


def osc_sum_3d(nodes, lam, kind, pp, plateau):
    acc_re = 0.0
    acc_im = 0.0
    n = nodes.size
    for i in range(n):
        x = nodes[i]
        for j in range(n):
            y = nodes[j]
            xy2 = x * x + y * y
            if xy2 < 1.0:
                row_re = 0.0
                row_im = 0.0
                for k in range(n):
                    z = nodes[k]
                    t = math.sqrt(xy2 + z * z)
                    if t < 1.0:
                        a = bump_scalar(t, plateau)
                        if a > 0.0:
                            if kind == PHASE_QUADRATIC:
                                ph = 0.5 * (
                                    pp[0] * x * x
                                    + pp[4] * y * y
                                    + pp[8] * z * z
                                    + 2.0 * (pp[1] * x * y + pp[2] * x * z + pp[5] * y * z)
                                )
                            else:
                                ph = pp[0] * x + pp[1] * y + pp[2] * z
                            w = lam * ph
                            row_re += a * math.cos(w)
                            row_im += a * math.sin(w)
                acc_re += row_re
                acc_im += row_im
    return complex(acc_re, acc_im)


# ---------------------------------------------------------------------------
# integer lattice shell counts
# ---------------------------------------------------------------------------


def _isqrt_exact(x):
    s = int(math.sqrt(float(x)))
    while (s + 1) * (s + 1) <= x:
        s += 1
    while s * s > x:
        s -= 1
    return s


def lattice_count(n, lam2):
    """Number of m in Z^n with |m|^2 == lam2."""
    if lam2 < 0:
        return 0
    if lam2 == 0:
        return 1
    total = 0
    if n == 1:
        s = _isqrt_exact(lam2)
        if s * s == lam2:
            total = 2
        return total
    if n == 2:
        amax = _isqrt_exact(lam2)
        for a in range(amax + 1):
            rem = lam2 - a * a
            b = _isqrt_exact(rem)
            if b * b == rem:
                mult = 1 if a == 0 else 2
                mult *= 1 if b == 0 else 2
                total += mult
        return total
    amax = _isqrt_exact(lam2)
    for a in range(amax + 1):
        rem_a = lam2 - a * a
        bmax = _isqrt_exact(rem_a)
        for b in range(bmax + 1):
            rem = rem_a - b * b
            c = _isqrt_exact(rem)
            if c * c == rem:
                mult = 1 if a == 0 else 2
                mult *= 1 if b == 0 else 2
                mult *= 1 if c == 0 else 2
                total += mult
    return total


# ---------------------------------------------------------------------------
# pure-numpy fallbacks (always importable)
# ---------------------------------------------------------------------------


def bump_values_numpy(t, plateau):
    """Vectorized bump profile, same transition as bump_scalar."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    out[t <= plateau] = 1.0
    mid = (t > plateau) & (t < 1.0)
    if np.any(mid):
        s = (t[mid] - plateau) / (1.0 - plateau)
        e1 = np.exp(-1.0 / s)
        e2 = np.exp(-1.0 / (1.0 - s))
        out[mid] = e2 / (e1 + e2)
    return out


def _phase_values_numpy(kind, pp, coords):
    """Phase on stacked coordinate arrays coords[axis]."""
    dim = len(coords)
    if kind == PHASE_QUADRATIC:
        q = np.asarray(pp, dtype=float).reshape(dim, dim)
        ph = np.zeros(np.broadcast(*coords).shape)
        for a in range(dim):
            for b in range(dim):
                ph = ph + 0.5 * q[a, b] * coords[a] * coords[b]
        return ph
    if kind == PHASE_LINEAR:
        ph = pp[0] * coords[0]
        for a in range(1, dim):
            ph = ph + pp[a] * coords[a]
        return ph
    return pp[0] * coords[0] + pp[1] * coords[1] ** 2


def osc_sum_1d_numpy(nodes, lam, kind, pp, plateau):
    a = bump_values_numpy(np.abs(nodes), plateau)
    ph = _phase_values_numpy(kind, pp, [nodes])
    vals = a * np.exp(1j * lam * ph)
    return complex(np.sum(vals))


def osc_sum_2d_numpy(nodes, lam, kind, pp, plateau, chunk=256):
    n = nodes.size
    total = 0j
    y = nodes[None, :]
    for start in range(0, n, chunk):
        x = nodes[start : start + chunk, None]
        t = np.sqrt(x * x + y * y)
        a = bump_values_numpy(t, plateau)
        ph = _phase_values_numpy(kind, pp, [np.broadcast_to(x, a.shape), np.broadcast_to(y, a.shape)])
        rows = np.sum(a * np.exp(1j * lam * ph), axis=1)
        total += np.sum(rows)
    return complex(total)


def osc_sum_3d_numpy(nodes, lam, kind, pp, plateau, chunk=16):
    n = nodes.size
    total = 0j
    y = nodes[None, :, None]
    z = nodes[None, None, :]
    for start in range(0, n, chunk):
        x = nodes[start : start + chunk, None, None]
        t = np.sqrt(x * x + y * y + z * z)
        a = bump_values_numpy(t, plateau)
        sh = a.shape
        ph = _phase_values_numpy(
            kind, pp, [np.broadcast_to(x, sh), np.broadcast_to(y, sh), np.broadcast_to(z, sh)]
        )
        slabs = np.sum(a * np.exp(1j * lam * ph), axis=(1, 2))
        total += np.sum(slabs)
    return complex(total)


def lattice_count_numpy(n, lam2):
    if lam2 < 0:
        return 0
    if lam2 == 0:
        return 1
    if n == 1:
        s = math.isqrt(lam2)
        return 2 if s * s == lam2 else 0
    if n == 2:
        a = np.arange(math.isqrt(lam2) + 1, dtype=np.int64)
        rem = lam2 - a * a
        b = np.rint(np.sqrt(rem.astype(float))).astype(np.int64)
        ok = b * b == rem
        mult = np.where(a == 0, 1, 2) * np.where(b == 0, 1, 2)
        return int(np.sum(mult[ok]))
    total = 0
    for a in range(math.isqrt(lam2) + 1):
        rem_a = lam2 - a * a
        b = np.arange(math.isqrt(rem_a) + 1, dtype=np.int64)
        rem = rem_a - b * b
        c = np.rint(np.sqrt(rem.astype(float))).astype(np.int64)
        ok = c * c == rem
        mult = np.where(b == 0, 1, 2) * np.where(c == 0, 1, 2)
        mult = mult * (1 if a == 0 else 2)
        total += int(np.sum(mult[ok]))
    return total


# Plain-python copies kept importable for benchmarking before JIT rebinding.
warp_geodesic_rk4_py = warp_geodesic_rk4
warp_geodesic_table_py = warp_geodesic_table

if USE_NUMBA:
    _jit = njit(cache=True, nogil=True)
    _sech = _jit(_sech)
    profile_f = _jit(profile_f)
    profile_log_slope = _jit(profile_log_slope)
    profile_neg_curv = _jit(profile_neg_curv)
    profile_inv_f2 = _jit(profile_inv_f2)
    warp_geodesic_rk4 = _jit(warp_geodesic_rk4)
    warp_geodesic_table = _jit(warp_geodesic_table)
    bump_scalar = _jit(bump_scalar)
    osc_sum_1d = _jit(osc_sum_1d)
    osc_sum_2d = _jit(osc_sum_2d)
    osc_sum_3d = _jit(osc_sum_3d)
    _isqrt_exact = _jit(_isqrt_exact)
    lattice_count = _jit(lattice_count)


def osc_sum(dim, nodes, lam, kind, pp, plateau):
    """Tensor-grid oscillatory sum, dispatching on backend and dimension."""
    nodes = np.ascontiguousarray(nodes, dtype=float)
    pp = np.ascontiguousarray(pp, dtype=float)
    if USE_NUMBA:
        fns = {1: osc_sum_1d, 2: osc_sum_2d, 3: osc_sum_3d}
    else:
        fns = {1: osc_sum_1d_numpy, 2: osc_sum_2d_numpy, 3: osc_sum_3d_numpy}
    return fns[dim](nodes, float(lam), int(kind), pp, float(plateau))


def shell_count(n, lam2):
    """Lattice shell count |{m in Z^n : |m|^2 = lam2}| on the active backend."""
    if USE_NUMBA:
        return int(lattice_count(n, lam2))
    return int(lattice_count_numpy(n, lam2))
