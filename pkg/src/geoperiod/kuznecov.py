"""Period integrals of explicit eigenfunctions and their growth law.

On the flat torus the Laplace eigenfunctions are the unit-normalized
exponentials e_m(x) = (2 pi)^(-n/2) exp(i m.x); their periods over a
rational flat subtorus obey an exact selection rule (nonzero iff the
tangential frequency components vanish), which the quadrature path
must reproduce to roundoff.  On the round 2-sphere the equator periods
of zonal harmonics stay order one in the degree, the sharpness end of
the period bounds, while every nonzonal harmonic integrates to zero
around the equator.  Cumulative square sums N(lambda) are fitted over
the top decade of the requested range, where the power law has
stabilized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sph_harm_y

from . import kernels
from .curvature import HypersurfaceChart
from .errors import ConfigError, NumericalError
from .manifold import FlatTorus, RoundSphere

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpectralBasisSpec:
    """Which eigenbasis a series runs over: model plus index cap."""

    model: object
    cap: float
    normalization: str = "unit-l2"


@dataclass(frozen=True)
class PeriodEntry:
    eigenvalue: float
    period: complex
    abs2: float
    index: tuple


@dataclass(frozen=True)
class GrowthFit:
    """Power-law fit of the cumulative sum over a frequency window."""

    exponent: float
    constant: float
    residual: float
    window: tuple


@dataclass(frozen=True)
class KuznecovSeries:
    entries: tuple
    cumulative: np.ndarray
    fit: GrowthFit
    period_sup: float = 0.0

    def cumulative_at(self, lam):
        """N(lam): sum of abs2 over eigenvalues <= lam."""
        total = 0.0
        for entry, running in zip(self.entries, self.cumulative):
            if entry.eigenvalue > lam:
                break
            total = running
        return total


def _fit_growth(eigenvalues, cumulative, top):
    """Fit log N against log lambda over [top/10, top]."""
    lams = np.asarray(eigenvalues, dtype=float)
    ns = np.asarray(cumulative, dtype=float)
    keep = (lams >= top / 10.0) & (lams <= top) & (ns > 0)
    if np.count_nonzero(keep) < 2:
        keep = (lams > 0) & (ns > 0)
    if np.count_nonzero(keep) < 2:
        return GrowthFit(exponent=0.0, constant=0.0, residual=0.0, window=(top / 10.0, top))
    x = np.log(lams[keep])
    y = np.log(ns[keep])
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.max(np.abs(design @ coef - y)))
    return GrowthFit(
        exponent=float(coef[0]),
        constant=float(coef[1]),
        residual=resid,
        window=(top / 10.0, top),
    )


def _series_from_periods(ms, periods, top):
    """Assemble entries sorted by eigenvalue, then index."""
    ms = np.asarray(ms)
    eigs = np.sqrt(np.sum(ms.astype(float) ** 2, axis=1))
    order = np.lexsort(tuple(ms[:, c] for c in range(ms.shape[1] - 1, -1, -1)) + (eigs,))
    entries = []
    for i in order:
        p = complex(periods[i])
        entries.append(
            PeriodEntry(
                eigenvalue=float(eigs[i]),
                period=p,
                abs2=abs(p) ** 2,
                index=tuple(int(c) for c in ms[i]),
            )
        )
    cumulative = np.cumsum([e.abs2 for e in entries])
    fit = _fit_growth([e.eigenvalue for e in entries], cumulative, top)
    sup = max((abs(e.period) for e in entries), default=0.0)
    return KuznecovSeries(
        entries=tuple(entries), cumulative=cumulative, fit=fit, period_sup=float(sup)
    )


# ---------------------------------------------------------------------------
# flat torus
# ---------------------------------------------------------------------------


def _check_torus_chart(sigma):
    if not isinstance(sigma, HypersurfaceChart) or not isinstance(sigma.model, FlatTorus):
        raise ConfigError("period integrals here need a chart on a flat torus")
    return sigma.model


def _check_index(model, m):
    m = np.atleast_1d(np.asarray(m))
    if m.size != model.dim or np.any(np.abs(m - np.round(m)) > 1e-9):
        raise ValueError("frequency index must be an integer lattice vector")
    return np.round(m).astype(int)


def torus_period_exact(m, sigma):
    """Closed-form period over a rational plane chart.

    The tangential frequency components A^T m must vanish for the
    oscillation to close up; surviving indices all carry the same
    magnitude (2 pi)^(d - n/2) sqrt(det A^T A).
    """
    model = _check_torus_chart(sigma)
    if sigma.kind != "torus_plane":
        raise ConfigError("closed form available only for plane charts")
    m = _check_index(model, m)
    cols = sigma.meta["columns"]
    offset = sigma.meta["offset"]
    if np.any(cols.T @ m != 0):
        return 0.0j
    n, d = cols.shape
    area = TWO_PI**d * math.sqrt(np.linalg.det(cols.T.astype(float) @ cols))
    return TWO_PI ** (-0.5 * n) * area * np.exp(1j * float(m @ offset))


def _chart_quadrature_nodes(sigma, nodes):
    """Quadrature points, surface weights, and cell measure for a chart."""
    d = sigma.d
    axes = [np.linspace(0.0, 1.0, nodes, endpoint=False) for _ in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    us = np.stack([m.ravel() for m in mesh], axis=-1)
    h = 1e-6
    pts = np.empty((len(us), sigma.model.dim))
    wts = np.empty(len(us))
    for row, u in enumerate(us):
        pts[row] = sigma.point(u)
        jac = np.empty((sigma.model.dim, d))
        for j in range(d):
            e = np.zeros(d)
            e[j] = h
            jac[:, j] = (sigma.point(u + e) - sigma.point(u - e)) / (2.0 * h)
        gram = jac.T @ jac
        wts[row] = math.sqrt(max(np.linalg.det(gram), 0.0))
    return pts, wts, (1.0 / nodes) ** d


def torus_period(m, sigma, nodes=None):
    """Period of e_m over the chart by trapezoid quadrature.

    The chart is periodic over its parameter cube, so the uniform rule
    is spectrally accurate; plane charts take a vectorized path.
    """
    model = _check_torus_chart(sigma)
    m = _check_index(model, m)
    if nodes is None:
        nodes = 2048 if sigma.d == 1 else 192
    if sigma.kind == "torus_plane":
        cols = sigma.meta["columns"].astype(float)
        offset = sigma.meta["offset"]
        d = sigma.d
        axes = [np.linspace(0.0, 1.0, nodes, endpoint=False) for _ in range(d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        us = np.stack([g.ravel() for g in mesh], axis=-1)
        phase = (us @ (cols.T @ m)) * TWO_PI + float(m @ offset)
        area = TWO_PI**d * math.sqrt(np.linalg.det(cols.T @ cols))
        val = np.mean(np.exp(1j * phase)) * area
    else:
        pts, wts, cell = _chart_quadrature_nodes(sigma, nodes)
        val = np.sum(wts * np.exp(1j * (pts @ m))) * cell
    return complex(TWO_PI ** (-0.5 * model.dim) * val)


def _axis_complement_points(cols, radius):
    n, d = cols.shape
    used = [int(np.flatnonzero(cols[:, j])[0]) for j in range(d)]
    free = [i for i in range(n) if i not in used]
    r = int(math.floor(radius))
    rng = np.arange(-r, r + 1)
    mesh = np.meshgrid(*[rng] * len(free), indexing="ij")
    coords = np.stack([g.ravel() for g in mesh], axis=-1)
    keep = np.sum(coords.astype(float) ** 2, axis=1) <= radius * radius + 1e-9
    coords = coords[keep]
    out = np.zeros((len(coords), n), dtype=int)
    for k, i in enumerate(free):
        out[:, i] = coords[:, k]
    return out


def _primitive(v):
    g = math.gcd(*[int(abs(c)) for c in v]) if len(v) > 1 else int(abs(v[0]))
    return v // max(g, 1)


def _normal_lattice_points(cols, radius):
    """Integer m with cols^T m = 0 and |m| <= radius."""
    n, d = cols.shape
    axis_like = all(
        np.count_nonzero(cols[:, j]) == 1 and abs(cols[:, j]).max() == 1 for j in range(d)
    )
    if axis_like:
        return _axis_complement_points(cols, radius)
    if d == n - 1:
        if n == 2:
            g = np.array([-cols[1, 0], cols[0, 0]])
        else:
            g = np.cross(cols[:, 0], cols[:, 1])
        g = _primitive(g)
        kmax = int(math.floor(radius / np.linalg.norm(g.astype(float))))
        ks = np.arange(-kmax, kmax + 1)
        return ks[:, None] * g[None, :]
    if n == 3 and d == 1:
        a = cols[:, 0]
        p = int(np.argmax(np.abs(a)))
        others = [i for i in range(3) if i != p]
        r = int(math.floor(radius))
        rng = np.arange(-r, r + 1)
        mj, mk = np.meshgrid(rng, rng, indexing="ij")
        mj = mj.ravel()
        mk = mk.ravel()
        num = -(a[others[0]] * mj + a[others[1]] * mk)
        ok = num % a[p] == 0
        mp = np.zeros_like(mj)
        mp[ok] = num[ok] // a[p]
        out = np.zeros((len(mj), 3), dtype=int)
        out[:, others[0]] = mj
        out[:, others[1]] = mk
        out[:, p] = mp
        out = out[ok]
        keep = np.sum(out.astype(float) ** 2, axis=1) <= radius * radius + 1e-9
        return out[keep]
    # dense fallback
    r = int(math.floor(radius))
    if (2 * r + 1) ** n > 2e8:
        raise NumericalError("count budget exceeded")
    rng = np.arange(-r, r + 1)
    mesh = np.meshgrid(*[rng] * n, indexing="ij")
    out = np.stack([g.ravel() for g in mesh], axis=-1)
    keep = np.all(out @ cols == 0, axis=1)
    out = out[keep]
    keep = np.sum(out.astype(float) ** 2, axis=1) <= radius * radius + 1e-9
    return out[keep]


def _graph_series_periods(sigma, radius):
    model = sigma.model
    n = model.dim
    if sigma.d != 1:
        raise ConfigError("kuznecov series over curved graphs supports curves only")
    if radius > 100:
        raise ConfigError("Lambda cap for curved graphs is 100")
    r = int(math.floor(radius))
    rng = np.arange(-r, r + 1)
    mesh = np.meshgrid(*[rng] * n, indexing="ij")
    ms = np.stack([g.ravel() for g in mesh], axis=-1)
    ms = ms[np.sum(ms.astype(float) ** 2, axis=1) <= radius * radius + 1e-9]
    pts, wts, cell = _chart_quadrature_nodes(sigma, 2048)
    norm = TWO_PI ** (-0.5 * n) * cell
    periods = np.empty(len(ms), dtype=complex)
    for start in range(0, len(ms), 512):
        block = ms[start : start + 512]
        phases = pts @ block.T
        periods[start : start + 512] = norm * (wts @ np.exp(1j * phases))
    return ms, periods


def torus_kuznecov(sigma, top):
    """Cumulative period-square sum over eigenvalues |m| <= top.

    Plane charts use the exact selection rule, so only the normal
    lattice is enumerated; curved graphs fall back to quadrature.
    """
    model = _check_torus_chart(sigma)
    top = float(top)
    if not top > 0:
        raise ConfigError("Lambda must be positive")
    if top > 2000:
        raise ConfigError("Lambda exceeds the 2000 cap")
    if sigma.kind == "torus_plane":
        cols = sigma.meta["columns"]
        offset = sigma.meta["offset"]
        n, d = cols.shape
        ms = _normal_lattice_points(cols, top)
        amp = TWO_PI ** (d - 0.5 * n) * math.sqrt(np.linalg.det(cols.T.astype(float) @ cols))
        periods = amp * np.exp(1j * (ms @ offset))
    elif sigma.kind == "torus_graph":
        ms, periods = _graph_series_periods(sigma, top)
    else:
        raise ConfigError("kuznecov series supports plane and graph charts")
    return _series_from_periods(ms, periods, top)


def normalization_residuals(spec, count=10, seed=0, nodes=64):
    """|quadrature of ||e_j||^2 - 1| for randomly drawn indices."""
    rng = np.random.default_rng(seed)
    out = []
    if isinstance(spec.model, FlatTorus):
        n = spec.model.dim
        scale = TWO_PI ** (-0.5 * n)
        axes = [np.linspace(0.0, TWO_PI, nodes, endpoint=False)] * n
        mesh = np.meshgrid(*axes, indexing="ij")
        for _ in range(count):
            m = rng.integers(-10, 11, size=n)
            vals = scale * np.exp(1j * sum(mi * g for mi, g in zip(m, mesh)))
            quad = np.mean(np.abs(vals) ** 2) * TWO_PI**n
            out.append(abs(quad - 1.0))
        return out
    if isinstance(spec.model, RoundSphere):
        deg = max(2 * 12 + 16, 40)
        x, w = np.polynomial.legendre.leggauss(deg)
        theta = np.arccos(x)
        phi = np.linspace(0.0, TWO_PI, 2 * deg, endpoint=False)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        for _ in range(count):
            ell = int(rng.integers(0, 13))
            k = int(rng.integers(-ell, ell + 1)) if ell else 0
            vals = np.abs(sph_harm_y(ell, k, tt, pp)) ** 2
            quad = float(np.sum(w @ vals) * (TWO_PI / len(phi)))
            out.append(abs(quad - 1.0))
        return out
    raise ConfigError("normalization check supports the torus and sphere bases")


# ---------------------------------------------------------------------------
# round sphere, equator periods
# ---------------------------------------------------------------------------


def legendre_at_zero(ell):
    """P_ell(0) by the stable two-step recurrence."""
    ell = int(ell)
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    if ell % 2 == 1:
        return 0.0
    val = 1.0
    for j in range(2, ell + 1, 2):
        val *= -(j - 1) / j
    return val


def sphere_zonal_period(ell):
    """Equator period of the unit-normalized zonal harmonic of degree ell."""
    norm = math.sqrt((2 * ell + 1) / (4.0 * math.pi))
    return TWO_PI * norm * legendre_at_zero(ell)


def sphere_nonzonal_period(ell, k, nodes=None):
    """Equator period of Y_ell^k by azimuthal trapezoid quadrature."""
    ell = int(ell)
    k = int(k)
    if abs(k) > ell:
        raise ValueError("order exceeds degree")
    if nodes is None:
        nodes = max(64, 2 * ell + 16)
    phi = np.linspace(0.0, TWO_PI, nodes, endpoint=False)
    vals = sph_harm_y(ell, k, np.full(nodes, 0.5 * math.pi), phi)
    return complex(np.mean(vals) * TWO_PI)


def sphere_kuznecov(cap):
    """Equator period series over all harmonics of degree <= cap.

    Only zonal harmonics survive the azimuthal integral; that is
    verified by quadrature through degree 50 and applied as the exact
    shortcut beyond.  Reports sup |period| alongside the growth fit.
    """
    cap = int(cap)
    if cap < 0:
        raise ConfigError("degree cap must be nonnegative")
    if cap > 500:
        raise ConfigError("degree cap is 500")
    entries = []
    sup = 0.0
    for ell in range(cap + 1):
        lam = math.sqrt(ell * (ell + 1.0))
        for k in range(-ell, ell + 1):
            if k == 0:
                p = complex(sphere_zonal_period(ell))
            elif ell <= 50:
                p = sphere_nonzonal_period(ell, k)
            else:
                p = 0.0j
            entries.append(
                PeriodEntry(eigenvalue=lam, period=p, abs2=abs(p) ** 2, index=(ell, k))
            )
            sup = max(sup, abs(p))
    cumulative = np.cumsum([e.abs2 for e in entries])
    top = math.sqrt(cap * (cap + 1.0)) if cap else 1.0
    fit = _fit_growth([e.eigenvalue for e in entries], cumulative, top)
    return KuznecovSeries(
        entries=tuple(entries), cumulative=cumulative, fit=fit, period_sup=float(sup)
    )


def lattice_sphere_count(n, lambda2):
    """#{m in Z^n : |m|^2 = lambda2} by exact enumeration."""
    n = int(n)
    if n not in (1, 2, 3):
        raise ConfigError("supported lattice dimensions are 1, 2, 3")
    lambda2 = int(lambda2)
    if lambda2 < 0:
        raise ValueError("lambda2 must be nonnegative")
    if lambda2 > 1e8 / 2**n:
        raise NumericalError("count budget exceeded")
    return kernels.shell_count(n, lambda2)


def parseval_defects(fn, caps, nodes=256):
    """||f||^2 minus the partial coefficient sums on the 2-torus.

    Defects are nonnegative and shrink as the cap grows; fn takes the
    two angle arrays and must be smooth and 2 pi-periodic.
    """
    x = np.linspace(0.0, TWO_PI, nodes, endpoint=False)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    f = np.asarray(fn(xx, yy), dtype=complex)
    coeffs = np.fft.fft2(f) / nodes**2
    norm2 = float(np.mean(np.abs(f) ** 2) * TWO_PI**2)
    freq = np.fft.fftfreq(nodes, d=1.0 / nodes)
    k2 = freq[:, None] ** 2 + freq[None, :] ** 2
    abs2 = (TWO_PI * np.abs(coeffs)) ** 2
    out = []
    for cap in caps:
        partial = float(np.sum(abs2[k2 <= cap * cap + 1e-9]))
        out.append((float(cap), norm2 - partial))
    return out
