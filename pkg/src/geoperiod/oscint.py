"""Oscillatory-integral quadrature and the distance-phase Hessian split.

Two jobs live here.  First, dense tensor-grid quadrature of
I(lambda) = integral a(x) exp(i lambda phi(x)) dx for smooth amplitudes
supported in the unit ball, together with least-squares fits of the
decay rate of |I| against lambda: nondegenerate phases must come out
near lambda^(-n/2), phases without critical points faster than any
fitted power.  Second, a cross-check of the distance-phase Hessian:
the finite-difference Hessian of phi(x, y) = d(A(x), B(y)) between two
hypersurface charts against the geometric formula whose diagonal
blocks combine the chart's bending with the shape form of the geodesic
sphere through the base point.

The amplitude vanishes identically at the box boundary, so the uniform
tensor rule converges spectrally; the measured error is the difference
between two resolutions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .curvature import HypersurfaceChart, _chart_derivatives, _covariant_correction
from .errors import ConfigError, NumericalError
from .jacobi import integrate_geodesic, sine_ratio
from .manifold import Euclidean, FlatTorus, PointTangent, SpaceForm

DEFAULT_NODE_CAP = 4.0e8

# Refinement factor for the error-estimate pass, per dimension.  The
# coarse pass already oversamples every oscillation tenfold, so a
# modest refinement suffices and keeps the 3-d grids inside the cap.
_FINE_FACTOR = {1: 2.0, 2: 1.5, 3: 1.25}


class BumpAmplitude:
    """Radial bump: 1 on |x| <= plateau, smooth cutoff to 0 at |x| = 1."""

    def __init__(self, plateau=0.5):
        p = float(plateau)
        if not 0.0 <= p < 1.0:
            raise ConfigError("plateau must lie in [0, 1)")
        self.plateau = p
        # Support check: the cutoff shell must carry no mass.
        shell = kernels.bump_values_numpy(np.array([0.999, 0.9995, 1.0]), p)
        if np.any(shell >= 1e-12):
            raise ConfigError("plateau leaves mass on the cutoff shell")

    def profile(self, t):
        """Radial profile at |x| = t (scalar or array)."""
        return kernels.bump_values_numpy(t, self.plateau)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return float(self.profile(abs(float(x))))
        return self.profile(np.linalg.norm(x, axis=-1))


class QuadraticPhase:
    """phi(x) = x . Q x / 2 for a symmetric nondegenerate Q."""

    kernel_kind = kernels.PHASE_QUADRATIC

    def __init__(self, matrix):
        q = np.atleast_2d(np.asarray(matrix, dtype=float))
        if q.shape[0] != q.shape[1]:
            raise ConfigError("quadratic phase needs a square matrix")
        if q.shape[0] not in (1, 2, 3):
            raise ConfigError("supported phase dimensions are 1, 2, 3")
        if not np.allclose(q, q.T, atol=1e-12):
            raise ConfigError("quadratic phase matrix must be symmetric")
        self.matrix = 0.5 * (q + q.T)
        self.dimension = q.shape[0]
        sv = np.linalg.svd(self.matrix, compute_uv=False)
        if sv[-1] <= 1e-12:
            raise ConfigError("quadratic phase matrix is singular")
        # Certificate |Hess(phi) xi| >= c |xi|: c is the smallest
        # singular value of the constant Hessian Q.
        self.hessian_floor = float(sv[-1])
        self.gradient_floor = 0.0  # critical point at the origin

    @property
    def kernel_params(self):
        return self.matrix.ravel()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", x, self.matrix, x)

    def gradient(self, x):
        return np.asarray(x, dtype=float) @ self.matrix

    def axis_gradient_sup(self):
        """Per-axis sup of |d phi / d x_i| over the sqrt(2)-ball."""
        return math.sqrt(2.0) * np.linalg.norm(self.matrix, axis=1)


class LinearPhase:
    """phi(x) = k . x; no critical point when k != 0."""

    kernel_kind = kernels.PHASE_LINEAR

    def __init__(self, slope):
        k = np.atleast_1d(np.asarray(slope, dtype=float))
        if k.ndim != 1 or k.size not in (1, 2, 3):
            raise ConfigError("supported phase dimensions are 1, 2, 3")
        self.slope = k
        self.dimension = k.size
        self.hessian_floor = 0.0
        self.gradient_floor = float(np.linalg.norm(k))

    @property
    def kernel_params(self):
        return self.slope

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.slope

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(self.slope, x.shape).copy()

    def axis_gradient_sup(self):
        return np.abs(self.slope)


class LinearSquarePhase:
    """phi(x, y) = a x + b y^2: gradient bounded below by |a|, no
    critical point, but a degenerate Hessian direction."""

    kernel_kind = kernels.PHASE_LINEAR_SQUARE
    dimension = 2

    def __init__(self, linear=1.0, square=1.0):
        a = float(linear)
        b = float(square)
        if a == 0.0:
            raise ConfigError("linear coefficient must be nonzero")
        self.linear = a
        self.square = b
        self.hessian_floor = 0.0
        self.gradient_floor = abs(a)

    @property
    def kernel_params(self):
        return np.array([self.linear, self.square])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.linear * x[..., 0] + self.square * x[..., 1] ** 2

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        g = np.empty_like(x)
        g[..., 0] = self.linear
        g[..., 1] = 2.0 * self.square * x[..., 1]
        return g

    def axis_gradient_sup(self):
        return np.array([abs(self.linear), 2.0 * math.sqrt(2.0) * abs(self.square)])


def dyadic_lambda_grid(dimension):
    """Default frequency grid: 2^4 .. 2^9 for n <= 2.

    In three dimensions the node cap forbids 2^9, so the grid stops at
    2^7 and takes half-octave steps to keep at least six fit points.
    """
    if dimension <= 2:
        return tuple(2.0 ** np.arange(4, 10))
    return tuple(2.0 ** np.linspace(4.0, 7.0, 7))


class OscillatoryProblem:
    """Amplitude, phase, and frequency grid for one decay study."""

    def __init__(self, dimension, phase, amplitude=None, lambda_grid=None):
        n = int(dimension)
        if n not in (1, 2, 3):
            raise ConfigError("supported phase dimensions are 1, 2, 3")
        if phase.dimension != n:
            raise ConfigError("phase dimension does not match the problem")
        self.dimension = n
        self.phase = phase
        self.amplitude = amplitude if amplitude is not None else BumpAmplitude()
        grid = lambda_grid if lambda_grid is not None else dyadic_lambda_grid(n)
        grid = tuple(float(v) for v in grid)
        if len(grid) == 0 or any(v <= 0 for v in grid):
            raise ConfigError("lambda_grid must be positive")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("lambda_grid must be strictly increasing")
        self.lambda_grid = grid


@dataclass(frozen=True)
class EvalResult:
    """One quadrature evaluation: value, two-resolution error estimate,
    the target the estimate is held to, and the fine-grid node count."""

    lam: float
    value: complex
    err_est: float
    err_tol: float
    nodes: int
    axis_nodes: tuple

    @property
    def converged(self):
        return self.err_est <= self.err_tol


def _axis_counts(problem, lam, node_cap):
    # >= 10 nodes per oscillation period along each axis; the shared
    # per-axis grid is sized by the largest gradient component.
    g = float(np.max(problem.phase.axis_gradient_sup()))
    n1 = max(48, int(math.ceil(10.0 * lam * g / math.pi)) + 1)
    n2 = int(math.ceil(n1 * _FINE_FACTOR[problem.dimension]))
    if float(n2) ** problem.dimension > node_cap:
        raise NumericalError("frequency too high for direct quadrature")
    return n1, n2


def evaluate(problem, lam, node_cap=DEFAULT_NODE_CAP):
    """Quadrature value of I(lambda) with a two-resolution error estimate."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("frequency must be positive")
    n = problem.dimension
    n1, n2 = _axis_counts(problem, lam, node_cap)
    phase = problem.phase
    vals = []
    for count in (n1, n2):
        nodes = np.linspace(-1.0, 1.0, count)
        s = kernels.osc_sum(
            n, nodes, lam, phase.kernel_kind, phase.kernel_params, problem.amplitude.plateau
        )
        vals.append(s * (2.0 / (count - 1)) ** n)
    err = abs(vals[1] - vals[0])
    return EvalResult(
        lam=lam,
        value=vals[1],
        err_est=err,
        err_tol=1e-3 * lam ** (-0.5 * n),
        nodes=int(n2) ** n,
        axis_nodes=(n1, n2),
    )


def evaluate_grid(problem, node_cap=DEFAULT_NODE_CAP, threads=1):
    """Evaluate the whole lambda grid, optionally across worker threads.

    Results come back in grid order regardless of thread count; each
    frequency's sum has a fixed internal summation order.
    """
    lams = problem.lambda_grid
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(lambda lam: evaluate(problem, lam, node_cap), lams))
    else:
        out = [evaluate(problem, lam, node_cap) for lam in lams]
    return tuple(out)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of log|I| against log(lambda)."""

    exponent: float
    constant: float
    residual: float
    lambdas: tuple
    magnitudes: tuple


def fit_decay(lambdas, values):
    lams = np.asarray(lambdas, dtype=float)
    if lams.size < 6:
        raise ValueError("decay fit needs at least 6 frequencies")
    mags = np.abs(np.asarray(values, dtype=complex))
    mags = np.maximum(mags, 1e-300)  # a zero integral still fits, steeply
    x = np.log(lams)
    y = np.log(mags)
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.max(np.abs(design @ coef - y)))
    return DecayFit(
        exponent=float(coef[0]),
        constant=float(coef[1]),
        residual=resid,
        lambdas=tuple(lams),
        magnitudes=tuple(float(m) for m in mags),
    )


@dataclass(frozen=True)
class BoundCheck:
    """Decay fit plus the pass flag for one stationary-phase bound."""

    kind: str
    fit: DecayFit
    passed: bool
    target_exponent: float
    certificate: float
    scaled_sup: float
    quadrature_ok: bool
    results: tuple


def verify_nondegenerate_bound(problem, c=None, node_cap=DEFAULT_NODE_CAP, threads=1):
    """Check |I(lambda)| ~ lambda^(-n/2) for a nondegenerate phase.

    c is the lower bound |Hess(phi) xi| >= c |xi|; built-in quadratic
    phases carry it as the smallest singular value of the Hessian.
    Passes iff the fitted exponent is <= -n/2 + 0.1; the sup of
    |I| * lambda^(n/2) is reported as the empirical constant.
    """
    if c is None:
        c = getattr(problem.phase, "hessian_floor", 0.0)
    if c <= 0:
        raise ValueError("phase is not certified nondegenerate")
    results = evaluate_grid(problem, node_cap, threads)
    fit = fit_decay([r.lam for r in results], [r.value for r in results])
    n = problem.dimension
    target = -0.5 * n
    scaled = max(abs(r.value) * r.lam ** (0.5 * n) for r in results)
    return BoundCheck(
        kind="nondegenerate",
        fit=fit,
        passed=fit.exponent <= target + 0.1,
        target_exponent=target,
        certificate=float(c),
        scaled_sup=float(scaled),
        quadrature_ok=all(r.converged for r in results),
        results=results,
    )


def verify_nonstationary_bound(problem, c=None, order=4, node_cap=DEFAULT_NODE_CAP, threads=1):
    """Check that |I(lambda)| beats lambda^(-order) when |grad phi| >= c.

    c defaults to the phase's own gradient floor; a phase with an
    interior critical point simply fails the flag (the fitted rate is
    then the stationary one, far above -order).
    """
    if c is None:
        c = getattr(problem.phase, "gradient_floor", 0.0)
    results = evaluate_grid(problem, node_cap, threads)
    fit = fit_decay([r.lam for r in results], [r.value for r in results])
    target = -float(order)
    scaled = max(abs(r.value) * r.lam ** float(order) for r in results)
    return BoundCheck(
        kind="nonstationary",
        fit=fit,
        passed=fit.exponent <= target,
        target_exponent=target,
        certificate=float(c),
        scaled_sup=float(scaled),
        quadrature_ok=all(r.converged for r in results),
        results=results,
    )


# ---------------------------------------------------------------------------
# distance-phase Hessian
# ---------------------------------------------------------------------------


def _cover_distance(model):
    # Torus charts hand out unwrapped coordinates, and the phase lives
    # on the universal cover, so the cover metric is the right one.
    if isinstance(model, (Euclidean, FlatTorus)):
        return lambda x, y: float(np.linalg.norm(np.asarray(x) - np.asarray(y)))
    return lambda x, y: model.distance(x, y)


def _away_unit(model, x, y, r):
    """Unit tangent at x pointing away from y."""
    if isinstance(model, (Euclidean, FlatTorus)):
        return (np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) / r
    return -model.unit_toward(x, y)


def _sphere_ratio(model, center, x, r):
    """Shape value at x of the geodesic sphere of radius r about center."""
    if isinstance(model, (Euclidean, FlatTorus)):
        return 1.0 / r
    if isinstance(model, SpaceForm):
        return model.b / math.tanh(model.b * r)
    geod = integrate_geodesic(model, PointTangent(center, model.unit_toward(center, x)), r + 0.5)
    return sine_ratio(geod, r)


def _formula_block(model, chart, u0, w1, ratio):
    """Diagonal Hessian block: chart bending against w1 plus the
    sphere term ratio * (G - c c^T) in chart coordinates."""
    u0 = np.asarray(u0, dtype=float)
    pt = chart.point(u0)
    first, second = _chart_derivatives(chart, u0)
    first = [model.tangent_project(pt, f) for f in first]
    corr = _covariant_correction(model, pt, first)
    d = chart.d
    gram = np.array([[model.inner(pt, a, b) for b in first] for a in first])
    c = np.array([model.inner(pt, f, w1) for f in first])
    block = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            bend = model.inner(pt, second[i, j] + corr[i, j], w1)
            block[i, j] = bend + ratio * (gram[i, j] - c[i] * c[j])
    block = 0.5 * (block + block.T)
    return block, np.sqrt(np.diag(gram))


def _fd_hessian(fn, z0, step):
    def at(h):
        m = z0.size
        out = np.empty((m, m))
        f0 = fn(z0)
        for i in range(m):
            ei = np.zeros(m)
            ei[i] = h
            out[i, i] = (fn(z0 + ei) - 2.0 * f0 + fn(z0 - ei)) / (h * h)
            for j in range(i + 1, m):
                ej = np.zeros(m)
                ej[j] = h
                mixed = (
                    fn(z0 + ei + ej) - fn(z0 + ei - ej) - fn(z0 - ei + ej) + fn(z0 - ei - ej)
                ) / (4.0 * h * h)
                out[i, j] = mixed
                out[j, i] = mixed
        return out

    coarse = at(step)
    fine = at(step / 2.0)
    return (4.0 * fine - coarse) / 3.0


@dataclass(frozen=True)
class HessianComparison:
    """Finite-difference vs formula Hessian of the distance phase.

    formula carries the geometric diagonal blocks with the
    finite-difference mixed block copied in (only a bound is known for
    it); discrepancy is the worst diagonal-block disagreement and
    mixed_limit the entrywise 2|X||Y|/r envelope the mixed block is
    held to.
    """

    r: float
    finite_difference: np.ndarray
    formula: np.ndarray
    discrepancy: float
    mixed_limit: np.ndarray
    mixed_ok: bool
    grad_first: np.ndarray
    grad_second: np.ndarray


def distance_phase_hessian(model, chart_a, chart_b, p_a, p_b, fd_step=1e-4, mixed_slack=1e-3):
    """Hessian of phi(x, y) = d(A(x), B(y)) both ways at (p_a, p_b)."""
    if not isinstance(chart_a, HypersurfaceChart) or not isinstance(chart_b, HypersurfaceChart):
        raise ValueError("charts must be hypersurface charts")
    if chart_a.model is not model or chart_b.model is not model:
        raise ValueError("charts must live on the given model")
    u_a = np.atleast_1d(np.asarray(p_a, dtype=float))
    u_b = np.atleast_1d(np.asarray(p_b, dtype=float))
    dist = _cover_distance(model)
    x_a = chart_a.point(u_a)
    x_b = chart_b.point(u_b)
    r = dist(x_a, x_b)
    if r < 1.0:
        raise ValueError("outside validity regime")

    da, db = chart_a.d, chart_b.d
    z0 = np.concatenate([u_a, u_b])

    def phi(z):
        return dist(chart_a.point(z[:da]), chart_b.point(z[da:]))

    h_fd = _fd_hessian(phi, z0, fd_step)

    grad = np.empty(da + db)
    hg = 1e-6
    for i in range(da + db):
        e = np.zeros(da + db)
        e[i] = hg
        grad[i] = (phi(z0 + e) - phi(z0 - e)) / (2.0 * hg)

    w1_a = _away_unit(model, x_a, x_b, r)
    w1_b = _away_unit(model, x_b, x_a, r)
    block_a, norms_a = _formula_block(model, chart_a, u_a, w1_a, _sphere_ratio(model, x_b, x_a, r))
    block_b, norms_b = _formula_block(model, chart_b, u_b, w1_b, _sphere_ratio(model, x_a, x_b, r))

    formula = h_fd.copy()
    formula[:da, :da] = block_a
    formula[da:, da:] = block_b
    discrepancy = max(
        float(np.max(np.abs(h_fd[:da, :da] - block_a))),
        float(np.max(np.abs(h_fd[da:, da:] - block_b))),
    )
    mixed_limit = 2.0 * np.outer(norms_a, norms_b) / r + mixed_slack
    mixed_ok = bool(np.all(np.abs(h_fd[:da, da:]) <= mixed_limit))
    return HessianComparison(
        r=float(r),
        finite_difference=h_fd,
        formula=formula,
        discrepancy=discrepancy,
        mixed_limit=mixed_limit,
        mixed_ok=mixed_ok,
        grad_first=grad[:da],
        grad_second=grad[da:],
    )
