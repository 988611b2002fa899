"""Second fundamental forms: geodesic spheres, horospheres, hypersurface charts.

Sign and orientation conventions, fixed once here and documented on
every builder:

  * sphere_shape pairs II of the geodesic sphere S_{gamma(0)}(r)
    against the inward normal -gamma'(r); Euclidean circles then have
    the positive value 1/r.
  * horosphere_shape pairs II of H(v) against v itself, v pointing
    toward the ideal center; in curvature -b^2 the diagonal is +b.
  * hypersurface_shape takes a side argument; side +1 aligns the normal
    with the chart's reference orientation (documented per builder).

Flat models carry their horosphere value as the certified truncation
residue (exactly the requested tolerance instead of the limit 0); rank
checks floor singular values at that tolerance, so the residue never
registers as curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError
from .jacobi import (
    GeodesicPath,
    _ScalarField,
    _normal_frame,
    integrate_geodesic,
    sine_ratio,
    stable_jacobi,
)
from .manifold import (
    Euclidean,
    FlatTorus,
    MetricModel,
    PointTangent,
    RoundSphere,
    SpaceForm,
    WarpedSurface,
    _orthonormalize,
)

__all__ = [
    "ShapeForm",
    "HypersurfaceChart",
    "sphere_shape",
    "horosphere_shape",
    "comparison_report",
    "ComparisonReport",
    "hypersurface_shape",
    "geodesic_sphere_chart",
    "geodesic_sheet_chart",
    "horosphere_chart",
    "graph_chart",
    "torus_plane_chart",
    "torus_graph_chart",
]

DEFAULT_JACOBI_TOL = 1e-6


@dataclass(eq=False)
class ShapeForm:
    """A symmetric form paired against a declared unit normal."""

    base: np.ndarray
    normal: np.ndarray
    matrix: np.ndarray
    basis: list

    def diagonal_value(self):
        return float(self.matrix[0, 0])

    def principal_curvatures(self):
        return np.linalg.eigvalsh(self.matrix)


def sphere_shape(model, geodesic, r):
    """Shape of the sphere about gamma(0) through gamma(r), inward normal.

    The value in every parallel frame direction is s'(r)/s(r) with s the
    sine-like Jacobi solution, evaluated through the (u, l, m) state
    rather than by integrating the Riccati equation from its r = 0 pole.
    """
    if r < 1e-8:
        raise ValueError("radius too small")
    value = sine_ratio(geodesic, r)
    k = model.dim - 1
    return ShapeForm(
        base=geodesic.point(r),
        normal=-geodesic.velocity(r),
        matrix=value * np.eye(k),
        basis=geodesic.frame(r),
    )


def horosphere_shape(model, v, tol=DEFAULT_JACOBI_TOL):
    """Shape of the horosphere H(v) at v.point, paired against v.

    Diagonal entries are -h'(0) of the truncated stable Jacobi solution;
    the truncation error is certified below tol.  Off-diagonals vanish
    in the parallel frame on the scalar-reducible models handled here.
    """
    geod = integrate_geodesic(model, v, 1.0)
    sol = stable_jacobi(geod, 0, 1.0, tol)
    value = -sol.derivative(0.0)
    k = model.dim - 1
    return ShapeForm(
        base=np.asarray(v.point, float),
        normal=np.asarray(v.vector, float),
        matrix=value * np.eye(k),
        basis=geod.frame(0.0),
    )


@dataclass
class ComparisonReport:
    """Rows (r, horosphere, sphere, difference, bound) with pass flags."""

    rows: np.ndarray
    flags: np.ndarray
    passed: bool
    slack: float


def comparison_report(model, geodesic, r_grid, tol=DEFAULT_JACOBI_TOL, slack=1e-6):
    """Check 0 < sphere(r) - horosphere(r) <= 1/r along the geodesic.

    The horosphere value at gamma(r) is taken against -gamma'(r), the
    limit of spheres about gamma(0) as gamma(0) recedes.  On the
    homogeneous models that value is independent of the point and the
    direction, so it is evaluated once at gamma(0), where hyperboloid
    coordinates are tame even when the grid reaches r = 50.  Positivity
    may saturate to zero in double precision once both sides agree to
    machine accuracy, which the slack absorbs.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size == 0 or np.any(r_grid <= 0) or np.any(np.diff(r_grid) <= 0):
        raise ValueError("r_grid must be positive and strictly increasing")
    if r_grid[-1] > geodesic.r_max + 1e-9:
        raise ValueError("r_grid exceeds the geodesic range")
    warped = isinstance(model, WarpedSurface)
    if not warped:
        at = PointTangent(geodesic.initial.point, -geodesic.initial.vector)
        u_const = horosphere_shape(model, at, tol).diagonal_value()
    rows = np.empty((r_grid.size, 5))
    flags = np.empty(r_grid.size, dtype=bool)
    for i, r in enumerate(r_grid):
        v_sph = sine_ratio(geodesic, float(r))
        if warped:
            at = PointTangent(geodesic.point(r), -geodesic.velocity(r))
            u_hor = horosphere_shape(model, at, tol).diagonal_value()
        else:
            u_hor = u_const
        diff = v_sph - u_hor
        bound = 1.0 / r
        rows[i] = (r, u_hor, v_sph, diff, bound)
        flags[i] = (diff > -slack) and (diff <= bound + slack)
    return ComparisonReport(rows=rows, flags=flags, passed=bool(np.all(flags)), slack=slack)


# ---------------------------------------------------------------------------
# hypersurface charts
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class HypersurfaceChart:
    """Parametrized submanifold chart over a d-cube.

    point(u) maps parameters to model coordinates; reference_normal(u)
    fixes the orientation that side = +1 selects.  domain is the
    parameter cube (lo, hi) per axis; periodic charts close up over it.
    """

    kind: str
    model: MetricModel
    d: int
    point_fn: object
    normal_fn: object
    domain: tuple
    periodic: bool
    meta: dict = field(default_factory=dict)

    def point(self, u):
        return self.point_fn(np.atleast_1d(np.asarray(u, dtype=float)))

    def reference_normal(self, u):
        return self.normal_fn(np.atleast_1d(np.asarray(u, dtype=float)))

    def grid(self, density):
        """Deterministic sweep grid: density points per axis."""
        lo, hi = self.domain
        if self.periodic:
            axes = [np.linspace(lo, hi, density, endpoint=False) for _ in range(self.d)]
        else:
            margin = 0.1 * (hi - lo)
            axes = [np.linspace(lo + margin, hi - margin, density) for _ in range(self.d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def _sphere_direction(frame, u, scale):
    """Normal-coordinate direction map on the unit sphere of directions."""
    u = np.asarray(u, dtype=float) / scale
    t = float(np.linalg.norm(u))
    e1 = frame[0]
    if t < 1e-14:
        return np.array(e1, dtype=float)
    radial = sum(c * e for c, e in zip(u / t, frame[1:]))
    return math.cos(t) * e1 + math.sin(t) * radial


def geodesic_sphere_chart(model, center, radius):
    """Geodesic sphere of the given radius about center.

    Parameters are intrinsic normal coordinates scaled to unit speed at
    u = 0.  reference orientation: inward, toward the center.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    if isinstance(model, (FlatTorus, RoundSphere)):
        raise ConfigError(f"geodesic sphere chart not supported on {model.kind}")
    center = np.asarray(center, dtype=float)
    frame = model.tangent_basis(center)
    if isinstance(model, Euclidean):
        scale = radius
    elif isinstance(model, SpaceForm):
        scale = math.sinh(model.b * radius) / model.b
    else:
        geod = integrate_geodesic(model, PointTangent(center, frame[0]), radius)
        fld = _ScalarField(geod, radius)
        u, l, m = fld.state(radius)
        scale = math.exp(l) * m  # sine-like solution c * m

    def point_fn(u):
        w = _sphere_direction(frame, u, scale)
        return model.exp_velocity(center, w, radius)[0]

    def normal_fn(u):
        w = _sphere_direction(frame, u, scale)
        return -model.exp_velocity(center, w, radius)[1]

    halfwidth = min(1.0, 0.45 * math.pi * scale)
    return HypersurfaceChart(
        kind="geodesic_sphere",
        model=model,
        d=model.dim - 1,
        point_fn=point_fn,
        normal_fn=normal_fn,
        domain=(-halfwidth, halfwidth),
        periodic=False,
        meta={"center": center, "radius": float(radius)},
    )


def geodesic_sheet_chart(model, base_point, halfwidth=1.0, normal=None):
    """Totally geodesic hypersurface through base_point.

    By default the sheet is exp of the span of the first n-1 tangent
    basis vectors and the reference normal is the remaining one.  An
    explicit normal instead selects the sheet orthogonal to it.
    """
    base_point = np.asarray(base_point, dtype=float)
    if normal is None:
        basis = model.tangent_basis(base_point)
        tangents, last = basis[:-1], basis[-1]
    else:
        # the normal is trusted to be tangent already; completing it from
        # the model frame keeps the Gram-Schmidt well conditioned far out
        seeds = [np.asarray(normal, dtype=float)] + list(model.tangent_basis(base_point))
        basis = _orthonormalize(
            seeds, lambda a, c: model.inner(base_point, a, c), keep=model.dim
        )
        if len(basis) < model.dim:
            raise NumericalError(
                "tangent frame lost to cancellation at this point; "
                "recentre the chart closer to the coordinate origin"
            )
        tangents, last = basis[1:], basis[0]
    if isinstance(model, (Euclidean, FlatTorus)):
        # torus points are left unwrapped so finite differences never
        # straddle the fundamental-domain seam

        def point_fn(u):
            return base_point + sum(c * e for c, e in zip(u, tangents))

        def normal_fn(u):
            return np.array(last, dtype=float)

    elif isinstance(model, SpaceForm):

        def point_fn(u):
            t = float(np.linalg.norm(u))
            if t < 1e-14:
                return np.array(base_point, dtype=float)
            w = sum(c * e for c, e in zip(np.asarray(u) / t, tangents))
            return model.exp_velocity(base_point, w, t)[0]

        def normal_fn(u):
            return np.array(last, dtype=float)  # constant Minkowski normal

    elif isinstance(model, WarpedSurface):

        def point_fn(u):
            return model.exp_velocity(base_point, tangents[0], float(u[0]))[0]

        def normal_fn(u):
            p, vel = model.exp_velocity(base_point, tangents[0], float(u[0]))
            f = model.profile.value(p[0])
            return np.array([-f * vel[1], vel[0] / f])

    else:
        raise ConfigError(f"geodesic sheet chart not supported on {model.kind}")
    return HypersurfaceChart(
        kind="geodesic_sheet",
        model=model,
        d=model.dim - 1,
        point_fn=point_fn,
        normal_fn=normal_fn,
        domain=(-halfwidth, halfwidth),
        periodic=False,
        meta={"base": base_point},
    )


def _horosphere_data(model, v):
    p = np.asarray(v.point, dtype=float)
    w = np.asarray(v.vector, dtype=float)
    b = model.b
    xi = p + w / b  # null direction of the ideal center
    # tangent at p and orthogonal to w, hence Minkowski-orthogonal to xi
    tangents = _normal_frame(model, p, w)
    return p, w, b, xi, tangents


def horosphere_chart(model, v):
    """Horosphere H(v) through v.point via the Busemann level-set form.

    x(u) = p + sum u_i E_i + (b^2 |u|^2 / 2) xi with xi = p + v/b null;
    the induced metric is exactly Euclidean in u, and the unit normal
    nu(u) = b (xi - x(u)) points toward the ideal center (side +1).
    """
    if not isinstance(model, SpaceForm):
        raise ConfigError("horosphere chart requires a hyperbolic space form")
    p, w, b, xi, tangents = _horosphere_data(model, v)

    def point_fn(u):
        x = np.array(p, dtype=float)
        for c, e in zip(u, tangents):
            x = x + c * e
        return x + (b * b * float(np.dot(u, u)) / 2.0) * xi

    def normal_fn(u):
        return b * (xi - point_fn(u))

    return HypersurfaceChart(
        kind="horosphere",
        model=model,
        d=model.dim - 1,
        point_fn=point_fn,
        normal_fn=normal_fn,
        domain=(-1.0, 1.0),
        periodic=False,
        meta={"base": p, "direction": w},
    )


def graph_chart(model, base_point, height, halfwidth=1.0):
    """Graph over the geodesic sheet at base_point: normal offset height(u).

    height maps the sheet parameter to a signed offset along the sheet
    normal.  Reference orientation follows the sheet normal.
    """
    base_point = np.asarray(base_point, dtype=float)
    basis = model.tangent_basis(base_point)
    tangents, last = basis[:-1], basis[-1]
    if isinstance(model, SpaceForm):
        b = model.b

        def point_fn(u):
            t = float(np.linalg.norm(u))
            if t < 1e-14:
                sheet = np.array(base_point, dtype=float)
            else:
                w = sum(c * e for c, e in zip(np.asarray(u) / t, tangents))
                sheet = model.exp_velocity(base_point, w, t)[0]
            g = float(height(u))
            return math.cosh(b * g) * sheet + math.sinh(b * g) * last / b

        def normal_fn(u):
            return np.array(last, dtype=float)

    elif isinstance(model, Euclidean):

        def point_fn(u):
            sheet = base_point + sum(c * e for c, e in zip(u, tangents))
            return sheet + float(height(u)) * last

        def normal_fn(u):
            return np.array(last, dtype=float)

    else:
        raise ConfigError(f"graph chart not supported on {model.kind}")
    return HypersurfaceChart(
        kind="graph",
        model=model,
        d=model.dim - 1,
        point_fn=point_fn,
        normal_fn=normal_fn,
        domain=(-halfwidth, halfwidth),
        periodic=False,
        meta={"base": base_point},
    )


def _check_integer_matrix(columns):
    cols = np.asarray(columns, dtype=float)
    if np.any(np.abs(cols - np.round(cols)) > 1e-9):
        raise ValueError("not closed in torus")
    return np.round(cols).astype(int)


def torus_plane_chart(model, columns, offset=None):
    """Rational flat d-subtorus x(u) = offset + 2 pi * columns @ u, u in [0,1)^d.

    columns must be an integer n x d matrix (a non-rational plane does
    not close up in the torus).  Reference normal: the orthogonal
    complement, first nonzero component positive.
    """
    if not isinstance(model, FlatTorus):
        raise ConfigError("plane chart requires a flat torus")
    cols = _check_integer_matrix(columns)
    n, d = cols.shape
    if n != model.dim or not 1 <= d < model.dim:
        raise ConfigError("plane chart dimensions incompatible with the model")
    if np.linalg.matrix_rank(cols) < d:
        raise ValueError("degenerate parametrization")
    offset = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)
    A = cols.astype(float)

    # unwrapped on purpose: evaluation is 2 pi-periodic where it matters
    # and finite differences must not straddle the fundamental domain
    def point_fn(u):
        return offset + 2.0 * math.pi * (A @ u)

    normal = None
    if d == n - 1:
        comp = _orthonormalize(
            list(A.T) + list(np.eye(n)), lambda a, c: float(np.dot(a, c)), keep=n
        )[-1]
        nz = np.nonzero(np.abs(comp) > 1e-12)[0][0]
        normal = comp if comp[nz] > 0 else -comp

    def normal_fn(u):
        if normal is None:
            raise ValueError("normal defined only for hypersurface charts")
        return np.array(normal, dtype=float)

    return HypersurfaceChart(
        kind="torus_plane",
        model=model,
        d=d,
        point_fn=point_fn,
        normal_fn=normal_fn,
        domain=(0.0, 1.0),
        periodic=True,
        meta={"columns": cols, "offset": offset},
    )


def torus_graph_chart(model, height, offset=None):
    """Curved graph over the axis subtorus: x(u) = (2 pi u, height(2 pi u)).

    height is a smooth 2 pi-periodic function of the first n-1 angles
    (scalar output, last coordinate).  Reference normal: +last axis.
    """
    if not isinstance(model, FlatTorus):
        raise ConfigError("graph chart over a subtorus requires a flat torus")
    n = model.dim
    d = n - 1
    offset = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)

    def point_fn(u):
        ang = 2.0 * math.pi * np.asarray(u, dtype=float)
        x = np.concatenate([ang, [float(height(ang))]])
        return offset + x

    def normal_fn(u):
        e = np.zeros(n)
        e[-1] = 1.0
        return e

    return HypersurfaceChart(
        kind="torus_graph",
        model=model,
        d=d,
        point_fn=point_fn,
        normal_fn=normal_fn,
        domain=(0.0, 1.0),
        periodic=True,
        meta={"offset": offset},
    )


# ---------------------------------------------------------------------------
# second fundamental form from a chart
# ---------------------------------------------------------------------------


def _chart_derivatives(chart, u0):
    """First and Richardson-refined second derivatives of the chart map."""
    u0 = np.asarray(u0, dtype=float)
    d = chart.d
    h1 = 1e-6
    first = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = h1
        first.append((chart.point(u0 + e) - chart.point(u0 - e)) / (2.0 * h1))

    def second_at(h):
        out = np.empty((d, d), dtype=object)
        base = chart.point(u0)
        for i in range(d):
            ei = np.zeros(d)
            ei[i] = h
            out[i, i] = (chart.point(u0 + ei) - 2.0 * base + chart.point(u0 - ei)) / (h * h)
            for j in range(i + 1, d):
                ej = np.zeros(d)
                ej[j] = h
                mixed = (
                    chart.point(u0 + ei + ej)
                    - chart.point(u0 + ei - ej)
                    - chart.point(u0 - ei + ej)
                    + chart.point(u0 - ei - ej)
                ) / (4.0 * h * h)
                out[i, j] = mixed
                out[j, i] = mixed
        return out

    h2 = 5e-3
    coarse = second_at(h2)
    fine = second_at(h2 / 2.0)
    second = np.empty((d, d), dtype=object)
    for i in range(d):
        for j in range(d):
            second[i, j] = (4.0 * fine[i, j] - coarse[i, j]) / 3.0
    return first, second


def _covariant_correction(model, pt, first):
    """Christoffel terms turning plain second derivatives covariant.

    Flat-embedded models need none (the embedding-normal component of
    the raw second derivative pairs to zero against tangent vectors).
    The warped surface uses its two nonvanishing symbols.
    """
    d = len(first)
    if not isinstance(model, WarpedSurface):
        return np.zeros((d, d, len(pt)))
    f = model.profile.value(pt[0])
    fp = f * model.profile.log_slope(pt[0])
    corr = np.zeros((d, d, 2))
    for i in range(d):
        for j in range(d):
            dri, dthi = first[i]
            drj, dthj = first[j]
            corr[i, j, 0] = -f * fp * dthi * dthj
            corr[i, j, 1] = (fp / f) * (dri * dthj + dthi * drj)
    return corr


def hypersurface_shape(chart, param_point, side=1):
    """⟨II(e_i, e_j), nu⟩ in an orthonormalized tangent frame.

    side +1 keeps the chart's reference orientation, -1 flips it.  The
    matrix eigenvalues are the signed principal curvatures for that
    normal.
    """
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    model = chart.model
    if chart.d != model.dim - 1:
        raise ValueError("chart is not a hypersurface")
    u0 = np.atleast_1d(np.asarray(param_point, dtype=float))
    pt = chart.point(u0)
    first, second = _chart_derivatives(chart, u0)
    first = [model.tangent_project(pt, v) for v in first]
    d = chart.d
    gram = np.array([[model.inner(pt, a, b) for b in first] for a in first])
    if np.linalg.det(gram) <= 1e-10:
        raise ValueError("degenerate parametrization")
    corr = _covariant_correction(model, pt, first)

    # unit normal: complete the tangents, align with the reference side
    candidates = list(first) + [model.tangent_project(pt, s) for s in np.eye(model.chart_dim())]
    basis = _orthonormalize(candidates, lambda a, b: model.inner(pt, a, b), keep=model.dim)
    if len(basis) < model.dim:
        raise ValueError("degenerate parametrization")
    nu = basis[-1]
    ref = side * chart.reference_normal(u0)
    if model.inner(pt, nu, ref) < 0:
        nu = -nu

    m_chart = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            vec = second[i, j] + corr[i, j]
            m_chart[i, j] = model.inner(pt, vec, nu)
    m_chart = 0.5 * (m_chart + m_chart.T)

    # congruence to the orthonormalized frame e = L^{-1} (d sigma)
    L = np.linalg.cholesky(gram)
    Linv = np.linalg.inv(L)
    matrix = Linv @ m_chart @ Linv.T
    matrix = 0.5 * (matrix + matrix.T)
    frame = [sum(Linv[a, i] * first[i] for i in range(d)) for a in range(d)]
    return ShapeForm(base=pt, normal=nu, matrix=matrix, basis=frame)
