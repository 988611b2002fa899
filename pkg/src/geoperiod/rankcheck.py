"""Rank condition for period-integral decay and its sufficient screens.

For a hypersurface chart and a point on it, both difference forms

    D_plus  = <II_Sigma - II_{H(v)},  v>,
    D_minus = <II_Sigma - II_{H(-v)}, -v>,

are assembled in the same orthonormal tangent frame (the horosphere
form is isotropic on the scalar-reducible models here, so its matrix is
a multiple of the identity in any such frame) and their numerical ranks
must sum to at least the ambient dimension.

Numerical rank counts singular values above

    max(rank_tol * sigma_max, jacobi_tol + 1e-8).

The absolute floor matters: flat models carry a horosphere diagonal
equal to the certified truncation tolerance rather than its limit 0,
and chart curvatures carry finite-difference noise near 1e-9; both must
never register as rank.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curvature import HypersurfaceChart, horosphere_shape, hypersurface_shape
from .manifold import PointTangent

__all__ = ["RankReport", "SweepSummary", "rank_condition", "corollary_screen", "surface_sweep"]

DEFAULT_RANK_TOL = 1e-6
DEFAULT_JACOBI_TOL = 1e-6

_FLOOR_PAD = 1e-8  # absorbs finite-difference noise on top of the truncation
_CURV_MARGIN = 1e-8  # principal curvature must clear [a, b] by this much


@dataclass
class RankReport:
    point: np.ndarray
    rank_plus: int
    rank_minus: int
    sum: int
    passes: bool
    singular_values: tuple
    clauses: frozenset = frozenset()
    consistent: bool = True


@dataclass
class SweepSummary:
    total: int
    passed: int
    fraction: float
    min_rank_sum: int
    worst_singular_value: float
    inconsistencies: int


def _numerical_rank(matrix, rank_tol, jacobi_tol):
    sigma = np.linalg.svd(matrix, compute_uv=False)
    if sigma.size == 0:
        return 0, sigma, np.inf
    threshold = max(rank_tol * float(sigma[0]), jacobi_tol + _FLOOR_PAD)
    counted = sigma[sigma > threshold]
    worst = float(counted[-1]) if counted.size else np.inf
    return int(counted.size), sigma, worst


def rank_condition(
    chart,
    param_point,
    rank_tol=DEFAULT_RANK_TOL,
    jacobi_tol=DEFAULT_JACOBI_TOL,
    flip_orientation=False,
):
    """Evaluate the rank hypothesis at one chart point, both normals at once.

    flip_orientation swaps which normal is called v; rank_plus and
    rank_minus swap with it exactly.
    """
    if not 0 < rank_tol < 1:
        raise ValueError("rank_tol must lie in (0, 1)")
    model = chart.model
    shape = hypersurface_shape(chart, param_point, side=-1 if flip_orientation else 1)
    nu = shape.normal
    m_plus = horosphere_shape(model, PointTangent(shape.base, nu), jacobi_tol).diagonal_value()
    m_minus = horosphere_shape(model, PointTangent(shape.base, -nu), jacobi_tol).diagonal_value()
    k = model.dim - 1
    d_plus = shape.matrix - m_plus * np.eye(k)
    d_minus = -shape.matrix - m_minus * np.eye(k)
    rank_p, sig_p, _ = _numerical_rank(d_plus, rank_tol, jacobi_tol)
    rank_m, sig_m, _ = _numerical_rank(d_minus, rank_tol, jacobi_tol)
    return RankReport(
        point=np.atleast_1d(np.asarray(param_point, dtype=float)),
        rank_plus=rank_p,
        rank_minus=rank_m,
        sum=rank_p + rank_m,
        passes=rank_p + rank_m >= model.dim,
        singular_values=(sig_p, sig_m),
    )


def corollary_screen(chart, param_point, a, b, jacobi_tol=DEFAULT_JACOBI_TOL):
    """Which sufficient clauses hold at the point.

    (1) at least n/2 principal curvatures have |kappa| outside [a, b];
    (2) the chart is the geodesic-sphere built-in;
    (3) the curvature is strictly negative and II_Sigma vanishes.

    a and b must satisfy 0 <= a <= b and bracket the sampled sectional
    curvature as -b^2 <= K <= -a^2.
    """
    if not (0 <= a <= b):
        raise ValueError("inconsistent curvature bounds")
    model = chart.model
    shape = hypersurface_shape(chart, param_point, side=1)
    K = model.curvature_at(shape.base)
    if K < -b * b - 1e-9 or K > -a * a + 1e-9:
        raise ValueError("inconsistent curvature bounds")
    clauses = set()
    kappa = np.abs(shape.principal_curvatures())
    outside = np.sum((kappa < a - _CURV_MARGIN) | (kappa > b + _CURV_MARGIN))
    if 2 * int(outside) >= model.dim:
        clauses.add(1)
    if chart.kind == "geodesic_sphere":
        clauses.add(2)
    if K < -1e-12 and float(np.max(np.abs(shape.matrix))) <= 1e-8:
        clauses.add(3)
    return frozenset(clauses)


def surface_sweep(
    chart,
    grid,
    rank_tol=DEFAULT_RANK_TOL,
    jacobi_tol=DEFAULT_JACOBI_TOL,
    a=None,
    b=None,
    threads=1,
):
    """Rank reports over a parameter grid plus an aggregate summary.

    grid is either a per-axis density (int) expanded over the chart
    domain, or an explicit (k, d) array of parameter points.  When the
    curvature bounds (a, b) are supplied, each report also carries the
    corollary clauses and a consistency flag (clauses imply passing).
    Results are ordered by grid index regardless of thread count.
    """
    if isinstance(grid, (int, np.integer)):
        points = chart.grid(int(grid))
    else:
        points = np.atleast_2d(np.asarray(grid, dtype=float))

    def one(u):
        report = rank_condition(chart, u, rank_tol=rank_tol, jacobi_tol=jacobi_tol)
        if a is not None and b is not None:
            clauses = corollary_screen(chart, u, a, b, jacobi_tol=jacobi_tol)
            report.clauses = clauses
            report.consistent = (not clauses) or report.passes
        return report

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, points))
    else:
        reports = [one(u) for u in points]

    passed = sum(1 for r in reports if r.passes)
    worst = min(
        (min(_counted_floor(r, rank_tol, jacobi_tol)) for r in reports),
        default=np.inf,
    )
    summary = SweepSummary(
        total=len(reports),
        passed=passed,
        fraction=passed / len(reports) if reports else 0.0,
        min_rank_sum=min((r.sum for r in reports), default=0),
        worst_singular_value=float(worst) if np.isfinite(worst) else 0.0,
        inconsistencies=sum(1 for r in reports if not r.consistent),
    )
    return reports, summary


def _counted_floor(report, rank_tol, jacobi_tol):
    """Smallest singular values that counted toward each side's rank."""
    out = []
    for sigma in report.singular_values:
        if sigma.size == 0:
            continue
        threshold = max(rank_tol * float(sigma[0]), jacobi_tol + _FLOOR_PAD)
        counted = sigma[sigma > threshold]
        if counted.size:
            out.append(float(counted[-1]))
    return out or [np.inf]
