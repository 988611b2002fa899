"""Cross-module invariant suite behind the verify-all subcommand.

Each check exercises one documented invariant end to end and reports a
single pass flag plus a short numeric detail string.  Everything is
seeded and assembled in a fixed order, so two runs with the same seed
produce identical output bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kuznecov as kz
from . import oscint
from .config import parse_config
from .curvature import (
    comparison_report,
    geodesic_sheet_chart,
    geodesic_sphere_chart,
    horosphere_chart,
    horosphere_shape,
    hypersurface_shape,
    sphere_shape,
    torus_plane_chart,
)
from .errors import ConfigError, NumericalError
from .jacobi import dirichlet_jacobi, integrate_geodesic, stable_jacobi
from .manifold import (
    CoshQuadProfile,
    Euclidean,
    FlatTorus,
    PointTangent,
    RoundSphere,
    SpaceForm,
    WarpedSurface,
)
from .rankcheck import surface_sweep


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _r(x):
    return repr(float(x))


def _sample_models(rng):
    pool = [
        SpaceForm(2, -1.0),
        SpaceForm(3, -4.0),
        Euclidean(3),
        WarpedSurface(CoshQuadProfile(1.0, 0.5)),
    ]
    return pool[int(rng.integers(0, len(pool)))]


def check_config_strictness(seed, threads):
    try:
        parse_config(text="[tolerances]\njacobi_tol = -1\n")
        return False, "negative tolerance was accepted"
    except ConfigError as exc:
        if "jacobi_tol" not in str(exc):
            return False, "error message does not name the key"
    try:
        parse_config(text="[tolerances]\nmystery = 1\n")
        return False, "unknown key was accepted"
    except ConfigError as exc:
        if "mystery" not in str(exc):
            return False, "error message does not name the unknown key"
    return True, "negative and unknown keys rejected with names"


def check_dirichlet_sandwich(seed, threads):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(8):
        model = _sample_models(rng)
        s = float(rng.uniform(0.5, 8.0))
        p = model.random_point(rng)
        v = model.random_unit(rng, p)
        geod = integrate_geodesic(model, PointTangent(p, v), s)
        sol = dirichlet_jacobi(geod, 0, s)
        rs = np.linspace(0.0, s, 200)
        hs = np.array([sol.value(r) for r in rs])
        lo = float(np.min(hs))
        hi = float(np.max(hs - (1.0 - rs / s)))
        worst = max(worst, -lo, hi)
        if abs(sol.value(s)) > 1e-10:
            return False, f"h_s(s) = {_r(sol.value(s))} not zero"
    return worst <= 1e-9, f"worst sandwich violation {_r(worst)}"


def check_stable_jacobi(seed, threads):
    worst_d = 0.0
    for b in (1.0, 2.0, 3.0):
        model = SpaceForm(2, -b * b)
        p = model.base_point()
        v = model.tangent_basis(p)[0]
        geod = integrate_geodesic(model, PointTangent(p, v), 4.0)
        sol = stable_jacobi(geod, 0, 4.0, 1e-6)
        worst_d = max(worst_d, abs(sol.derivative(0.0) + b))
        # truncation: the finite-center solution is within r_max/s
        dir_sol = dirichlet_jacobi(geod, 0, 4.0)
        gap = max(
            abs(sol.value(r) - dir_sol.value(r)) for r in np.linspace(0.0, 4.0, 50)
        )
        if gap > 4.0 / 4.0:  # s = r_max for the Dirichlet solution here
            return False, f"truncation gap {_r(gap)}"
    return worst_d <= 1e-8, f"worst |h'(0)+b| = {_r(worst_d)}"


def check_horosphere_diagonal(seed, threads):
    worst = 0.0
    for b in (1.0, 2.0, 3.0):
        for n in (2, 3):
            model = SpaceForm(n, -b * b)
            p = model.base_point()
            v = model.tangent_basis(p)[0]
            shape = horosphere_shape(model, PointTangent(p, v), tol=1e-7)
            worst = max(worst, abs(shape.diagonal_value() - b))
    return worst <= 1e-6, f"worst |diag - b| = {_r(worst)}"


def check_riccati_comparison(seed, threads):
    model = SpaceForm(2, -1.0)
    p = model.base_point()
    v = model.tangent_basis(p)[0]
    geod = integrate_geodesic(model, PointTangent(p, v), 50.0)
    report = comparison_report(model, geod, np.linspace(0.05, 50.0, 50))
    margin = float(np.min(report.rows[:, 4] - report.rows[:, 3]))
    return report.passed, f"min (1/r - difference) = {_r(margin)}"


def check_warped_sandwich(seed, threads):
    model = WarpedSurface(CoshQuadProfile(1.0, 0.5))
    # -b^2 <= K <= -a^2 read off the profile over the whole strip
    neg = model.profile.neg_curv(np.linspace(-30.0, 30.0, 4001))
    a, b = math.sqrt(float(np.min(neg))), math.sqrt(float(np.max(neg)))
    worst = 0.0
    p = np.array([0.3, 0.2])
    v = model.random_unit(np.random.default_rng(seed), p)
    geod = integrate_geodesic(model, PointTangent(p, v), 6.0)
    for r in (0.5, 1.0, 2.0, 5.0):
        diag = sphere_shape(model, geod, r).diagonal_value()
        lo = a / math.tanh(a * r)
        hi = b / math.tanh(b * r)
        worst = max(worst, lo - diag, diag - hi)
    hdiag = horosphere_shape(model, PointTangent(p, v), tol=1e-6).diagonal_value()
    worst = max(worst, a - hdiag, hdiag - b)
    return worst <= 1e-6, f"worst sandwich excess {_r(worst)} for a={_r(a)}, b={_r(b)}"


def check_chart_shape_consistency(seed, threads):
    model = SpaceForm(3, -1.0)
    chart = geodesic_sphere_chart(model, model.base_point(), 1.2)
    worst = 0.0
    for u in ([0.0, 0.0], [0.2, -0.1], [-0.3, 0.25]):
        eigs = np.sort(hypersurface_shape(chart, u).principal_curvatures())
        worst = max(worst, float(np.max(np.abs(eigs - 1.0 / math.tanh(1.2)))))
    base = model.base_point()
    v = PointTangent(base, model.tangent_basis(base)[0])
    horo = horosphere_chart(model, v)
    eigs = np.sort(hypersurface_shape(horo, [0.05, -0.02]).principal_curvatures())
    worst = max(worst, float(np.max(np.abs(eigs - 1.0))))
    return worst <= 1e-6, f"worst chart-vs-closed-form gap {_r(worst)}"


def check_rank_dichotomy(seed, threads):
    model = SpaceForm(3, -1.0)
    base = model.base_point()
    v = model.tangent_basis(base)[0]
    sphere = geodesic_sphere_chart(model, base, 1.0)
    sheet = geodesic_sheet_chart(model, base)
    horo = horosphere_chart(model, PointTangent(base, v))
    torus = FlatTorus(2)
    plane = torus_plane_chart(torus, [[1], [0]])
    fracs = []
    for chart, density, a, b in (
        (sphere, 10, 1.0, 1.0),
        (sheet, 10, 1.0, 1.0),
        (horo, 10, 1.0, 1.0),
        (plane, 100, 0.0, 0.0),
    ):
        _, summary = surface_sweep(chart, density, a=a, b=b, threads=threads)
        fracs.append(summary.fraction)
        if summary.inconsistencies:
            return False, f"{chart.kind}: {summary.inconsistencies} corollary inconsistencies"
    ok = fracs[0] == 1.0 and fracs[1] == 1.0 and fracs[2] == 0.0 and fracs[3] == 0.0
    return ok, (
        "pass fractions sphere/sheet/horosphere/plane = "
        + ", ".join(_r(f) for f in fracs)
    )


def check_oscint_convergence(seed, threads):
    worst = 0.0
    problems = [
        oscint.OscillatoryProblem(1, oscint.QuadraticPhase([[1.0]])),
        oscint.OscillatoryProblem(2, oscint.QuadraticPhase(np.eye(2))),
        oscint.OscillatoryProblem(1, oscint.LinearPhase([3.0])),
        oscint.OscillatoryProblem(2, oscint.LinearSquarePhase(1.0, 1.0)),
    ]
    for prob in problems:
        for lam in (16.0, 64.0, 256.0):
            res = oscint.evaluate(prob, lam)
            worst = max(worst, res.err_est / res.err_tol)
            if not res.converged:
                return False, f"err {_r(res.err_est)} above tol at lambda {_r(lam)}"
    return True, f"worst err/tol ratio {_r(worst)}"


def check_oscint_nondegenerate(seed, threads):
    exps = []
    for n, q in ((1, [[1.0]]), (2, np.eye(2)), (2, np.diag([1.0, -1.0]))):
        prob = oscint.OscillatoryProblem(n, oscint.QuadraticPhase(q))
        res = oscint.verify_nondegenerate_bound(prob, threads=threads)
        exps.append(res.fit.exponent)
        if not (res.passed and res.quadrature_ok):
            return False, f"n={n} exponent {_r(res.fit.exponent)}"
        if abs(res.fit.exponent + 0.5 * n) > 0.1:
            return False, f"n={n} exponent {_r(res.fit.exponent)} off target"
    return True, "exponents " + ", ".join(_r(e) for e in exps)


def check_oscint_nonstationary(seed, threads):
    prob = oscint.OscillatoryProblem(1, oscint.LinearPhase([1.0]))
    res = oscint.verify_nonstationary_bound(prob, order=4, threads=threads)
    if not res.passed:
        return False, f"linear phase exponent {_r(res.fit.exponent)}"
    control = oscint.OscillatoryProblem(1, oscint.QuadraticPhase([[1.0]]))
    neg = oscint.verify_nonstationary_bound(control, order=4, threads=threads)
    if neg.passed:
        return False, "critical-point control passed the nonstationary bound"
    return True, (
        f"exponent {_r(res.fit.exponent)}; control {_r(neg.fit.exponent)} fails as it must"
    )


def _parallel_sheets(model, r):
    base = _base_point(model)
    normal = model.tangent_basis(base)[-1]
    chart_a = geodesic_sheet_chart(model, base, normal=normal)
    far, vel = model.exp_velocity(base, normal, r)
    chart_b = geodesic_sheet_chart(model, far, normal=vel)
    return chart_a, chart_b


def _base_point(model):
    if isinstance(model, SpaceForm):
        return model.base_point()
    return np.zeros(model.chart_dim())


def check_hessian_formula(seed, threads):
    worst = 0.0
    for model in (Euclidean(2), SpaceForm(2, -1.0)):
        for r in (2.0, 5.0, 10.0):
            ca, cb = _parallel_sheets(model, r)
            comp = oscint.distance_phase_hessian(model, ca, cb, [0.0], [0.0])
            sym = float(np.max(np.abs(comp.finite_difference - comp.finite_difference.T)))
            if comp.discrepancy > 1e-3 or not comp.mixed_ok or sym > 1e-5:
                return False, f"r={_r(r)} discrepancy {_r(comp.discrepancy)}"
            worst = max(worst, comp.discrepancy)
    model = Euclidean(2)
    ca, cb = _parallel_sheets(model, 4.0)
    comp = oscint.distance_phase_hessian(model, ca, cb, [0.0], [0.0])
    if abs(comp.finite_difference[0, 0] - 0.25) > 1e-3:
        return False, f"flat xx entry {_r(comp.finite_difference[0, 0])} != 0.25"
    return True, f"worst diagonal-block discrepancy {_r(worst)}"


def check_hessian_mixed_random(seed, threads):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for model in (Euclidean(2), SpaceForm(2, -1.0)):
        for _ in range(100):
            r = float(rng.uniform(1.0, 20.0))
            # shoot half the separation each way from a point near the
            # chart origin: hyperboloid coordinates stay representable
            mid = model.random_point(rng)
            w = model.random_unit(rng, mid)
            p_a, v_a = model.exp_velocity(mid, w, -0.5 * r)
            p_b, v_b = model.exp_velocity(mid, w, 0.5 * r)
            chart_a = geodesic_sheet_chart(model, p_a, normal=v_a)
            tilt = model.random_unit(rng, p_b)
            chart_b = geodesic_sheet_chart(model, p_b, normal=tilt)
            try:
                comp = oscint.distance_phase_hessian(
                    model, chart_a, chart_b, [0.0], [0.0], mixed_slack=5e-3
                )
            except ValueError:
                continue  # separation dipped below the validity radius
            if not comp.mixed_ok:
                return False, f"mixed bound violated at r = {_r(comp.r)}"
            worst = max(
                worst, float(np.max(np.abs(comp.finite_difference[:1, 1:]))) * comp.r / 2.0
            )
    return True, f"max scaled mixed entry {_r(worst)} (bound 1 + slack)"


def check_kuznecov_axis_circle(seed, threads):
    torus = FlatTorus(2)
    circle = torus_plane_chart(torus, [[1], [0]])
    series = kz.torus_kuznecov(circle, 10.0)
    n10 = series.cumulative[-1]
    if abs(n10 - 21.0) > 1e-12:
        return False, f"N(10) = {_r(n10)} != 21"
    series = kz.torus_kuznecov(circle, 1000.0)
    ok = 0.95 <= series.fit.exponent <= 1.05
    return ok, f"N(10) = 21; exponent {_r(series.fit.exponent)}"


def check_kuznecov_t3(seed, threads):
    torus = FlatTorus(3)
    plane = torus_plane_chart(torus, [[1, 0], [0, 1], [0, 0]])
    s_plane = kz.torus_kuznecov(plane, 500.0)
    circle = torus_plane_chart(torus, [[1], [0], [0]])
    s_circle = kz.torus_kuznecov(circle, 100.0)
    ok = abs(s_plane.fit.exponent - 1.0) <= 0.1 and abs(s_circle.fit.exponent - 2.0) <= 0.1
    return ok, (
        f"plane exponent {_r(s_plane.fit.exponent)}, circle exponent {_r(s_circle.fit.exponent)}"
    )


def check_kuznecov_selection(seed, threads):
    torus = FlatTorus(2)
    charts = [
        torus_plane_chart(torus, [[1], [0]]),
        torus_plane_chart(torus, [[1], [1]], offset=[0.3, 0.1]),
    ]
    worst = 0.0
    for chart in charts:
        for m1 in range(-4, 5):
            for m2 in range(-4, 5):
                quad = kz.torus_period([m1, m2], chart)
                exact = kz.torus_period_exact([m1, m2], chart)
                worst = max(worst, abs(quad - exact))
    return worst <= 1e-12, f"max |quadrature - closed form| = {_r(worst)}"


def check_kuznecov_sphere(seed, threads):
    sup = max(abs(kz.sphere_zonal_period(ell)) for ell in range(0, 201))
    if not 1.0 <= sup <= 3.0:
        return False, f"zonal sup {_r(sup)} outside [1, 3]"
    if any(kz.sphere_zonal_period(ell) != 0.0 for ell in range(1, 201, 2)):
        return False, "odd-degree zonal period not exactly zero"
    worst = max(
        abs(kz.sphere_zonal_period(ell) - kz.sphere_nonzonal_period(ell, 0).real)
        for ell in range(0, 31)
    )
    if worst > 1e-9:
        return False, f"recurrence vs quadrature gap {_r(worst)}"
    series = kz.sphere_kuznecov(200)
    ok = 0.9 <= series.fit.exponent <= 1.1
    return ok, f"sup {_r(sup)}; exponent {_r(series.fit.exponent)}"


def check_kuznecov_lattice(seed, threads):
    vals = (
        kz.lattice_sphere_count(2, 25),
        kz.lattice_sphere_count(3, 1),
        kz.lattice_sphere_count(2, 3),
    )
    if vals != (12, 6, 0):
        return False, f"counts {vals} != (12, 6, 0)"
    try:
        kz.lattice_sphere_count(3, 10**8)
        return False, "budget overrun not rejected"
    except NumericalError:
        pass
    return True, "counts 12, 6, 0; budget enforced"


def check_parseval(seed, threads):
    def f(x, y):
        return np.exp(np.sin(x) + 0.5 * np.cos(y))

    defects = kz.parseval_defects(f, (4, 8, 16, 32))
    vals = [d for _, d in defects]
    ok = all(v >= -1e-12 for v in vals) and all(b <= a for a, b in zip(vals, vals[1:]))
    return ok, "defects " + ", ".join(_r(v) for v in vals)


def check_normalization(seed, threads):
    torus_res = kz.normalization_residuals(
        kz.SpectralBasisSpec(FlatTorus(2), 10.0), count=10, seed=seed
    )
    sphere_res = kz.normalization_residuals(
        kz.SpectralBasisSpec(RoundSphere(2), 12), count=10, seed=seed
    )
    worst = max(max(torus_res), max(sphere_res))
    return worst <= 1e-10, f"worst normalization residual {_r(worst)}"


ALL_CHECKS = (
    ("config-strictness", check_config_strictness),
    ("jacobi-dirichlet-sandwich", check_dirichlet_sandwich),
    ("jacobi-stable-derivative", check_stable_jacobi),
    ("horosphere-diagonal", check_horosphere_diagonal),
    ("riccati-comparison", check_riccati_comparison),
    ("warped-curvature-sandwich", check_warped_sandwich),
    ("chart-shape-consistency", check_chart_shape_consistency),
    ("rank-dichotomy", check_rank_dichotomy),
    ("oscint-convergence", check_oscint_convergence),
    ("oscint-nondegenerate", check_oscint_nondegenerate),
    ("oscint-nonstationary", check_oscint_nonstationary),
    ("hessian-formula", check_hessian_formula),
    ("hessian-mixed-random", check_hessian_mixed_random),
    ("kuznecov-axis-circle", check_kuznecov_axis_circle),
    ("kuznecov-t3", check_kuznecov_t3),
    ("kuznecov-selection-rule", check_kuznecov_selection),
    ("kuznecov-sphere", check_kuznecov_sphere),
    ("kuznecov-lattice", check_kuznecov_lattice),
    ("kuznecov-parseval", check_parseval),
    ("basis-normalization", check_normalization),
)


def run_checks(seed=0, threads=1, names=None):
    """Run the registered checks in order; never raises on check failure."""
    results = []
    for name, fn in ALL_CHECKS:
        if names is not None and name not in names:
            continue
        try:
            passed, detail = fn(seed, threads)
        except Exception as exc:  # a crash is a failure with the message as detail
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    return results
