"""Period series on flat tori and the round sphere, lattice counts, Parseval."""

import cmath
import itertools
import math

import numpy as np
import pytest

from geoperiod import FlatTorus, NumericalError, RoundSphere, torus_graph_chart, torus_plane_chart
from geoperiod import kuznecov as kz


def test_torus_period_selection_rule():
    # circle {x2 = const} in the 2 pi torus: period is delta_{m1,0} e^{i m.c}
    t2 = FlatTorus(2)
    sig = torus_plane_chart(t2, np.array([[1.0], [0.0]]), np.array([0.3, 0.7]))
    for m in itertools.product(range(-3, 4), repeat=2):
        mv = np.array(m)
        exact = kz.torus_period_exact(mv, sig)
        oracle = cmath.exp(1j * (0.3 * m[0] + 0.7 * m[1])) if m[0] == 0 else 0.0
        assert exact == pytest.approx(oracle, abs=1e-14)
        assert kz.torus_period(mv, sig) == pytest.approx(exact, abs=1e-12)


def test_axis_circle_series():
    t2 = FlatTorus(2)
    sig = torus_plane_chart(t2, np.array([[1.0], [0.0]]))
    series = kz.torus_kuznecov(sig, 1000.0)
    assert len(series.entries) == 2001
    # all surviving modes are constant along the circle: |period| = 1
    assert series.period_sup == pytest.approx(1.0, abs=1e-12)
    n10 = sum(1 for e in series.entries if e.eigenvalue <= 10.0 + 1e-12)
    assert n10 == 21
    assert series.fit.exponent == pytest.approx(0.999246132892394, abs=1e-9)  # frozen
    assert 0.95 <= series.fit.exponent <= 1.05
    cum = np.asarray(series.cumulative)
    assert np.all(np.diff(cum) >= 0.0)
    assert cum[-1] == pytest.approx(2001.0, abs=1e-9)


def test_graph_chart_series_same_growth():
    # a wavy perturbation of the circle keeps the n - d = 1 growth rate
    t2 = FlatTorus(2)

    def height(ang):
        ang = np.atleast_1d(np.asarray(ang, dtype=float))
        return 0.2 * float(np.sum(np.cos(ang)))

    chart = torus_graph_chart(t2, height)
    series = kz.torus_kuznecov(chart, 60.0)
    assert 0.9 <= series.fit.exponent <= 1.1
    assert series.period_sup <= 1.5


def test_sphere_zonal_periods():
    # equator period of Y_{l,0}: sqrt(pi (2l+1)) P_l(0); frozen at l = 0, 2
    assert kz.sphere_zonal_period(0) == pytest.approx(math.sqrt(math.pi), abs=1e-14)
    oracle2 = math.sqrt(5.0 * math.pi) * (-0.5)
    assert oracle2 == pytest.approx(-1.9816636488030057, abs=1e-14)  # frozen
    assert kz.sphere_zonal_period(2) == pytest.approx(oracle2, abs=1e-12)
    assert all(kz.sphere_zonal_period(ell) == 0.0 for ell in range(1, 200, 2))
    sup = max(abs(kz.sphere_zonal_period(ell)) for ell in range(0, 201))
    assert sup == pytest.approx(1.9999968906173589, abs=1e-12)  # frozen
    assert 1.0 <= sup <= 3.0


def test_sphere_recurrence_matches_quadrature():
    worst = max(
        abs(kz.sphere_zonal_period(ell) - kz.sphere_nonzonal_period(ell, 0).real)
        for ell in range(0, 21)
    )
    assert worst <= 1e-9


def test_sphere_series_growth():
    series = kz.sphere_kuznecov(200)
    assert 0.9 <= series.fit.exponent <= 1.1
    assert series.period_sup <= 3.0
    cum = np.asarray(series.cumulative)
    assert np.all(np.diff(cum) >= 0.0)


def test_lattice_counts_brute_force():
    for n, q in ((2, 25), (3, 1), (3, 4), (2, 3), (3, 7)):
        k = int(math.isqrt(q)) + 1
        oracle = sum(
            1
            for m in itertools.product(range(-k, k + 1), repeat=n)
            if sum(c * c for c in m) == q
        )
        assert kz.lattice_sphere_count(n, q) == oracle
    assert kz.lattice_sphere_count(2, 25) == 12
    assert kz.lattice_sphere_count(3, 1) == 6


def test_lattice_budget_guard():
    with pytest.raises(NumericalError):
        kz.lattice_sphere_count(3, 10**8)


def test_parseval_defects_monotone():
    def f(x, y):
        return np.exp(np.sin(x) + 0.5 * np.cos(y))

    defects = kz.parseval_defects(f, (4, 8, 16, 32))
    vals = [d for _, d in defects]
    assert all(v >= -1e-12 for v in vals)
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 1e-10


def test_normalization_residuals():
    torus_res = kz.normalization_residuals(
        kz.SpectralBasisSpec(FlatTorus(2), 10.0), count=10, seed=0
    )
    sphere_res = kz.normalization_residuals(
        kz.SpectralBasisSpec(RoundSphere(2), 12), count=10, seed=0
    )
    assert max(torus_res) <= 1e-10
    assert max(sphere_res) <= 1e-10
