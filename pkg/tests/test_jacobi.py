"""Scalar Jacobi solutions: Dirichlet truncation, stable limit, sine ratio."""

import math

import numpy as np
import pytest

from geoperiod import (
    CoshQuadProfile,
    Euclidean,
    NumericalError,
    PointTangent,
    SpaceForm,
    WarpedSurface,
    dirichlet_jacobi,
    integrate_geodesic,
    sine_ratio,
    stable_jacobi,
)


def _unit_geodesic(model, r_max, rng=None):
    if rng is None:
        p = model.base_point() if isinstance(model, SpaceForm) else np.zeros(model.chart_dim())
        v = model.tangent_basis(p)[0]
    else:
        p = model.random_point(rng)
        v = model.random_unit(rng, p)
    return integrate_geodesic(model, PointTangent(p, v), r_max)


def test_geodesic_matches_exp():
    m = SpaceForm(3, -1.0)
    g = _unit_geodesic(m, 4.0)
    q = m.exp_velocity(g.initial.point, g.initial.vector, 2.5)[0]
    assert np.allclose(g.point(2.5), q, atol=1e-10)


def test_dirichlet_constant_curvature_value():
    # K = -1, s = 2: h_s(t) = sinh(s - t) / sinh(s)
    oracle = math.sinh(1.0) / math.sinh(2.0)
    assert oracle == pytest.approx(0.3240271368319428, abs=1e-15)  # frozen
    g = _unit_geodesic(SpaceForm(2, -1.0), 4.0)
    h = dirichlet_jacobi(g, 0, 2.0)
    assert h.value(1.0) == pytest.approx(oracle, abs=1e-12)
    assert h.value(0.0) == pytest.approx(1.0, abs=1e-14)
    assert h.value(2.0) == pytest.approx(0.0, abs=1e-14)


def test_dirichlet_flat_is_linear():
    g = _unit_geodesic(Euclidean(2), 6.0)
    h = dirichlet_jacobi(g, 0, 5.0)
    for t in (0.0, 1.25, 4.0, 5.0):
        assert h.value(t) == pytest.approx(1.0 - t / 5.0, abs=1e-12)


def test_dirichlet_sandwich_on_warped():
    model = WarpedSurface(CoshQuadProfile(1.0, 0.5), (-30.0, 30.0))
    rng = np.random.default_rng(5)
    g = _unit_geodesic(model, 6.0, rng)
    h = dirichlet_jacobi(g, 0, 6.0)
    ts = np.linspace(0.0, 6.0, 200)
    vals = np.array([h.value(t) for t in ts])
    assert np.all(vals >= -1e-12)
    assert np.all(vals <= 1.0 - ts / 6.0 + 1e-9)


def test_stable_derivative_is_minus_b():
    # stable solution on K = -b^2 is e^{-b t}, so h'(0) = -b exactly
    for b in (1.0, 2.0, 3.0):
        g = _unit_geodesic(SpaceForm(2, -(b * b)), 4.0)
        h = stable_jacobi(g, 0, 4.0, 1e-6)
        assert h.derivative(0.0) == pytest.approx(-b, abs=1e-8)
        assert h.truncation_bound == pytest.approx(1e-6, abs=0.0)


def test_stable_tolerance_cap():
    # horizon r_max / tol beyond the hard cap must refuse, not silently truncate
    g = _unit_geodesic(SpaceForm(2, -1.0), 4.0)
    with pytest.raises(NumericalError, match="tolerance unachievable"):
        stable_jacobi(g, 0, 4.0, 1e-8)


def test_sine_ratio_values():
    g = _unit_geodesic(SpaceForm(2, -1.0), 2.0)
    oracle = math.cosh(0.1) / math.sinh(0.1)
    assert oracle == pytest.approx(10.03331113225399, abs=1e-12)  # frozen
    assert sine_ratio(g, 0.1) == pytest.approx(oracle, abs=1e-9)
    gf = _unit_geodesic(Euclidean(2), 2.0)
    assert sine_ratio(gf, 0.25) == pytest.approx(4.0, abs=1e-9)


def test_normal_index_validated():
    g = _unit_geodesic(SpaceForm(2, -1.0), 2.0)
    with pytest.raises(ValueError):
        dirichlet_jacobi(g, 1, 1.0)
    with pytest.raises(ValueError):
        dirichlet_jacobi(g, -1, 1.0)
