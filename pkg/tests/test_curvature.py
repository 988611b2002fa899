"""Second fundamental forms: horospheres, spheres, sheets, graphs, reports."""

import math

import numpy as np
import pytest

from geoperiod import (
    CoshQuadProfile,
    Euclidean,
    FlatTorus,
    NumericalError,
    PointTangent,
    SpaceForm,
    WarpedSurface,
    comparison_report,
    geodesic_sheet_chart,
    geodesic_sphere_chart,
    graph_chart,
    horosphere_chart,
    horosphere_shape,
    hypersurface_shape,
    integrate_geodesic,
    sphere_shape,
    torus_plane_chart,
)


def _ray(model):
    p = model.base_point() if isinstance(model, SpaceForm) else np.zeros(model.chart_dim())
    return PointTangent(p, model.tangent_basis(p)[0])


def test_horosphere_diagonal_equals_b():
    for b in (1.0, 2.0, 3.0):
        for n in (2, 3):
            m = SpaceForm(n, -(b * b))
            shape = horosphere_shape(m, _ray(m), tol=1e-6)
            diag = np.diag(shape.matrix)
            assert np.max(np.abs(diag - b)) < 1e-6
            off = shape.matrix - np.diag(diag)
            assert np.max(np.abs(off)) < 1e-6


def test_sphere_shape_is_coth():
    # b coth(b r) for the inward normal; b = 1, r = 1 freezes to coth(1)
    oracle = math.cosh(1.0) / math.sinh(1.0)
    assert oracle == pytest.approx(1.3130352854993312, abs=1e-15)  # frozen
    m = SpaceForm(3, -1.0)
    g = integrate_geodesic(m, _ray(m), 2.0)
    s = sphere_shape(m, g, 1.0)
    assert s.diagonal_value() == pytest.approx(oracle, abs=1e-9)
    chart = geodesic_sphere_chart(m, m.base_point(), 1.0)
    shape = hypersurface_shape(chart, np.array([0.2, -0.4]))
    assert np.max(np.abs(np.diag(shape.matrix) - oracle)) < 1e-6


def test_flat_sphere_shape_is_inverse_radius():
    m = Euclidean(3)
    chart = geodesic_sphere_chart(m, np.zeros(3), 2.0)
    shape = hypersurface_shape(chart, np.array([0.1, 0.3]))
    assert np.max(np.abs(np.diag(shape.matrix) - 0.5)) < 1e-6


def test_totally_geodesic_sheets_have_zero_shape():
    m = SpaceForm(3, -1.0)
    sheet = geodesic_sheet_chart(m, m.base_point())
    shape = hypersurface_shape(sheet, np.array([0.3, 0.1]))
    assert np.max(np.abs(shape.matrix)) < 1e-6
    t = FlatTorus(3)
    plane = torus_plane_chart(t, np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    shape_t = hypersurface_shape(plane, np.array([0.5, 1.2]))
    assert np.max(np.abs(shape_t.matrix)) < 1e-9


def test_graph_chart_flat_height_is_a_sheet():
    m = Euclidean(3)

    def height(u):
        return 0.0

    chart = graph_chart(m, np.zeros(3), height)
    shape = hypersurface_shape(chart, np.array([0.2, -0.1]))
    assert np.max(np.abs(shape.matrix)) < 1e-6


def test_shape_matrix_symmetric():
    m = SpaceForm(3, -1.0)
    chart = horosphere_chart(m, _ray(m))
    shape = hypersurface_shape(chart, np.array([0.4, 0.2]))
    assert np.max(np.abs(shape.matrix - shape.matrix.T)) < 1e-8


def test_comparison_report_hyperbolic():
    m = SpaceForm(3, -1.0)
    g = integrate_geodesic(m, _ray(m), 50.0)
    grid = np.linspace(0.05, 50.0, 50)
    rep = comparison_report(m, g, grid, tol=1e-6, slack=1e-6)
    assert rep.passed
    diffs = np.array([row[3] for row in rep.rows])
    # strict positivity holds while the gap is representable; past r ~ 18
    # coth(r) - 1 underflows below double resolution and the slack covers it
    assert np.all(diffs > -1e-6)
    assert np.all(diffs[grid <= 15.0] > 0.0)
    assert np.all(diffs <= 1.0 / grid + 1e-6)
    assert np.all(np.diff(diffs) <= 0.0)


def test_warped_sandwich():
    model = WarpedSurface(CoshQuadProfile(1.0, 0.5), (-30.0, 30.0))
    neg = model.profile.neg_curv(np.linspace(-30.0, 30.0, 4001))
    a, b = math.sqrt(float(np.min(neg))), math.sqrt(float(np.max(neg)))
    assert a == pytest.approx(0.8714159043542032, abs=1e-12)  # frozen
    assert b == pytest.approx(math.sqrt(2.0), abs=1e-12)
    rng = np.random.default_rng(2)
    p = model.random_point(rng)
    v = model.random_unit(rng, p)
    g = integrate_geodesic(model, PointTangent(p, v), 6.0)
    for r in (0.5, 2.0, 5.0):
        s = sphere_shape(model, g, r).diagonal_value()
        assert a / math.tanh(a * r) - 1e-6 <= s <= b / math.tanh(b * r) + 1e-6
    u = horosphere_shape(model, PointTangent(p, -v), tol=1e-6).diagonal_value()
    assert a - 1e-5 <= u <= b + 1e-5


def test_far_point_frame_refused_loudly():
    # raw hyperboloid coordinates at r = 26 cannot certify a frame in doubles
    m = SpaceForm(2, -1.0)
    p = m.base_point()
    far = m.exp_velocity(p, m.tangent_basis(p)[0], 26.0)[0]
    w = m.random_unit(np.random.default_rng(7), far)
    with pytest.raises(NumericalError, match="frame"):
        geodesic_sheet_chart(m, far, normal=w)
