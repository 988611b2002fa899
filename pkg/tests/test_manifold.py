"""Metric models: inner products, geodesics, frames, transport."""

import math

import numpy as np
import pytest

from geoperiod import (
    ConfigError,
    CoshProfile,
    Euclidean,
    FlatTorus,
    RoundSphere,
    SpaceForm,
    WarpedSurface,
    model_from_spec,
)


def test_euclidean_inner_is_dot():
    m = Euclidean(3)
    p = np.zeros(3)
    u, v = np.array([1.0, 2.0, -1.0]), np.array([0.5, 0.0, 4.0])
    assert m.inner(p, u, v) == pytest.approx(float(u @ v), abs=0.0)
    assert m.distance(np.zeros(3), np.array([3.0, 4.0, 0.0])) == pytest.approx(5.0)


def test_torus_distance_wraps():
    # fundamental domain is [0, 2*pi)^n, so 0.1 -> 6.2 is the short way round
    m = FlatTorus(2)
    d = m.distance(np.array([0.1, 0.0]), np.array([6.2, 0.0]))
    assert d == pytest.approx(2.0 * math.pi - 6.1, abs=1e-12)


def test_space_form_base_point_on_sheet():
    for b in (1.0, 2.0):
        m = SpaceForm(3, -(b * b))
        p = m.base_point()
        mink = -p[0] * p[0] + float(p[1:] @ p[1:])
        assert mink == pytest.approx(-1.0 / (b * b), abs=1e-15)


def test_space_form_tangent_basis_orthonormal():
    m = SpaceForm(3, -1.0)
    rng = np.random.default_rng(3)
    p0 = m.base_point()
    for r in (0.0, 1.5, 10.0):
        p = m.exp_velocity(p0, m.random_unit(rng, p0), r)[0] if r else p0
        basis = m.tangent_basis(p)
        assert len(basis) == 3
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                want = 1.0 if i == j else 0.0
                # frame error grows like e^{2r} eps; 1e-5 is ample at r = 10
                assert m.inner(p, u, v) == pytest.approx(want, abs=1e-5)


def test_space_form_exp_is_unit_speed():
    m = SpaceForm(2, -1.0)
    p = m.base_point()
    v = m.tangent_basis(p)[0]
    for t in (0.3, 1.0, 4.7):
        q, w = m.exp_velocity(p, v, t)
        assert m.distance(p, q) == pytest.approx(t, rel=1e-12)
        assert m.inner(q, w, w) == pytest.approx(1.0, abs=1e-10)


def test_space_form_right_angle_law():
    # hyperbolic Pythagoras: cosh d = cosh a cosh b for perpendicular legs
    m = SpaceForm(2, -1.0)
    p = m.base_point()
    e1, e2 = m.tangent_basis(p)
    q1 = m.exp_velocity(p, e1, 1.0)[0]
    q2 = m.exp_velocity(p, e2, 1.3)[0]
    oracle = math.acosh(math.cosh(1.0) * math.cosh(1.3))
    assert m.distance(q1, q2) == pytest.approx(oracle, abs=1e-12)


def test_space_form_transport_preserves_inner():
    m = SpaceForm(3, -1.0)
    p = m.base_point()
    basis = m.tangent_basis(p)
    v = basis[0]
    moved = m.transport_frame(p, v, basis, 5.0)
    q = m.exp_velocity(p, v, 5.0)[0]
    for i, u in enumerate(moved):
        for j, w in enumerate(moved):
            want = 1.0 if i == j else 0.0
            assert m.inner(q, u, w) == pytest.approx(want, abs=1e-9)


def test_round_sphere_distance_is_angle():
    m = RoundSphere(2)
    p = np.array([0.0, 0.0, 1.0])
    q = np.array([math.sin(0.7), 0.0, math.cos(0.7)])
    assert m.distance(p, q) == pytest.approx(0.7, abs=1e-12)


def test_warped_cosh_profile_is_hyperbolic():
    # f = cosh r gives K = -1; Fermi-coordinate distance has a closed form
    m = WarpedSurface(CoshProfile(1.0), (-30.0, 30.0))
    p, q = np.array([0.7, 0.0]), np.array([-0.4, 1.3])
    oracle = math.acosh(
        math.cosh(0.7) * math.cosh(-0.4) * math.cosh(1.3)
        - math.sinh(0.7) * math.sinh(-0.4)
    )
    assert oracle == pytest.approx(1.757777197585985, abs=1e-14)  # frozen
    assert m.distance(p, q) == pytest.approx(oracle, abs=1e-12)


def test_random_unit_has_unit_norm():
    rng = np.random.default_rng(11)
    models = [
        Euclidean(3),
        FlatTorus(2),
        SpaceForm(3, -4.0),
        WarpedSurface(CoshProfile(1.0), (-30.0, 30.0)),
    ]
    for m in models:
        p = m.random_point(rng)
        v = m.random_unit(rng, p)
        assert m.inner(p, v, v) == pytest.approx(1.0, abs=1e-9)


def test_model_from_spec_accepts_aliases():
    assert isinstance(model_from_spec("spaceform", 3, curvature=-1.0), SpaceForm)
    assert isinstance(model_from_spec("space_form", 2, curvature=-4.0), SpaceForm)
    assert isinstance(model_from_spec("torus", 2), FlatTorus)
    assert isinstance(model_from_spec("sphere", 2), RoundSphere)
    assert isinstance(model_from_spec("euclidean", 4), Euclidean)
    assert isinstance(
        model_from_spec("warped", profile="polynomial", profile_params=(1.0, 0.0, 0.5)),
        WarpedSurface,
    )
    with pytest.raises(ConfigError):
        model_from_spec("klein_bottle")
    with pytest.raises(ConfigError):
        model_from_spec("space_form")  # curvature is required
