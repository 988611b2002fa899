"""Oscillatory integrals: quadrature accuracy, decay rates, Hessian bounds."""

import math

import numpy as np
import pytest

from geoperiod import (
    BumpAmplitude,
    ConfigError,
    Euclidean,
    LinearPhase,
    LinearSquarePhase,
    NumericalError,
    OscillatoryProblem,
    QuadraticPhase,
    SpaceForm,
    distance_phase_hessian,
    evaluate_grid,
    geodesic_sheet_chart,
    verify_nondegenerate_bound,
    verify_nonstationary_bound,
)


def test_bump_amplitude_profile():
    amp = BumpAmplitude(0.5)
    assert amp(0.0) == 1.0
    assert amp(np.array([0.3, 0.2])) == 1.0  # |x| inside the plateau
    assert amp(np.array([2.0, 0.0])) == 0.0
    with pytest.raises(ConfigError):
        BumpAmplitude(1.0)
    with pytest.raises(ConfigError):
        BumpAmplitude(-0.1)


def test_phase_floors():
    assert QuadraticPhase(np.eye(2)).hessian_floor == pytest.approx(1.0)
    assert QuadraticPhase([[1.0, 0.0], [0.0, -1.0]]).hessian_floor == pytest.approx(1.0)
    assert QuadraticPhase(np.eye(2)).gradient_floor == 0.0
    assert LinearPhase([3.0, 4.0]).gradient_floor == pytest.approx(5.0)
    ph = LinearSquarePhase(2.0, 1.0)
    assert ph.gradient_floor == pytest.approx(2.0)
    assert ph.hessian_floor == 0.0


def test_linear_phase_against_adaptive_quadrature():
    # oracles frozen from scipy.integrate.quad/dblquad at 1e-13/1e-11 tolerance
    prob1 = OscillatoryProblem(1, LinearPhase([1.0]), BumpAmplitude(0.5), (16.0,))
    res1 = evaluate_grid(prob1)[0]
    assert res1.value.real == pytest.approx(-0.024569468296124972, abs=5e-8)
    assert abs(res1.value.imag) < 1e-12
    assert res1.converged and res1.err_est <= res1.err_tol

    prob2 = OscillatoryProblem(2, LinearPhase([3.0, 4.0]), BumpAmplitude(0.5), (8.0,))
    res2 = evaluate_grid(prob2)[0]
    assert res2.value.real == pytest.approx(0.0006414248884842071, abs=5e-8)
    assert abs(res2.value.imag) < 1e-12


def test_stationary_phase_constant():
    # |I(lambda)| sqrt(lambda) -> sqrt(2 pi) for the 1d unit quadratic phase
    prob = OscillatoryProblem(1, QuadraticPhase(np.eye(1)), BumpAmplitude(0.5), (512.0,))
    res = evaluate_grid(prob)[0]
    assert abs(res.value) * math.sqrt(512.0) == pytest.approx(
        math.sqrt(2.0 * math.pi), abs=1e-6
    )


def test_nondegenerate_decay_exponents():
    p1 = OscillatoryProblem(1, QuadraticPhase(np.eye(1)))
    c1 = verify_nondegenerate_bound(p1)
    assert c1.passed and c1.quadrature_ok
    assert c1.fit.exponent == pytest.approx(-0.4916632150186207, abs=1e-9)  # frozen
    assert -0.55 <= c1.fit.exponent <= -0.45

    p2 = OscillatoryProblem(2, QuadraticPhase(np.eye(2)))
    c2 = verify_nondegenerate_bound(p2)
    assert c2.passed and -1.15 <= c2.fit.exponent <= -0.95

    sig0 = OscillatoryProblem(2, QuadraticPhase([[1.0, 0.0], [0.0, -1.0]]))
    c3 = verify_nondegenerate_bound(sig0)
    assert c3.passed and c3.fit.exponent <= -0.95


def test_nonstationary_decay_beats_any_order():
    prob = OscillatoryProblem(1, LinearPhase([1.0]))
    check = verify_nonstationary_bound(prob, order=4)
    assert check.passed
    assert check.fit.exponent <= -4.0
    # a phase with a critical point must fail the same bound
    control = OscillatoryProblem(1, QuadraticPhase([[1.0]]))
    bad = verify_nonstationary_bound(control, order=4)
    assert not bad.passed


def test_node_budget_enforced():
    prob = OscillatoryProblem(2, QuadraticPhase(np.eye(2)))
    with pytest.raises(NumericalError):
        evaluate_grid(prob, node_cap=10)


def test_distance_phase_hessian_flat():
    # parallel lines r apart: Hessian is [[1/r, -1/r], [-1/r, 1/r]]
    m = Euclidean(2)
    up = np.array([0.0, 1.0])
    ca = geodesic_sheet_chart(m, np.zeros(2), normal=up)
    cb = geodesic_sheet_chart(m, np.array([0.0, 4.0]), normal=up)
    comp = distance_phase_hessian(m, ca, cb, [0.0], [0.0])
    assert comp.r == pytest.approx(4.0, abs=1e-12)
    assert comp.formula[0, 0] == pytest.approx(0.25, abs=1e-12)
    assert comp.finite_difference[0, 0] == pytest.approx(0.25, abs=1e-5)
    assert comp.finite_difference[0, 1] == pytest.approx(-0.25, abs=1e-5)
    assert comp.discrepancy <= 1e-3
    assert comp.mixed_ok


def test_distance_phase_hessian_hyperbolic():
    # equidistant sheets: diagonal blocks coth(r), mixed entries -1/sinh(r)
    m = SpaceForm(2, -1.0)
    p = m.base_point()
    w = m.tangent_basis(p)[1]
    pa, va = m.exp_velocity(p, w, -1.0)
    pb, vb = m.exp_velocity(p, w, 1.0)
    ca = geodesic_sheet_chart(m, pa, normal=va)
    cb = geodesic_sheet_chart(m, pb, normal=vb)
    comp = distance_phase_hessian(m, ca, cb, [0.0], [0.0])
    r = 2.0
    assert comp.r == pytest.approx(r, abs=1e-10)
    coth = math.cosh(r) / math.sinh(r)
    assert coth == pytest.approx(1.0373147207275482, abs=1e-15)  # frozen
    assert comp.formula[0, 0] == pytest.approx(coth, abs=1e-9)
    assert comp.finite_difference[0, 0] == pytest.approx(coth, abs=1e-3)
    # |mixed| = 1/sinh(r); the sign depends on chart tangent orientations
    mixed = 1.0 / math.sinh(r)
    assert mixed == pytest.approx(0.27572056477178325, abs=1e-15)  # frozen
    assert abs(comp.finite_difference[0, 1]) == pytest.approx(mixed, abs=1e-3)
    assert mixed <= 2.0 / r  # the bound the mixed block must obey
    assert comp.mixed_ok and comp.discrepancy <= 1e-3


def test_distance_phase_hessian_needs_separation():
    m = Euclidean(2)
    up = np.array([0.0, 1.0])
    ca = geodesic_sheet_chart(m, np.zeros(2), normal=up)
    cb = geodesic_sheet_chart(m, np.array([0.0, 0.5]), normal=up)
    with pytest.raises(ValueError):
        distance_phase_hessian(m, ca, cb, [0.0], [0.0])
