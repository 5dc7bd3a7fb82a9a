"""Exterior-calculus operations: wedge, d, interior product, Lie derivative."""

import math

import numpy as np
import pytest

from bmkit import (DegreeError, dx, euclidean3, exterior_derivative,
                   interior_product, lie_derivative, lie_derivative_flow,
                   make_form, scalar_form, sin_wave,
                   spatial_exterior_derivative, t3_mode, time_derivative,
                   torus3, vector_field, wave, wedge)
from bmkit import euclidean_metric, hodge_star, metric_sharp, spacetime
from bmkit.scalars import constant, from_function

RNG = np.random.default_rng(42)
CHART = torus3()
PTS = RNG.uniform(0, 2 * math.pi, (40, 3))


def rand_form(chart, degree, n_terms=2, seed=0):
    rng = np.random.default_rng(seed)
    coeffs = {}
    from itertools import combinations
    idxs = list(combinations(range(chart.dim), degree))
    for idx in idxs[:n_terms]:
        freq = {a: int(rng.integers(1, 3)) for a in range(chart.dim)}
        coeffs[idx] = wave(freq, float(rng.uniform(0, 2 * math.pi)),
                           float(rng.uniform(0.5, 2.0)))
    return make_form(chart, degree, coeffs)


# -- wedge -------------------------------------------------------------------


def test_wedge_basis_products():
    d1, d2 = dx(CHART, 0), dx(CHART, 1)
    self_wedge = wedge(d1, d1)
    assert self_wedge.max_abs(PTS) == 0.0
    w = wedge(d1, d2)
    assert np.allclose(w.coefficient((0, 1))(PTS), 1.0)


def test_wedge_graded_antisymmetry():
    # a ^ b = (-1)^{pq} b ^ a on random 1- and 2-forms, exactly
    for pa, pb, seed in [(1, 1, 1), (1, 2, 2), (2, 1, 3), (0, 2, 4)]:
        a, b = rand_form(CHART, pa, seed=seed), rand_form(CHART, pb, seed=seed + 10)
        lhs = wedge(a, b).coefficient_table(PTS)
        rhs = wedge(b, a).coefficient_table(PTS)
        sign = (-1.0) ** (pa * pb)
        assert np.array_equal(lhs, sign * rhs)


def test_wedge_v_dv_volume_identity():
    # v ^ dv for the unit torus mode has volume coefficient -1 (= k * norm^2)
    v = t3_mode(1, 1.0)
    w = wedge(v.form, exterior_derivative(v.form))
    p = np.array([[0.0, 0.0, math.pi / 4]])
    assert np.allclose(w.coefficient((0, 1, 2))(p), -1.0, atol=1e-14)


def test_wedge_degree_overflow():
    a = rand_form(CHART, 2)
    with pytest.raises(DegreeError):
        wedge(a, a)


def test_wedge_chart_mismatch():
    from bmkit import ChartMismatchError
    a = dx(CHART, 0)
    b = dx(euclidean3(), 0)
    with pytest.raises(ChartMismatchError):
        wedge(a, b)


# -- exterior derivative -------------------------------------------------------


def test_d_constant_is_zero():
    f = scalar_form(CHART, 3.7)
    assert exterior_derivative(f).max_abs(PTS) == 0.0


def test_d_torus_mode_matches_hand_computation():
    # d(cos x3 dx1 + sin x3 dx2) = sin x3 dx1^dx3 - cos x3 dx2^dx3
    v = t3_mode(1, 1.0).form
    dv = exterior_derivative(v)
    x3 = PTS[:, 2]
    assert np.allclose(dv.coefficient((0, 2))(PTS), np.sin(x3), atol=1e-14)
    assert np.allclose(dv.coefficient((1, 2))(PTS), -np.cos(x3), atol=1e-14)
    assert dv.coefficient((0, 1)).is_zero


def test_d_squared_analytic_and_fd():
    f = make_form(CHART, 0, {(): sin_wave({0: 1}) * wave({1: 1})})
    dd_analytic = exterior_derivative(exterior_derivative(f))
    assert dd_analytic.max_abs(PTS) < 1e-12
    dd_fd = exterior_derivative(exterior_derivative(f, mode="fd"), mode="fd")
    assert dd_fd.max_abs(PTS) < 1e-5


def test_fd_matches_analytic_partials():
    a = rand_form(CHART, 1, seed=7)
    d_an = exterior_derivative(a)
    d_fd = exterior_derivative(a, mode="fd")
    diff = (d_an - d_fd).max_abs(PTS)
    assert diff < 1e-10


def test_fd_one_sided_near_interval_boundary():
    # f(r) = r^3 on [0.1, 1]: derivative at the boundary needs one-sided stencils
    from bmkit import solid_torus
    chart = solid_torus(a=1.0, r_min=0.1)
    f = make_form(chart, 0, {(): from_function(lambda p: p[..., 0] ** 3)})
    df = exterior_derivative(f, mode="fd")
    edge = np.array([[0.1, 0.0, 0.0], [1.0, 0.0, 0.0], [0.55, 0.0, 0.0]])
    got = df.coefficient((0,))(edge)
    assert np.allclose(got, 3 * edge[:, 0] ** 2, atol=1e-9)


def test_fd_outside_domain_raises():
    from bmkit import DomainError, solid_torus
    chart = solid_torus(a=1.0, r_min=0.1)
    f = make_form(chart, 0, {(): from_function(lambda p: p[..., 0] ** 2)})
    df = exterior_derivative(f, mode="fd")
    with pytest.raises(DomainError):
        df.coefficient((0,))(np.array([[0.01, 0.0, 0.0]]))


def test_spacetime_derivative_split():
    # d = d_spatial + dx0 ^ d/dx0, checked coefficientwise on a spacetime form
    c4 = spacetime(CHART)
    a = make_form(c4, 1, {(1,): wave({0: 1}) * sin_wave({3: 2})})
    full = exterior_derivative(a)
    spatial = spatial_exterior_derivative(a)
    timed = time_derivative(a)
    pts4 = RNG.uniform(0, 2 * math.pi, (30, 4))
    for idx in full.indices:
        got = full.coefficient(idx)(pts4)
        if 0 in idx:
            rest = tuple(i for i in idx if i != 0)
            want = timed.coefficient(rest)(pts4)
        else:
            want = spatial.coefficient(idx)(pts4)
        assert np.allclose(got, want, atol=1e-14)


# -- interior product -----------------------------------------------------------


def test_interior_product_signs():
    d12 = wedge(dx(CHART, 0), dx(CHART, 1))
    e1 = vector_field(CHART, {0: constant(1.0)})
    e2 = vector_field(CHART, {1: constant(1.0)})
    assert np.allclose(interior_product(e1, d12).coefficient((1,))(PTS), 1.0)
    assert np.allclose(interior_product(e2, d12).coefficient((0,))(PTS), -1.0)


def test_interior_product_reeb_contraction():
    # i_Y (star3 v) = 0 for Y along the mode direction
    v = t3_mode(1, 1.0)
    g = euclidean_metric(CHART)
    omega = hodge_star(g, v.form)
    Y = metric_sharp(g, v.form)
    assert interior_product(Y, omega).max_abs(PTS) < 1e-15


def test_interior_product_nilpotent():
    for seed in range(3):
        a = rand_form(CHART, 2, seed=seed)
        X = vector_field(CHART, {0: wave({1: 1}), 1: sin_wave({2: 1}),
                                 2: constant(0.5)})
        twice = interior_product(X, interior_product(X, a))
        assert twice.max_abs(PTS) < 1e-15


def test_interior_product_degree_zero_rejected():
    X = vector_field(CHART, {0: constant(1.0)})
    with pytest.raises(DegreeError):
        interior_product(X, scalar_form(CHART, 1.0))


# -- Lie derivative ---------------------------------------------------------------


def test_lie_derivative_zero_field():
    X = vector_field(CHART, {})
    a = rand_form(CHART, 1, seed=5)
    assert lie_derivative(X, a).max_abs(PTS) == 0.0


def test_lie_derivative_reeb_invariance():
    # L_Y lambda = 0 and L_Y Omega = 0 for the torus-mode Reeb field
    v = t3_mode(1, 1.0)
    g = euclidean_metric(CHART)
    omega = hodge_star(g, v.form)
    Y = metric_sharp(g, v.form)  # norm^2 = 1, so Y is already the Reeb field
    assert lie_derivative(Y, v.form).max_abs(PTS) < 1e-6
    assert lie_derivative(Y, omega).max_abs(PTS) < 1e-6


def test_lie_derivative_matches_flow_pullback():
    v = t3_mode(2, 1.5)
    g = euclidean_metric(CHART)
    Y = metric_sharp(g, v.form)
    sample = PTS[:10]
    for a in (v.form, hodge_star(g, v.form)):
        cartan = lie_derivative(Y, a).coefficient_table(sample)
        flow = lie_derivative_flow(Y, a, sample, tau=1e-4)
        assert np.max(np.abs(cartan - flow)) < 1e-5


def test_lie_derivative_top_degree():
    # L_X (vol) = d(i_X vol); exercised on a 3-form over the 3-torus
    X = vector_field(CHART, {0: sin_wave({1: 1})})
    vol = make_form(CHART, 3, {(0, 1, 2): wave({0: 1})})
    out = lie_derivative(X, vol)
    assert out.degree == 3
    # independent value: L_X(f vol) = (X^a d_a f + f div X) vol, div X = 0 here
    want = sin_wave({1: 1})(PTS) * sin_wave({0: 1}, 0.0, -1.0)(PTS)
    got = out.coefficient((0, 1, 2))(PTS)
    assert np.allclose(got, want, atol=1e-12)
