"""Field-line integration, closure detection, surveys, Poincare sections."""

import csv
import math

import numpy as np
import pytest

from bmkit import (BmkitError, SampleGrid, abc_flow, beltrami_maxwell,
                   closed_orbit_survey, detect_closure, euclidean3,
                   euclidean_metric, field_line_generator, integrate,
                   metric_sharp, poincare_section, solid_torus, t3_mode,
                   torus3, vector_field, write_orbit_csv)
from bmkit.orbits import NONE_FOUND
from bmkit.scalars import constant, coordinate, sin_wave, wave

T3 = torus3()
R3 = euclidean3()


def const_field(chart, comps):
    return vector_field(chart, {i: constant(c) for i, c in comps.items()})


def circle_field():
    return vector_field(R3, {0: -coordinate(1), 1: coordinate(0)})


# -- integrate -------------------------------------------------------------------


def test_linear_field_exact():
    Y = const_field(R3, {0: 2.5})
    tr = integrate(Y, [0.0, 1.0, -1.0], 0.01, 400)
    # RK4 is exact on constant fields: x1(s) = e0 s
    assert np.allclose(tr.samples[:, 0], 2.5 * tr.s)
    assert np.allclose(tr.samples[:, 1], 1.0)
    assert tr.status == "completed"
    assert tr.speed_min == tr.speed_max == 2.5


def test_frozen_direction_torus_winding():
    # Z = cos(x3) d1 + sin(x3) d2 freezes x3; from x3 = 0 the orbit is the
    # x1 circle with winding (1, 0, 0) after s = 2pi
    Z = vector_field(T3, {0: wave({2: 1}), 1: sin_wave({2: 1})})
    n = int(round(2 * math.pi / 1e-3))
    tr = integrate(Z, [0.0, 0.0, 0.0], 1e-3, n)
    assert np.allclose(tr.samples[:, 2], 0.0)
    assert tr.winding().tolist() == [1, 0, 0]
    # frozen direction makes the flow linear, so RK4 is exact: x1 = s
    assert abs(tr.samples[-1, 0] - n * 1e-3) < 1e-12


def test_rk4_circle_drift():
    tr = integrate(circle_field(), [1.0, 0.0, 0.0], 1e-3,
                   int(round(2 * math.pi / 1e-3)))
    radii = np.linalg.norm(tr.samples[:, :2], axis=1)
    assert np.max(np.abs(radii - 1.0)) < 1e-8


def test_reversibility():
    v = t3_mode(1, 1.0)
    Y = metric_sharp(euclidean_metric(T3), v.form)
    fwd = integrate(Y, [0.2, 0.4, 1.0], 1e-3, 1000)
    back = integrate(-Y, fwd.samples[-1], 1e-3, 1000)
    assert np.linalg.norm(back.samples[-1] - fwd.samples[0]) < 1e-8


def test_step_halving_fourth_order():
    def final_error(h):
        n = int(round(2 * math.pi / h))
        tr = integrate(circle_field(), [1.0, 0.0, 0.0], h, n)
        s = n * h
        exact = np.array([math.cos(s), math.sin(s), 0.0])
        return np.linalg.norm(tr.samples[-1] - exact)

    ratio = final_error(2e-2) / final_error(1e-2)
    assert 12.0 <= ratio <= 20.0


def test_sample_spacing_bound():
    v = abc_flow(2, 1, 0.5)
    Y = metric_sharp(euclidean_metric(T3), v.form)
    tr = integrate(Y, [0.1, 0.2, 0.3], 5e-3, 500)
    gaps = np.linalg.norm(np.diff(tr.samples, axis=0), axis=1)
    assert np.max(gaps) <= 5e-3 * tr.speed_max * (1 + 1e-9)


def test_interval_axis_exit():
    chart = solid_torus(a=1.0, r_min=0.1)
    Y = const_field(chart, {0: 1.0})  # radially outward
    tr = integrate(Y, [0.5, 0.0, 0.0], 0.01, 200)
    assert tr.status == "exited_domain"
    assert tr.n_samples < 201
    assert np.all(tr.samples[:, 0] <= 1.0 + 1e-12)


def test_step_must_be_positive():
    with pytest.raises(BmkitError):
        integrate(const_field(R3, {0: 1.0}), [0, 0, 0], -0.1, 100)


# -- detect_closure -----------------------------------------------------------------


def closure_of(Y, seed, step, s_max, tol):
    tr = integrate(Y, seed, step, int(math.ceil(s_max / step)))
    return detect_closure(tr, tol, Y)


def test_torus_axis_aligned_closure():
    Y = const_field(T3, {0: 1.0})
    res = closure_of(Y, [0.0, 0.0, 0.0], 0.01, 10.0, 1e-5)
    assert res.closed
    assert abs(res.period_estimate - 2 * math.pi) < 1e-6
    assert res.winding == (1, 0, 0)


def test_torus_incommensurate_not_closed():
    Y = const_field(T3, {0: 1.0, 1: math.sqrt(2.0)})
    res = closure_of(Y, [0.0, 0.0, 0.0], 0.01, 200.0, 1e-4)
    assert not res.closed
    assert res.note == NONE_FOUND
    assert res.return_distance > 1e-4


def test_r3_constant_never_closed():
    Y = const_field(R3, {0: 1.0})
    res = closure_of(Y, [0.0, 0.0, 0.0], 0.01, 50.0, 1e-4)
    assert not res.closed
    assert res.note == NONE_FOUND


def test_closure_period_from_speed():
    # period scales inversely with speed: 2pi / 2.0
    Y = const_field(T3, {1: 2.0})
    res = closure_of(Y, [1.0, 2.0, 3.0], 0.005, 5.0, 1e-6)
    assert res.closed
    assert abs(res.period_estimate - math.pi) < 1e-6
    assert res.winding == (0, 1, 0)


def test_closure_needs_enough_samples():
    Y = const_field(T3, {0: 1.0})
    tr = integrate(Y, [0, 0, 0], 0.01, 50)
    with pytest.raises(BmkitError):
        detect_closure(tr, 1e-5)


def test_min_period_rejects_trivial_self_match():
    # an equilibrium (zero field) never reports closure
    Y = vector_field(T3, {})
    tr = integrate(Y, [1.0, 1.0, 1.0], 0.01, 200)
    res = detect_closure(tr, 1e-3, Y)
    assert not res.closed
    assert res.note == "stationary point"


# -- survey -------------------------------------------------------------------------


def test_survey_rational_and_irrational_slopes():
    M = beltrami_maxwell(t3_mode(1, 1.0))
    Z = field_line_generator(M, "e", 0.0)
    x3s = [0.0, 0.5 * math.pi, math.atan(0.5), math.atan(math.sqrt(2.0))]
    seeds = np.array([[0.0, 0.0, x3] for x3 in x3s])
    sv = closed_orbit_survey(Z, seeds, 0.01, 120.0, 1e-4)
    r_axis, r_axis2, r_slope, r_irrational = sv.results
    assert r_axis.closed and r_axis.winding == (1, 0, 0)
    assert abs(r_axis.period_estimate - 2 * math.pi) < 1e-4
    assert r_axis2.closed and r_axis2.winding == (0, 1, 0)
    assert r_slope.closed and r_slope.winding == (2, 1, 0)
    assert abs(r_slope.period_estimate - 2 * math.pi * math.sqrt(5.0)) < 1e-4
    assert not r_irrational.closed
    assert r_irrational.note == NONE_FOUND
    d = sv.to_json_dict()
    assert d["closed_count"] == 3
    assert d["results"][3]["note"] == NONE_FOUND


def test_survey_deduplicates_same_orbit():
    # seeds on one circle: all closed, one unique orbit
    Y = const_field(T3, {0: 1.0})
    seeds = np.array([[s, 1.0, 2.0] for s in (0.0, 1.0, 2.0, 3.0)])
    sv = closed_orbit_survey(Y, seeds, 0.01, 10.0, 1e-5)
    assert sv.n_closed == 4
    assert len(sv.unique_orbits) == 1
    # distinct parallel circles stay distinct
    seeds2 = np.array([[0.0, 1.0, 2.0], [0.0, 2.0, 2.0]])
    sv2 = closed_orbit_survey(Y, seeds2, 0.01, 10.0, 1e-5)
    assert len(sv2.unique_orbits) == 2


def test_survey_thread_determinism(monkeypatch):
    Y = const_field(T3, {0: 1.0, 1: 1.0})
    seeds = SampleGrid.regular(T3, (2, 2, 2)).points
    sv1 = closed_orbit_survey(Y, seeds, 0.01, 15.0, 1e-5, threads=1)
    monkeypatch.setenv("BMK_THREADS", "4")
    sv2 = closed_orbit_survey(Y, seeds, 0.01, 15.0, 1e-5)
    assert [r.closed for r in sv1.results] == [r.closed for r in sv2.results]
    p1 = [r.period_estimate for r in sv1.results if r.closed]
    p2 = [r.period_estimate for r in sv2.results if r.closed]
    assert np.allclose(p1, p2)


# -- Poincare sections -----------------------------------------------------------------


def test_poincare_constant_vertical_field():
    Y = const_field(T3, {2: 1.0})
    seed = np.array([[1.0, 2.0, 0.5]])
    out = poincare_section(Y, 2, 0.0, seed, s_max=14.0, step=0.01)[0]
    # crossings whenever x3 passes 0 (mod 2pi): s = 2pi - 0.5 + 2pi k
    want = [2 * math.pi - 0.5, 4 * math.pi - 0.5]
    assert len(out.s_values) == 2
    assert np.allclose(out.s_values, want, atol=1e-8)
    assert np.allclose(out.points[:, :2], [[1.0, 2.0], [1.0, 2.0]])
    assert np.all(out.directions == 1.0)
    assert np.all(out.transversality == 1.0)


def test_poincare_no_crossing_when_frozen():
    # the torus-mode flow freezes x3, so it never meets another x3 plane
    Z = vector_field(T3, {0: wave({2: 1}), 1: sin_wave({2: 1})})
    out = poincare_section(Z, 2, math.pi / 4, np.array([[0.0, 0.0, 0.0]]),
                           s_max=20.0, step=0.01)[0]
    assert len(out.s_values) == 0


def test_poincare_abc_level_set_and_golden_run():
    # A = B = 1, C = 0 flow conserves I = cos x3 + sin x1; every crossing of
    # x3 = pi/2 must satisfy sin(x1) = I(seed).  The first crossings of a
    # verified run are frozen as a regression fixture.
    v = abc_flow(1, 1, 0)
    Z = metric_sharp(euclidean_metric(T3), v.form)
    seed = np.array([0.3, 0.0, 1.3])
    out = poincare_section(Z, 2, math.pi / 2, seed[None, :],
                           s_max=40.0, step=5e-3)[0]
    i0 = math.cos(seed[2]) + math.sin(seed[0])
    levels = np.cos(out.points[:, 2]) + np.sin(out.points[:, 0])
    assert len(out.s_values) >= 4
    assert np.max(np.abs(levels - i0)) < 1e-10
    golden_s = [0.3015795772, 2.3560215552, 11.0537267669, 13.1081687455]
    golden_x1 = [0.5980343179, 2.5435583372, 0.5980343189, 2.5435583389]
    assert np.allclose(out.s_values[:4], golden_s, atol=1e-6)
    assert np.allclose(out.points[:4, 0], golden_x1, atol=1e-6)
    assert out.directions[:4].tolist() == [1.0, -1.0, 1.0, -1.0]


# -- CSV export --------------------------------------------------------------------------


def test_orbit_csv_round_trip(tmp_path):
    Y = const_field(T3, {0: 1.0})
    tr = integrate(Y, [0.0, 0.5, 1.0], 0.05, 200)
    path = tmp_path / "orbit.csv"
    write_orbit_csv(tr, str(path))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["s", "x1", "x2", "x3", "wind_x1", "wind_x2", "wind_x3"]
    assert len(rows) == 202
    last = rows[-1]
    assert float(last[0]) == pytest.approx(10.0)
    # x1 wrapped into [0, 2pi); 10.0 / 2pi means one completed wrap
    assert 0.0 <= float(last[1]) < 2 * math.pi
    assert last[4] == "1"
    raw = path.read_bytes()
    assert b"\r" not in raw
