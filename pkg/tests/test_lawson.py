from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from willmore_sym.lawson import (
    FORM_1_4,
    V0,
    abelian_residual,
    build_L_lambda,
    c0_convention_report,
    frame_quantities,
    klein_monodromy,
    lawson_immersion,
    lawson_report,
    maurer_cartan_residual,
    mixed_derivative,
    rotation,
    solve_vhat,
    tangent_vectors,
    unit_normal,
    v_of_vhat,
)
from willmore_sym.loopalg import check_reality, eigen_data, lm_eval, unit_circle_samples

us = st.floats(-math.pi, math.pi)
vs = st.floats(-V0, V0)


def v_oracle(vh: float) -> float:
    return float(mpmath.quad(lambda w: 1 / mpmath.sqrt(1 + 3 * mpmath.cos(w) ** 2), [0, vh]))


# --- coordinate change ----------------------------------------------------------

def test_v0():
    assert V0 == pytest.approx(v_oracle(math.pi), abs=1e-12)
    assert V0 == pytest.approx(2.15652, abs=1e-5)


def test_solve_vhat_examples():
    assert solve_vhat(0.0) == 0.0
    assert solve_vhat(V0) == pytest.approx(math.pi, abs=1e-12)
    assert solve_vhat(-V0) == pytest.approx(-math.pi, abs=1e-12)


@given(st.floats(-3 * math.pi, 3 * math.pi))
def test_v_of_vhat_matches_quadrature(vh):
    assert v_of_vhat(vh) == pytest.approx(v_oracle(vh), abs=1e-11)


@given(st.floats(-8, 8))
def test_solve_vhat_inverts(v):
    vh = solve_vhat(v)
    assert v_of_vhat(vh) == pytest.approx(v, abs=1e-12)
    assert solve_vhat(-v) == pytest.approx(-vh, abs=1e-12)
    assert solve_vhat(v + 2 * V0) == pytest.approx(vh + 2 * math.pi, abs=1e-10)


# --- immersion ---------------------------------------------------------------------

def test_immersion_origin():
    assert np.allclose(lawson_immersion(0.0, 0.0), [1, 0, 0, 0])


@given(us, vs)
def test_symmetry_and_periods(u, v):
    y = lawson_immersion(u, v)
    assert np.max(np.abs(lawson_immersion(u + math.pi, -v) - y)) < 1e-12
    assert np.max(np.abs(lawson_immersion(u + 2 * math.pi, v) - y)) < 1e-12
    assert np.max(np.abs(lawson_immersion(u, v + 2 * V0) - y)) < 1e-12


@given(us, vs, st.floats(-math.pi, math.pi))
def test_equivariance(u, v, t):
    assert np.max(np.abs(lawson_immersion(u + t, v) - rotation(t) @ lawson_immersion(u, v))) < 1e-12


def _fd(fn, x, h=1e-4):
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


@given(us, st.floats(-2, 2))
def test_closed_form_derivatives_match_fd(u, v):
    yu, yv = tangent_vectors(u, v)
    assert np.max(np.abs(yu - _fd(lambda a: lawson_immersion(a, v), u))) < 1e-8
    assert np.max(np.abs(yv - _fd(lambda b: lawson_immersion(u, b), v))) < 1e-8
    yuv = _fd(lambda b: tangent_vectors(u, b)[0], v)
    assert np.max(np.abs(mixed_derivative(u, v) - yuv)) < 1e-7


@given(us, vs)
def test_conformal_metric_and_normal(u, v):
    yu, yv = tangent_vectors(u, v)
    e2w = math.exp(2 * frame_quantities(complex(u, v)).omega)
    assert abs(yu @ yu - e2w) < 1e-10 and abs(yv @ yv - e2w) < 1e-10 and abs(yu @ yv) < 1e-10
    n, y = unit_normal(u, v), lawson_immersion(u, v)
    assert abs(n @ n - 1) < 1e-12
    assert max(abs(n @ y), abs(n @ yu), abs(n @ yv)) < 1e-12
    assert abs(mixed_derivative(u, v) @ n - 2) < 1e-10


@given(us, st.floats(-2, 2))
def test_minimal_in_sphere(u, v):
    h = 1e-3
    f = lambda a, b: lawson_immersion(a, b)
    lap = (-60 * f(u, v) + 16 * (f(u + h, v) + f(u - h, v) + f(u, v + h) + f(u, v - h))
           - (f(u + 2 * h, v) + f(u - 2 * h, v) + f(u, v + 2 * h) + f(u, v - 2 * h))) / (12 * h * h)
    yzzb = lap / 4
    yu, yv = tangent_vectors(u, v)
    assert max(abs(yzzb @ yu), abs(yzzb @ yv)) < 1e-8
    e2w = yu @ yu
    assert abs(yzzb @ f(u, v) + e2w / 2) < 1e-8


# --- frame -------------------------------------------------------------------------

def test_frame_at_origin():
    fr = frame_quantities(0j)
    assert fr.omega == math.log(2)
    assert fr.s == pytest.approx(1.5, abs=1e-8)
    assert fr.k == pytest.approx(-0.5j, abs=1e-14)
    assert abs(fr.k_zbar) < 1e-14


# --- generator and monodromy ------------------------------------------------------

def test_L_lambda():
    l = build_L_lambda()
    ev = eigen_data(lm_eval(l, 1.0))
    assert np.allclose(ev, [-2j, -1j, 0, 1j, 2j], atol=1e-10)
    assert np.allclose(l.terms[1], np.conj(l.terms[-1]))
    assert check_reality(l).ok
    assert maurer_cartan_residual(l) < 1e-14
    m = lm_eval(l, 1j)
    assert m[2, 4] == pytest.approx(0.5j * (1 / 1j) - 0.5j * 1j)


def test_monodromy():
    mono = klein_monodromy(1.0)
    assert np.allclose(mono["matrix"], np.diag([1.0, 1, 1, -1, -1]), atol=1e-10)
    assert mono["orthogonality_residual"] < 1e-10
    assert klein_monodromy(-1.0)["orthogonality_residual"] < 1e-10
    for lam in unit_circle_samples(8):
        rep = klein_monodromy(lam)
        assert abs(rep["det"] - 1) < 1e-10
        assert rep["reality_residual"] < 1e-10
        assert abelian_residual(lam) < 1e-10
    assert max(c0_convention_report().values()) < 1e-10


def test_report_is_deterministic_and_within_thresholds():
    a, b = lawson_report(20, seed=3), lawson_report(20, seed=3)
    assert a == b
    assert a["omega0_is_ln2"]
    assert a["metric_residual"] < 1e-10 and a["yuv_n_residual"] < 1e-10
    assert a["mu_symmetry_residual"] < 1e-12 and a["period_residual"] < 1e-12
    assert FORM_1_4.matrix.shape == (5, 5)
