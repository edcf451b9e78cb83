from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from willmore_sym.errors import DomainError, NonrationalAntiderivative, UnknownExample, ZeroLeadError
from willmore_sym.potentials import catenoid_data, enneper_data
from willmore_sym.ratfun import MoebiusSymmetry
from willmore_sym.surfaces import (
    SurfaceFamily,
    _first_derivs,
    conformality_residual,
    eval_lift,
    gauss_curvature,
    get_family,
    lightcone_residual,
    metric_analytic,
    metric_residual,
    minimality_residual,
    mu_invariance_residual,
    point_data,
    project,
    random_points,
    weierstrass_surface,
)

ANTIPODAL = MoebiusSymmetry.antipodal()
LIGHTCONE_FAMILIES = ["round_sphere", "veronese", "rp2_m2", "rp2_m3", "twistor_example"]
seeds = st.integers(0, 2 ** 32 - 1)


def lift_metric(fam, z, h=1e-3):
    """<Y_z, Y_zbar> of the lift in the Lorentz form, by central differences."""
    yx, yt = _first_derivs(fam.lift, z, np.full(z.shape, h) * np.maximum(1, np.abs(z)))
    lor = lambda a: -a[..., 0] ** 2 + np.sum(a[..., 1:] ** 2, axis=-1)
    return (lor(yx) + lor(yt)) / 4


# --- evaluation and projection -------------------------------------------------

def test_lift_values():
    for lam in (1.0, 1j, np.exp(0.4j)):
        assert np.allclose(eval_lift(get_family("rp2_m2", lam), 0j), [3, -3, 0, 0, 0, 0])
    s = 1 / math.sqrt(3)
    assert np.allclose(eval_lift(get_family("veronese"), 0j), [s / 2, -s / 2, 0, 0, 0, 0])
    assert np.allclose(eval_lift(get_family("rp2_m3"), 1 + 0j), [24, 4, 0, 0, 4 * math.sqrt(35), 0])


def test_projection():
    assert np.allclose(project([1.0, 1, 0, 0, 0, 0]), [1, 0, 0, 0, 0])
    assert np.allclose(project([2.0, 0, 2, 0, 0, 0]), [0, 1, 0, 0, 0])
    assert np.allclose(project(eval_lift(get_family("rp2_m2"), 0j)), [-1, 0, 0, 0, 0])
    with pytest.raises(ZeroLeadError):
        project([0.0, 1, 0])


def test_domain_and_unknown_family():
    with pytest.raises(UnknownExample):
        get_family("torus")
    blowup = SurfaceFamily("pole", lambda z: np.stack([1 / z, 1 / z], axis=-1))
    with np.errstate(divide="ignore", invalid="ignore"), pytest.raises(DomainError):
        eval_lift(blowup, 0j)


# --- metric ------------------------------------------------------------------

def test_metric_at_origin():
    z0 = np.array([0j])
    assert metric_analytic(get_family("rp2_m2"), z0)[0] == pytest.approx(30)
    assert metric_analytic(get_family("rp2_m3"), z0)[0] == pytest.approx(70)
    assert metric_analytic(get_family("twistor_example"), z0)[0] == pytest.approx(8)


@pytest.mark.parametrize("tag", LIGHTCONE_FAMILIES)
def test_metric_closed_form_matches_fd(tag):
    z = random_points(np.random.default_rng(11), 100)
    assert np.max(metric_residual(get_family(tag), z)) < 1e-6


def test_lift_metric_matches_closed_form():
    z = random_points(np.random.default_rng(5), 40, 0.1, 3)
    for tag in ("rp2_m2", "rp2_m3"):
        fam = get_family(tag)
        ref = metric_analytic(fam, z)
        assert np.max(np.abs(lift_metric(fam, z) - ref) / ref) < 1e-7


# --- symmetry ----------------------------------------------------------------

def test_mu_invariance_examples():
    z = np.array([0.7 + 0.2j])
    assert mu_invariance_residual(get_family("rp2_m2"), ANTIPODAL, z)[0] < 1e-12
    lam = np.exp(1j * math.pi / 3)
    assert mu_invariance_residual(get_family("veronese", lam), ANTIPODAL, z, form="dlambda")[0] < 1e-12
    assert mu_invariance_residual(get_family("rp2_m2"), ANTIPODAL, z, scale_power=2)[0] > 0.1


def test_round_sphere_has_no_scale():
    with pytest.raises(ValueError):
        mu_invariance_residual(get_family("round_sphere"), ANTIPODAL, np.array([0.5j]))


# --- minimality, conformality, curvature --------------------------------------

def test_minimality_examples():
    rng = np.random.default_rng(2)
    z = random_points(rng, 20)
    assert np.max(minimality_residual(get_family("rp2_m2"), z)) < 1e-6
    assert np.max(minimality_residual(get_family("twistor_example"), z)) < 1e-6
    assert np.max(minimality_residual(get_family("round_sphere"), z)) < 1e-8


@pytest.mark.parametrize("tag", LIGHTCONE_FAMILIES + ["lawson_klein"])
def test_conformality(tag):
    rng = np.random.default_rng(4)
    z = random_points(rng, 30) if tag != "lawson_klein" else rng.uniform(0.1, 3, 30) + 1j * rng.uniform(0.1, 3, 30)
    assert np.max(conformality_residual(get_family(tag), z)) < 1e-8


def test_non_conformal_map():
    def lift(z):
        z = np.asarray(z, dtype=complex)
        x = np.stack([z.real, 2 * z.imag], axis=-1)
        n2 = np.sum(x ** 2, axis=-1, keepdims=True)
        return np.concatenate([1 + n2, 1 - n2, 2 * x], axis=-1)

    fam = SurfaceFamily("stretched", lift, ambient_dim=2)
    assert conformality_residual(fam, np.array([0.3 + 0.1j]))[0] > 0.1


def test_weierstrass_examples():
    enn = weierstrass_surface(enneper_data(1))
    assert np.allclose(enn.euclidean(np.array([0j])), 0)
    assert np.allclose(enn.y(np.array([0j])), [1, 0, 0, 0])
    z = random_points(np.random.default_rng(8), 20, 0.3, 3)
    assert np.max(minimality_residual(enn, z)) < 1e-6
    with pytest.raises(NonrationalAntiderivative):
        weierstrass_surface(catenoid_data())
    cat = weierstrass_surface(catenoid_data(), allow_log=True)
    assert np.max(minimality_residual(cat, z)) < 1e-6


def test_gauss_curvature_examples():
    rng = np.random.default_rng(6)
    z = random_points(rng, 10)
    assert np.max(np.abs(gauss_curvature(get_family("round_sphere"), z) - 1)) < 1e-6
    assert gauss_curvature(get_family("veronese"), np.array([0j]))[0] == pytest.approx(1 / 3, abs=1e-5)
    k = gauss_curvature(get_family("rp2_m2"), np.array([0j]))[0]
    assert math.isfinite(k) and abs(k) < 10


def test_point_data_is_orthogonal():
    pd = point_data(get_family("rp2_m2"), 0.4 + 0.3j)
    assert abs(np.linalg.norm(pd.y) - 1) < 1e-12
    assert abs(pd.H_vec @ pd.y) < 1e-6
    assert abs(pd.H_vec @ pd.y_z) < 1e-6 * np.linalg.norm(pd.y_z)
    assert pd.conformality < 1e-8


# --- properties --------------------------------------------------------------

@pytest.mark.parametrize("tag", LIGHTCONE_FAMILIES)
@given(seed=seeds, theta=st.floats(0, 2 * math.pi))
def test_lightcone(tag, seed, theta):
    fam = get_family(tag, np.exp(1j * theta))
    z = random_points(np.random.default_rng(seed), 100)
    assert np.max(lightcone_residual(fam, z)) < 1e-10
    assert np.all(eval_lift(fam, z)[..., 0] > 0)
    assert np.allclose(np.linalg.norm(fam.y(z), axis=-1), 1, atol=1e-12)


@pytest.mark.parametrize("tag", ["veronese", "rp2_m2", "rp2_m3"])
@given(seed=seeds)
def test_mu_invariance(tag, seed):
    z = random_points(np.random.default_rng(seed), 100)
    assert np.max(mu_invariance_residual(get_family(tag), ANTIPODAL, z)) < 1e-10


@pytest.mark.parametrize("tag", ["rp2_m2", "rp2_m3"])
@given(seed=seeds)
def test_lift_metric_is_lambda_independent(tag, seed):
    z = random_points(np.random.default_rng(seed), 20, 0.1, 3)
    ms = np.array([lift_metric(get_family(tag, np.exp(1j * th)), z)
                   for th in np.linspace(0, 2 * math.pi, 8, endpoint=False)])
    assert np.max(np.abs(ms - ms[0]) / np.abs(ms[0])) < 1e-10


@given(st.floats(0, 20))
def test_rp2_m2_lift_metric_positive(r):
    assert metric_analytic(get_family("rp2_m2"), np.array([complex(r)]))[0] > 0
