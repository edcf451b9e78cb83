from __future__ import annotations

import math

import numpy as np
import pytest

from willmore_sym.errors import NonConvergence
from willmore_sym.functionals import area, integrate_chart, integrate_disk, measure
from willmore_sym.surfaces import SurfaceFamily, get_family

PI = math.pi


@pytest.fixture(scope="module")
def reports():
    return {tag: measure(get_family(tag)) for tag in ("round_sphere", "veronese", "rp2_m2", "rp2_m3", "twistor_example")}


def test_unit_density_on_disk():
    res = integrate_disk(lambda z: np.ones((len(z), 1)))
    assert res.converged
    assert res.values[0] == pytest.approx(PI, rel=1e-12)


def test_round_sphere_calibration(reports):
    rep = reports["round_sphere"]
    assert abs(rep.area - 4 * PI) < 1e-6
    assert abs(rep.gauss_bonnet_total - 4 * PI) < 1e-6
    assert abs(rep.willmore_energy) < 1e-6
    assert rep.converged


@pytest.mark.parametrize("tag, n_area", [("veronese", 12), ("rp2_m2", 20), ("rp2_m3", 28), ("twistor_example", 12)])
def test_areas_and_identity(reports, tag, n_area):
    rep = reports[tag]
    assert rep.converged
    assert rep.area == pytest.approx(n_area * PI, rel=2e-3)
    assert abs(rep.willmore_energy - (rep.area - 4 * PI)) / rep.area < 1e-2
    assert rep.willmore_energy >= 0
    assert rep.area_half == pytest.approx(rep.area / 2)


@pytest.mark.parametrize("tag", ["veronese", "rp2_m2"])
def test_gauss_bonnet(reports, tag):
    assert abs(reports[tag].gauss_bonnet_total - 4 * PI) < 1e-3


def test_report_dict_has_pi_multiples(reports):
    d = reports["rp2_m2"].to_dict()
    assert d["area"]["over_pi"] == pytest.approx(20, rel=2e-3)
    assert set(d) >= {"cells_used", "converged", "max_minimality_residual", "max_conformality_residual"}


@pytest.mark.parametrize("tag", ["veronese", "rp2_m2", "twistor_example"])
def test_chart_independence(tag):
    fam = get_family(tag)
    swapped = SurfaceFamily(tag, lambda z: fam.lift(1.0 / z), fam.lam, fam.ambient_dim)
    a, b = area(fam), area(swapped)
    assert abs(a - b) / a < 1e-8


@pytest.mark.parametrize("tag", ["veronese", "rp2_m2", "rp2_m3", "twistor_example"])
def test_area_is_lambda_independent(tag):
    vals = [area(get_family(tag, np.exp(1j * th))) for th in np.linspace(0, 2 * PI, 8, endpoint=False)]
    assert (max(vals) - min(vals)) / vals[0] < 1e-6


def test_nonconvergence():
    fam = get_family("rp2_m2")
    assert not measure(fam, max_depth=1).converged
    with pytest.raises(NonConvergence):
        measure(fam, max_depth=1, strict=True)
    with pytest.raises(NonConvergence):
        integrate_chart(lambda z: (1 / np.abs(z - 0.3) ** 1.9)[:, None], max_depth=3, strict=True)


def test_lawson_is_not_a_sphere():
    with pytest.raises(ValueError):
        measure(get_family("lawson_klein"))
