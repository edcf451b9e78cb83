"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS/FAIL`` line (visible with
``-s``); the terminal summary repeats the verdicts at the end of the run.
"""
from __future__ import annotations

import math
import time

import numpy as np
import pytest

from willmore_sym.appendix8 import product_template, rp2_product_matrix, verify_rp2_equivalence
from willmore_sym.functionals import measure
from willmore_sym.lawson import (
    FORM_1_4,
    V0,
    build_L_lambda,
    frame_quantities,
    klein_monodromy,
    lawson_immersion,
    mixed_derivative,
    solve_vhat,
    tangent_vectors,
    unit_normal,
)
from willmore_sym.loopalg import LaurentMatrix, check_moebius_closure, eigen_data, lm_eval, unit_circle_samples
from willmore_sym.potentials import (
    NormalizedPotential,
    WeierstrassData,
    build_isotropic_potential,
    catenoid_data,
    check_isotropy,
    check_reflection_condition,
    check_reflection_parity,
    check_rp2_descent,
    check_weierstrass_reflection,
    enneper_data,
    lemma_family,
    parity_sign,
    perturbed_lemma_family,
    random_quadruple,
    reflection_spec_p,
    reflection_spec_phat,
    twistor_quadruple,
)
from willmore_sym.ratfun import I, MoebiusSymmetry, RationalMap
from willmore_sym.surfaces import get_family, metric_residual, minimality_residual, mu_invariance_residual, random_points

PI = math.pi
MINIMAL = {"veronese": 12, "twistor_example": 12, "rp2_m2": 20, "rp2_m3": 28}
Z = RationalMap.identity()


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def measured():
    out = {}
    for tag in MINIMAL:
        t0 = time.perf_counter()
        rep = measure(get_family(tag))
        out[tag] = (rep, time.perf_counter() - t0)
    return out


@pytest.mark.acceptance(1, "round-sphere calibration")
def test_criterion_1_calibration():
    t0 = time.perf_counter()
    rep = measure(get_family("round_sphere"))
    dt = time.perf_counter() - t0
    area_err = abs(rep.area - 4 * PI) / (4 * PI)
    gb_err = abs(rep.gauss_bonnet_total - 4 * PI) / (4 * PI)
    ok = area_err < 1e-6 and gb_err < 1e-6 and rep.converged and dt < 5
    verdict(1, ok, f"area rel err {area_err:.2e}, Gauss-Bonnet rel err {gb_err:.2e}, {dt:.2f} s")


@pytest.mark.acceptance(2, "areas 12pi, 12pi, 20pi, 28pi")
def test_criterion_2_areas(measured):
    parts, ok = [], True
    for tag, n in MINIMAL.items():
        rep, dt = measured[tag]
        err = abs(rep.area - n * PI) / (n * PI)
        ok &= err < 2e-3 and dt < 60 and rep.converged
        parts.append(f"{tag} {rep.area / PI:.6f}pi ({dt:.2f} s)")
    verdict(2, ok, "; ".join(parts))


@pytest.mark.acceptance(3, "Willmore identity and minimality")
def test_criterion_3_willmore_identity(measured):
    z = random_points(np.random.default_rng(2024), 200)
    parts, ok = [], True
    for tag in MINIMAL:
        rep, _ = measured[tag]
        gap = abs(rep.willmore_energy - (rep.area - 4 * PI)) / rep.area
        mres = float(np.max(minimality_residual(get_family(tag), z)))
        ok &= gap < 1e-2 and mres < 1e-5
        parts.append(f"{tag} gap {gap:.1e} minimality {mres:.1e}")
    verdict(3, ok, "; ".join(parts))


@pytest.mark.acceptance(4, "metric closed forms")
def test_criterion_4_metric_closed_forms():
    z = random_points(np.random.default_rng(4), 100)
    res = {tag: float(np.max(metric_residual(get_family(tag), z))) for tag in ("rp2_m2", "rp2_m3", "twistor_example")}
    verdict(4, max(res.values()) < 1e-6, ", ".join(f"{k} {v:.1e}" for k, v in res.items()))


@pytest.mark.acceptance(5, "RP2 descent of the lifts")
def test_criterion_5_mu_invariance():
    z = random_points(np.random.default_rng(5), 100)
    mu = MoebiusSymmetry.antipodal()
    res = {tag: float(np.max(mu_invariance_residual(get_family(tag), mu, z))) for tag in ("veronese", "rp2_m2", "rp2_m3")}
    powers = {tag: get_family(tag).mu_scale_power for tag in res}
    ok = max(res.values()) < 1e-10 and powers == {"veronese": 2, "rp2_m2": 8, "rp2_m3": 14}
    verdict(5, ok, ", ".join(f"{k} (r^-{powers[k]}) {v:.1e}" for k, v in res.items()))


@pytest.mark.acceptance(6, "exact symbolic suite")
def test_criterion_6_exact_suite():
    t0 = time.perf_counter()
    good = all(check_isotropy(lemma_family(m)) and check_rp2_descent(lemma_family(m)).passes for m in range(1, 7))
    bad = perturbed_lemma_family(2)
    perturbed_fails = not (check_isotropy(bad) and check_rp2_descent(bad).passes)
    dt = time.perf_counter() - t0
    verdict(6, good and perturbed_fails and dt < 10,
            f"m=1..6 pass {good}, perturbed fails {perturbed_fails}, {dt:.2f} s")


@pytest.mark.acceptance(7, "appendix product matrix and equivalence")
def test_criterion_7_appendix():
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    template_ok = all(rp2_product_matrix(q, check=False) == product_template(q)
                      for q in (random_quadruple(rng, rational=True) for _ in range(20)))
    lemma_ok = all(verify_rp2_equivalence(lemma_family(m)) for m in range(1, 5))
    randoms = []
    while len(randoms) < 20:
        q = random_quadruple(rng)
        if not check_isotropy(q):
            randoms.append(q)
    random_ok = all(verify_rp2_equivalence(q) for q in randoms)
    failing_direction = not any(check_rp2_descent(q).passes for q in randoms)
    dt = time.perf_counter() - t0
    ok = template_ok and lemma_ok and random_ok and failing_direction and dt < 60
    verdict(7, ok, f"template {template_ok}, lemma {lemma_ok}, random agree {random_ok} "
                   f"(all failing {failing_direction}), {dt:.2f} s")


@pytest.mark.acceptance(8, "Lawson Klein bottle")
def test_criterion_8_lawson():
    fr = frame_quantities(0j)
    rng = np.random.default_rng(8)
    metric_res = yuv_res = sym_res = 0.0
    for _ in range(50):
        u, v = rng.uniform(-PI, PI), rng.uniform(-V0, V0)
        yu, yv = tangent_vectors(u, v)
        target = 1 + 3 * math.cos(solve_vhat(v)) ** 2
        metric_res = max(metric_res, abs(yu @ yu - target), abs(yv @ yv - target))
        yuv_res = max(yuv_res, abs(mixed_derivative(u, v) @ unit_normal(u, v) - 2))
        sym_res = max(sym_res, float(np.max(np.abs(lawson_immersion(u + PI, -v) - lawson_immersion(u, v)))))
    l1 = np.array(eigen_data(lm_eval(build_L_lambda(), 1.0)))
    mono = np.array(klein_monodromy(1.0)["eigenvalues"])
    checks = {
        "omega0": fr.omega == math.log(2),
        "s0": abs(fr.s - 1.5) < 1e-8,
        "k0": abs(fr.k + 0.5j) < 1e-8,
        "metric": metric_res < 1e-10,
        "yuv_n": yuv_res < 1e-8,
        "L1": np.max(np.abs(l1 - np.array([-2j, -1j, 0, 1j, 2j]))) < 1e-10,
        "monodromy": np.max(np.abs(mono - np.array([-1, -1, 1, 1, 1]))) < 1e-10,
        "v0": abs(V0 - 2.15652) < 1e-5,
        "symmetry": sym_res < 1e-12,
    }
    verdict(8, all(checks.values()), ", ".join(f"{k} {'ok' if v else 'bad'}" for k, v in checks.items()))


@pytest.mark.acceptance(9, "reflection and parity")
def test_criterion_9_reflection_parity():
    b1 = build_isotropic_potential(twistor_quadruple())
    twistor_ok = check_reflection_condition(b1, reflection_spec_phat(2)) and not check_reflection_condition(
        b1, reflection_spec_p(2))
    weier_ok = True
    for w in (enneper_data(1), catenoid_data()):
        weier_ok &= check_weierstrass_reflection(w)
        weier_ok &= not check_weierstrass_reflection(WeierstrassData(w.h + I * Z ** 2, w.g))
    base = Z ** 2 + 1
    positive = NormalizedPotential(tuple(tuple(base if parity_sign(i, j) == 1 else I * base for j in (1, 2, 3, 4))
                                         for i in (1, 2, 3, 4)))
    negative = NormalizedPotential(tuple(tuple(I * base if parity_sign(i, j) == 1 else base for j in (1, 2, 3, 4))
                                         for i in (1, 2, 3, 4)))
    neg_table = check_reflection_parity(negative)
    parity_ok = check_reflection_parity(positive).passes and not any(any(row) for row in neg_table.table)
    verdict(9, twistor_ok and weier_ok and parity_ok,
            f"twistor {twistor_ok}, Weierstrass {weier_ok}, parity {parity_ok}")


@pytest.mark.acceptance(10, "equivariant Moebius closure")
def test_criterion_10_moebius():
    t0 = time.perf_counter()
    l = build_L_lambda()
    samples = unit_circle_samples(16)
    rep = check_moebius_closure(l, PI, np.eye(5), FORM_1_4, samples)
    chi1 = np.sort_complex(np.array([complex(a, b) for a, b in rep.extra["chi1_eigenvalues"]]))
    eig_ok = np.max(np.abs(chi1 - np.array([-1, -1, 1, 1, 1]))) < 1e-10
    bumped = dict(l.terms)
    bumped[0] = bumped[0].copy()
    bumped[0][0, 1] += 0.1
    bad = check_moebius_closure(LaurentMatrix(bumped, 5), PI, np.eye(5), FORM_1_4, samples)
    dt = time.perf_counter() - t0
    ok = rep.ok and eig_ok and not bad.ok and len(samples) >= 16 and dt < 5
    verdict(10, ok, f"closure {rep.ok}, chi(1) spectrum {eig_ok}, perturbed rejected {not bad.ok}, {dt:.2f} s")
