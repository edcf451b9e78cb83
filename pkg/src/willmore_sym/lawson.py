"""Lawson's minimal Klein bottle in S^3: isothermal chart, frame data, potential, monodromy.

The immersion is

    y(u, v) = (cos 2u cos vh, sin 2u cos vh, cos u sin vh, sin u sin vh)

where ``vh = vhat(v)`` inverts ``v = int_0^vh dw / sqrt(1 + 3 cos^2 w)``.
Writing ``1 + 3cos^2 w = 4(1 - (3/4) sin^2 w)`` turns the defining integral
into ``F(vh | 3/4) / 2``, so ``vhat(v) = am(2v | 3/4)``.  The conformal
factor is ``e^omega = sqrt(1 + 3 cos^2 vh)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ellipj, ellipk, ellipkinc

from .loopalg import (
    LaurentMatrix,
    SignatureForm,
    check_orthogonality,
    check_reality,
    check_twisting,
    eigen_data,
    equivariant_monodromy,
    lm_eval,
    lm_exp,
)

PARAM_M = 0.75
V0 = float(ellipk(PARAM_M))
FORM_1_4 = SignatureForm(1, 4)


def v_of_vhat(vh: float) -> float:
    return 0.5 * float(ellipkinc(vh, PARAM_M))


def solve_vhat(v: float, tol: float = 1e-13) -> float:
    """Invert ``v(vhat)``; Jacobi amplitude start, Newton polish.

    ``dv/dvhat = e^{-omega}`` lies in ``[1/2, 1]``, so Newton converges
    from any nearby start.  A bisection bracket guards the iteration.
    """
    if v == 0:
        return 0.0
    x = float(ellipj(2.0 * v, PARAM_M)[3])
    lo, hi = v, 2.0 * v
    if lo > hi:
        lo, hi = hi, lo
    for _ in range(50):
        f = v_of_vhat(x) - v
        if abs(f) < tol * max(1.0, abs(v)):
            return x
        step = f * math.sqrt(1.0 + 3.0 * math.cos(x) ** 2)
        x_new = x - step
        if not lo <= x_new <= hi:
            # bisection fallback
            if f > 0:
                hi = x
            else:
                lo = x
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x


def exp_omega(vh: float) -> float:
    return math.sqrt(1.0 + 3.0 * math.cos(vh) ** 2)


def omega(vh: float) -> float:
    return math.log(exp_omega(vh))


def lawson_immersion(u: float, v: float, vh: float | None = None) -> np.ndarray:
    if vh is None:
        vh = solve_vhat(v)
    cv, sv = math.cos(vh), math.sin(vh)
    return np.array([math.cos(2 * u) * cv, math.sin(2 * u) * cv, math.cos(u) * sv, math.sin(u) * sv])


def tangent_vectors(u: float, v: float):
    """Closed-form ``(y_u, y_v)``."""
    vh = solve_vhat(v)
    cv, sv, e = math.cos(vh), math.sin(vh), exp_omega(vh)
    yu = np.array([-2 * cv * math.sin(2 * u), 2 * cv * math.cos(2 * u), -sv * math.sin(u), sv * math.cos(u)])
    yv = e * np.array([-sv * math.cos(2 * u), -sv * math.sin(2 * u), cv * math.cos(u), cv * math.sin(u)])
    return yu, yv


def mixed_derivative(u: float, v: float) -> np.ndarray:
    """Closed-form ``y_uv``."""
    vh = solve_vhat(v)
    cv, sv, e = math.cos(vh), math.sin(vh), exp_omega(vh)
    return e * np.array([2 * sv * math.sin(2 * u), -2 * sv * math.cos(2 * u), -cv * math.sin(u), cv * math.cos(u)])


def unit_normal(u: float, v: float) -> np.ndarray:
    vh = solve_vhat(v)
    cv, sv, e = math.cos(vh), math.sin(vh), exp_omega(vh)
    return np.array([sv * math.sin(2 * u), -sv * math.cos(2 * u), -2 * cv * math.sin(u), 2 * cv * math.cos(u)]) / e


def omega_z(v: float) -> complex:
    """``omega_z = (3i/2) cos vh sin vh e^{-omega}`` (omega depends on v only)."""
    vh = solve_vhat(v)
    return 1.5j * math.cos(vh) * math.sin(vh) / exp_omega(vh)


def omega_zz(v: float, h: float = 1e-3) -> complex:
    # d/dz = -(i/2) d/dv on functions of v; 4th-order central difference
    d = (-omega_z(v + 2 * h) + 8 * omega_z(v + h) - 8 * omega_z(v - h) + omega_z(v - 2 * h)) / (12 * h)
    return -0.5j * d


@dataclass(frozen=True)
class LawsonFrame:
    omega: float
    omega_z: complex
    omega_zz: complex
    s: complex
    k: complex
    k_zbar: complex
    Omega: complex
    n: np.ndarray


def frame_quantities(z: complex) -> LawsonFrame:
    u, v = z.real, z.imag
    vh = solve_vhat(v)
    om = omega(vh) if v != 0 else math.log(2.0)
    e = exp_omega(vh)
    wz = omega_z(v)
    wzz = omega_zz(v)
    s = 2 * (wzz - wz ** 2)
    k = -1j / e
    k_zbar = 1j / e * np.conj(wz)
    return LawsonFrame(om, wz, wzz, s, k, complex(k_zbar), -1j, unit_normal(u, v))


def rotation(t: float) -> np.ndarray:
    """Rotation by ``2t`` in the first coordinate plane and by ``t`` in the second."""
    c2, s2, c1, s1 = math.cos(2 * t), math.sin(2 * t), math.cos(t), math.sin(t)
    return np.array([[c2, -s2, 0, 0], [s2, c2, 0, 0], [0, 0, c1, -s1], [0, 0, s1, c1]])


def build_L_lambda() -> LaurentMatrix:
    """The 5x5 potential generator with lambda-degree in [-1, 1]."""
    r2 = math.sqrt(2.0)
    l0 = np.zeros((5, 5), dtype=complex)
    l0[0, 2] = l0[2, 0] = -r2 / 2
    l0[1, 2] = 3 * r2 / 2
    l0[2, 1] = -3 * r2 / 2
    lm = np.zeros((5, 5), dtype=complex)
    lm[2, 4], lm[3, 4], lm[4, 2], lm[4, 3] = 0.5j, -0.5, -0.5j, 0.5
    lp = np.zeros((5, 5), dtype=complex)
    lp[2, 4], lp[3, 4], lp[4, 2], lp[4, 3] = -0.5j, -0.5, 0.5j, 0.5
    return LaurentMatrix({-1: lm, 0: l0, 1: lp}, 5)


def maurer_cartan_residual(l: LaurentMatrix) -> float:
    """Max coefficient norm of ``A^t I + I A`` (membership in so(1,4))."""
    g = FORM_1_4.matrix
    return max(float(np.max(np.abs(a.T @ g + g @ a))) for a in l.terms.values())


def klein_monodromy(lam: complex = 1.0, c0: float = math.pi) -> dict:
    """``exp(c0 L(lam))`` with conjugation-invariant data."""
    l = build_L_lambda()
    chi = equivariant_monodromy(l, c0, np.eye(5), lam)
    g = FORM_1_4.matrix
    ev = eigen_data(chi, tol=1e-8)
    return {
        "matrix": chi,
        "eigenvalues": ev,
        "char_poly": np.poly(chi),
        "trace_powers": [complex(np.trace(np.linalg.matrix_power(chi, p))) for p in (1, 2, 3)],
        "orthogonality_residual": float(np.max(np.abs(chi.T @ g @ chi - g))),
        "reality_residual": float(np.max(np.abs(chi.imag))),
        "det": complex(np.linalg.det(chi)),
    }


def c0_convention_report() -> dict:
    """Both signs of the shift give ``exp(c0 L(1)) = diag(1,1,1,-1,-1)``."""
    target = np.diag([1.0, 1, 1, -1, -1])
    l1 = lm_eval(build_L_lambda(), 1.0)
    out = {}
    for c0 in (math.pi, -math.pi):
        out["+pi" if c0 > 0 else "-pi"] = float(np.max(np.abs(lm_exp(l1, c0) - target)))
    return out


def abelian_residual(lam: complex = 1.0) -> float:
    """Commutator norm of ``exp(pi L)`` and ``exp(2 pi L)``."""
    l = lm_eval(build_L_lambda(), lam)
    a, b = lm_exp(l, math.pi), lm_exp(l, 2 * math.pi)
    return float(np.max(np.abs(a @ b - b @ a)))


def lawson_report(n_points: int = 50, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    fr = frame_quantities(0j)
    metric_res = ynorm_res = normal_res = yuv_res = sym_res = period_res = 0.0
    for _ in range(n_points):
        u, v = rng.uniform(-math.pi, math.pi), rng.uniform(-V0, V0)
        yu, yv = tangent_vectors(u, v)
        vh = solve_vhat(v)
        target = 1 + 3 * math.cos(vh) ** 2
        metric_res = max(metric_res, abs(yu @ yu - target), abs(yv @ yv - target), abs(yu @ yv))
        y = lawson_immersion(u, v)
        n = unit_normal(u, v)
        ynorm_res = max(ynorm_res, abs(y @ y - 1))
        normal_res = max(normal_res, abs(n @ n - 1), abs(n @ y), abs(n @ yu), abs(n @ yv))
        yuv_res = max(yuv_res, abs(mixed_derivative(u, v) @ n - 2))
        sym_res = max(sym_res, float(np.max(np.abs(lawson_immersion(u + math.pi, -v) - y))))
        period_res = max(period_res, float(np.max(np.abs(lawson_immersion(u, v + 2 * V0) - y))),
                         float(np.max(np.abs(lawson_immersion(u + 2 * math.pi, v) - y))))
    l = build_L_lambda()
    mono = klein_monodromy(1.0)
    return {
        "v0": V0,
        "omega0": fr.omega,
        "omega0_is_ln2": fr.omega == math.log(2.0),
        "s0": [fr.s.real, fr.s.imag],
        "k0": [fr.k.real, fr.k.imag],
        "k_zbar0": [fr.k_zbar.real, fr.k_zbar.imag],
        "metric_residual": metric_res,
        "unit_norm_residual": ynorm_res,
        "normal_residual": normal_res,
        "yuv_n_residual": yuv_res,
        "mu_symmetry_residual": sym_res,
        "period_residual": period_res,
        "L1_eigenvalues": [[x.real, x.imag] for x in eigen_data(lm_eval(l, 1.0))],
        "L_reality_residual": check_reality(l).reality_residual,
        "L_twisting_residual": check_twisting(l, (4, 1)).twisting_residual,
        "L_maurer_cartan_residual": maurer_cartan_residual(l),
        "monodromy_eigenvalues": [[x.real, x.imag] for x in mono["eigenvalues"]],
        "monodromy_orthogonality_residual": mono["orthogonality_residual"],
        "monodromy_det": [mono["det"].real, mono["det"].imag],
        "c0_convention": c0_convention_report(),
        "abelian_residual": abelian_residual(),
    }
