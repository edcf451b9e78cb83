"""Closed-form surface families and pointwise differential geometry.

Every family is evaluated through a vectorized lift ``Y(z)`` into the
forward light cone of R^{1,N}; the surface itself is ``y = Y[1:] / Y[0]``
on the unit sphere.  Derivatives are central finite differences in the
real coordinates ``z = x + i t``:

    <y_z, y_zbar> = (|y_x|^2 + |y_t|^2) / 4,   y_{z zbar} = Laplacian(y) / 4.

The area density is ``e2u = 2 <y_z, y_zbar>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import lawson as _lawson
from .errors import BranchPointError, DomainError, NonrationalAntiderivative, ZeroLeadError
from .potentials import WeierstrassData
from .ratfun import MoebiusSymmetry, RationalMap, Surd, _padd, _pdivmod, _pderiv, _pgcd, _pmul, _pneg, _trim

SQRT3 = math.sqrt(3.0)
SQRT15 = math.sqrt(15.0)
SQRT35 = math.sqrt(35.0)

FD_STEP = 1e-4
LAP_STEP = 1e-3
CURV_STEP = 1e-2


@dataclass(frozen=True)
class SurfaceFamily:
    """A named family with vectorized lift ``lift(z) -> (..., N+1)`` array."""

    tag: str
    lift: Callable
    lam: complex = 1.0
    ambient_dim: int = 4  # dimension of the target sphere
    mu_scale_power: int | None = None  # mu^*Y = r^{-power} Y under z -> -1/conj(z)
    metric_native: Callable | None = None
    metric_convention: str = "projected"  # or "lift"
    euclidean: Callable | None = None  # minimal model in R^n when y itself is not minimal
    domain: str = "sphere"
    params: dict = field(default_factory=dict)

    def y(self, z):
        return project(self.lift(z))


# ---------------------------------------------------------------------------
# closed-form lifts
# ---------------------------------------------------------------------------

def _stack(*comps):
    return np.stack([np.real(np.asarray(c, dtype=complex)) for c in comps], axis=-1)


def _round_lift(z, lam=1.0):
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    zb = np.conj(z)
    zero = np.zeros_like(r2)
    return _stack(1 + r2, r2 - 1, z + zb, -1j * (z - zb), zero, zero)


def _veronese_lift(z, lam=1.0):
    z = np.asarray(z, dtype=complex)
    zb, r2 = np.conj(z), np.abs(z) ** 2
    li = 1.0 / lam
    p = 1 + r2
    return 0.5 * _stack(
        p / SQRT3,
        (2 * r2 - (1 - r2) ** 2) / (SQRT3 * p),
        (z + zb) * (1 - r2) / p,
        -1j * (z - zb) * (1 - r2) / p,
        (li * z ** 2 + lam * zb ** 2) / p,
        -1j * (li * z ** 2 - lam * zb ** 2) / p,
    )


def _rp2_m2_lift(z, lam=1.0):
    z = np.asarray(z, dtype=complex)
    zb, r2 = np.conj(z), np.abs(z) ** 2
    li = 1.0 / lam
    return _stack(
        (3 * r2 ** 2 - 4 * r2 + 3) * (1 + r2) ** 2,
        -(3 * r2 ** 4 - 8 * r2 ** 3 + 8 * r2 ** 2 - 8 * r2 + 3),
        SQRT15 * (z + zb) * (1 - r2) * (1 + r2 ** 2),
        -1j * SQRT15 * (z - zb) * (1 - r2) * (1 + r2 ** 2),
        SQRT15 * (li * z ** 4 + lam * zb ** 4),
        1j * SQRT15 * (li * z ** 4 - lam * zb ** 4),
    )


def _rp2_m3_lift(z, lam=1.0):
    z = np.asarray(z, dtype=complex)
    zb, r2 = np.conj(z), np.abs(z) ** 2
    li = 1.0 / lam
    r12 = r2 ** 6
    return _stack(
        5 + 7 * r2 + 7 * r12 + 5 * r12 * r2,
        -5 + 7 * r2 + 7 * r12 - 5 * r12 * r2,
        SQRT35 * (z + zb) * (1 - r12),
        -1j * SQRT35 * (z - zb) * (1 - r12),
        SQRT35 * (li * z ** 6 + lam * zb ** 6) * (1 + r2),
        1j * SQRT35 * (li * z ** 6 - lam * zb ** 6) * (1 + r2),
    )


def _twistor_lift(z, lam=1.0):
    z = np.asarray(z, dtype=complex)
    zb, r2 = np.conj(z), np.abs(z) ** 2
    li = 1.0 / lam
    q = r2 ** 2 / 3 - 1
    t = 4 * r2 / 3 + 1
    return _stack(
        4 * r2 + 4 * r2 ** 3 / 9 + r2 ** 2 + 1,
        4 * r2 - 4 * r2 ** 3 / 9 + r2 ** 2 - 1,
        2 * (z + zb) * q,
        -2j * (z - zb) * q,
        (li * z ** 2 + lam * zb ** 2) * t,
        1j * (li * z ** 2 - lam * zb ** 2) * t,
    )


def _r2(z):
    return np.abs(np.asarray(z, dtype=complex)) ** 2


def _round_metric(z):
    return 2.0 / (1 + _r2(z)) ** 2


def _veronese_metric(z):
    return 6.0 / (1 + _r2(z)) ** 2


def _rp2_m2_metric(z):
    r2 = _r2(z)
    return 30 * (1 - 4 * r2 + 10 * r2 ** 2 - 4 * r2 ** 3 + r2 ** 4) * (1 + r2) ** 2


def _rp2_m3_metric(z):
    r2 = _r2(z)
    return 70 * (1 + 36 * r2 ** 5 + 70 * r2 ** 6 + 36 * r2 ** 7 + r2 ** 12)


def _twistor_metric(z):
    r2 = _r2(z)
    y0 = 4 * r2 + 4 * r2 ** 3 / 9 + r2 ** 2 + 1
    return 8 * (1 + r2 + 2 * r2 ** 2 + 16 * r2 ** 3 / 9 + r2 ** 4 / 9) / y0 ** 2


def _bind(fn, lam):
    return lambda z: fn(z, lam)


def round_sphere() -> SurfaceFamily:
    return SurfaceFamily("round_sphere", _bind(_round_lift, 1.0), 1.0, 4, None, _round_metric)


def veronese(lam: complex = 1.0) -> SurfaceFamily:
    return SurfaceFamily("veronese", _bind(_veronese_lift, lam), lam, 4, 2, _veronese_metric)


def rp2_m2(lam: complex = 1.0) -> SurfaceFamily:
    return SurfaceFamily("rp2_m2", _bind(_rp2_m2_lift, lam), lam, 4, 8, _rp2_m2_metric, "lift")


def rp2_m3(lam: complex = 1.0) -> SurfaceFamily:
    return SurfaceFamily("rp2_m3", _bind(_rp2_m3_lift, lam), lam, 4, 14, _rp2_m3_metric, "lift")


def twistor_example(lam: complex = 1.0) -> SurfaceFamily:
    return SurfaceFamily("twistor_example", _bind(_twistor_lift, lam), lam, 4, None, _twistor_metric)


def _lawson_lift(z):
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty((flat.size, 5))
    for i, w in enumerate(flat):
        out[i, 0] = 1.0
        out[i, 1:] = _lawson.lawson_immersion(w.real, w.imag)
    return out.reshape(z.shape + (5,))


def _lawson_metric(z):
    z = np.asarray(z, dtype=complex)
    vh = np.vectorize(_lawson.solve_vhat)(z.imag)
    # <y_z, y_zbar> = e^{2 omega} / 2
    return (1 + 3 * np.cos(vh) ** 2) / 2


def lawson_klein() -> SurfaceFamily:
    return SurfaceFamily("lawson_klein", _lawson_lift, 1.0, 3, None, _lawson_metric, domain="torus")


FAMILIES = {
    "round_sphere": round_sphere,
    "veronese": veronese,
    "rp2_m2": rp2_m2,
    "rp2_m3": rp2_m3,
    "twistor_example": twistor_example,
    "lawson_klein": lawson_klein,
}


def get_family(tag: str, lam: complex = 1.0) -> SurfaceFamily:
    from .errors import UnknownExample

    if tag == "twistor":
        tag = "twistor_example"
    if tag in ("enneper", "catenoid"):
        from .potentials import catenoid_data, enneper_data

        w = enneper_data(1) if tag == "enneper" else catenoid_data()
        return weierstrass_surface(w, lam, allow_log=(tag == "catenoid"))
    if tag not in FAMILIES:
        raise UnknownExample(tag)
    fn = FAMILIES[tag]
    if tag in ("round_sphere", "lawson_klein"):
        return fn()
    return fn(lam)


# ---------------------------------------------------------------------------
# basic operations
# ---------------------------------------------------------------------------

def eval_lift(fam: SurfaceFamily, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    y = fam.lift(z)
    if not np.all(np.isfinite(y)):
        raise DomainError(f"{fam.tag} is not defined at {z}")
    return y


def project(Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    y0 = Y[..., :1]
    if np.any(y0 == 0):
        raise ZeroLeadError("lift has vanishing leading coordinate")
    return Y[..., 1:] / y0


def lorentz_norm(Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    return -Y[..., 0] ** 2 + np.sum(Y[..., 1:] ** 2, axis=-1)


def lightcone_residual(fam: SurfaceFamily, z) -> np.ndarray:
    Y = eval_lift(fam, z)
    return np.abs(lorentz_norm(Y)) / Y[..., 0] ** 2


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def _first_derivs(fn, z, h):
    """4th-order central differences in x and t."""
    hh = h[..., None]
    yx = (-fn(z + 2 * h) + 8 * fn(z + h) - 8 * fn(z - h) + fn(z - 2 * h)) / (12 * hh)
    yt = (-fn(z + 2j * h) + 8 * fn(z + 1j * h) - 8 * fn(z - 1j * h) + fn(z - 2j * h)) / (12 * hh)
    return yx, yt


def _laplacian(fn, z, h, f0=None):
    """9-point (two 5-point 4th-order axes) Laplacian."""
    if f0 is None:
        f0 = fn(z)
    hh = (h ** 2)[..., None] if np.ndim(f0) > np.ndim(z) else h ** 2
    s = -60 * f0
    for e in (1, 1j):
        s = s + 16 * (fn(z + e * h) + fn(z - e * h)) - (fn(z + 2 * e * h) + fn(z - 2 * e * h))
    return s / (12 * hh)


def _steps(z, base):
    return base * np.maximum(1.0, np.abs(z))


def metric_fd(fam: SurfaceFamily, z, h_step: float | None = None) -> np.ndarray:
    """``e2u = 2 <y_z, y_zbar>`` by central differences on the projected surface."""
    z = np.asarray(z, dtype=complex)
    h = _steps(z, FD_STEP) if h_step is None else np.full(z.shape, h_step)
    yx, yt = _first_derivs(fam.y, z, h)
    return 0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1))


def metric_analytic(fam: SurfaceFamily, z) -> np.ndarray:
    """Closed-form metric in the family's native convention (see ``metric_convention``)."""
    if fam.metric_native is None:
        raise NotImplementedError(f"{fam.tag} has no closed-form metric")
    return fam.metric_native(np.asarray(z, dtype=complex))


def projected_metric_analytic(fam: SurfaceFamily, z) -> np.ndarray:
    """Closed-form ``<y_z, y_zbar>`` of the projected surface."""
    m = metric_analytic(fam, z)
    if fam.metric_convention == "lift":
        y0 = eval_lift(fam, z)[..., 0]
        m = m / y0 ** 2
    return m


def area_density_analytic(fam: SurfaceFamily, z) -> np.ndarray:
    return 2.0 * projected_metric_analytic(fam, z)


def metric_residual(fam: SurfaceFamily, z) -> np.ndarray:
    """Relative gap between ``metric_fd`` and the closed form after the convention change."""
    ref = area_density_analytic(fam, z)
    return np.abs(metric_fd(fam, z) - ref) / np.abs(ref)


def _local_scale(z):
    return 1.0 / (1.0 + np.abs(z) ** 2) ** 2


def _check_branch(e2u, z):
    if np.any(e2u < 1e-8 * _local_scale(z)):
        raise BranchPointError(f"degenerate conformal factor near {z}")


def conformality_residual(fam: SurfaceFamily, z) -> np.ndarray:
    """``|<y_z, y_z>| / e2u``."""
    z = np.asarray(z, dtype=complex)
    yx, yt = _first_derivs(fam.y, z, _steps(z, FD_STEP))
    hopf = 0.25 * np.abs(np.sum(yx ** 2, axis=-1) - np.sum(yt ** 2, axis=-1) - 2j * np.sum(yx * yt, axis=-1))
    e2u = 0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1))
    return hopf / e2u


def mean_curvature_vector(fn, z, e2u=None) -> np.ndarray:
    """``H = (2/e2u) y_{z zbar} + y`` for a conformal map into the unit sphere."""
    z = np.asarray(z, dtype=complex)
    y0 = fn(z)
    if e2u is None:
        yx, yt = _first_derivs(fn, z, _steps(z, FD_STEP))
        e2u = 0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1))
    yzzb = 0.25 * _laplacian(fn, z, _steps(z, LAP_STEP), y0)
    return 2.0 * yzzb / e2u[..., None] + y0


def _chart_fn(fam: SurfaceFamily, chart: str):
    if chart == "z":
        return fam.y
    return lambda w: fam.y(1.0 / w)


def minimality_residual(fam: SurfaceFamily, z) -> np.ndarray:
    """Norm of the mean curvature vector; for Weierstrass data, of the Euclidean model."""
    z = np.asarray(z, dtype=complex)
    if fam.euclidean is not None:
        fn = fam.euclidean
        yx, yt = _first_derivs(fn, z, _steps(z, FD_STEP))
        e2u = 0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1))
        _check_branch(e2u, z)
        lap = 0.25 * _laplacian(fn, z, _steps(z, LAP_STEP))
        return np.linalg.norm(2.0 * lap / e2u[..., None], axis=-1)
    # far from the origin work in the w = 1/z chart; the residual is chart independent
    big = np.abs(z) > 1
    out = np.empty(z.shape)
    for mask, chart, pts in ((~big, "z", z), (big, "w", 1.0 / np.where(big, z, 1.0))):
        if np.any(mask):
            fn = _chart_fn(fam, chart) if fam.domain == "sphere" else fam.y
            p = pts[mask] if fam.domain == "sphere" else z[mask]
            yx, yt = _first_derivs(fn, p, _steps(p, FD_STEP))
            e2u = 0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1))
            _check_branch(e2u, p)
            out[mask] = np.linalg.norm(mean_curvature_vector(fn, p, e2u), axis=-1)
    return out


def _log_density(fn, pts):
    yx, yt = _first_derivs(fn, pts, np.full(pts.shape, FD_STEP))
    return np.log(0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1)))


def gauss_curvature(fam: SurfaceFamily, z, density: Callable | None = None) -> np.ndarray:
    """``K = -(2/e2u) d_z d_zbar log(e2u)``.

    ``density`` may supply a closed-form area density; otherwise the FD
    metric is used.  Points with ``|z| > 1`` are handled in the ``1/z`` chart.
    """
    z = np.asarray(z, dtype=complex)
    big = np.abs(z) > 1 if fam.domain == "sphere" else np.zeros(z.shape, bool)
    out = np.empty(z.shape)
    for mask, chart in ((~big, "z"), (big, "w")):
        if not np.any(mask):
            continue
        p = z[mask] if chart == "z" else 1.0 / z[mask]
        out[mask] = _curvature_in_chart(fam, p, chart, density)
    return out


def _curvature_in_chart(fam, p, chart, density=None):
    if density is not None:
        if chart == "z":
            dens = density
        else:
            dens = lambda w: density(1.0 / w) / np.abs(w) ** 4
        logd = lambda q: np.log(dens(q))
    else:
        fn = _chart_fn(fam, chart)
        logd = lambda q: _log_density(fn, q)
    hs = np.full(p.shape, CURV_STEP)
    l0 = logd(p)
    lap = _laplacian(logd, p, hs, l0)
    return -0.5 * lap / np.exp(l0)


def mu_invariance_residual(fam: SurfaceFamily, mu: MoebiusSymmetry | None, z, lam: complex | None = None,
                           scale_power: int | None = None, form: str = "scale") -> np.ndarray:
    """Relative residual of ``Y(mu(z)) = c(z) Y(z)`` with ``c = r^{-power}``.

    ``form="dlambda"`` instead checks ``Y(mu(z), lam) = r^{-power} D_lam^2 Y(z, 1/lam)``.
    """
    mu = mu or MoebiusSymmetry.antipodal()
    z = np.asarray(z, dtype=complex)
    power = fam.mu_scale_power if scale_power is None else scale_power
    if power is None:
        raise ValueError(f"{fam.tag} has no documented scale under mu")
    lam = fam.lam if lam is None else lam
    fam_l = get_family(fam.tag, lam)
    c = np.abs(z) ** (-power)
    lhs = eval_lift(fam_l, mu(z))
    if form == "scale":
        rhs = c[..., None] * eval_lift(fam_l, z)
    elif form == "dlambda":
        fam_inv = get_family(fam.tag, 1.0 / lam)
        d2 = d_lambda(lam) @ d_lambda(lam)
        rhs = c[..., None] * (eval_lift(fam_inv, z) @ d2.T)
    else:
        raise ValueError(form)
    num = np.linalg.norm(lhs - rhs, axis=-1)
    return num / np.linalg.norm(rhs, axis=-1)


def d_lambda(lam: complex) -> np.ndarray:
    """``diag(I_4, Dt)`` with ``Dt = [[c, i s], [-i s, c]]``, ``c = (1/lam + lam)/2``, ``s = (1/lam - lam)/2``."""
    c = (1 / lam + lam) / 2
    s = (1 / lam - lam) / 2
    d = np.eye(6, dtype=complex)
    d[4:, 4:] = [[c, 1j * s], [-1j * s, c]]
    return d


# ---------------------------------------------------------------------------
# Weierstrass data
# ---------------------------------------------------------------------------

def _solve_exact(mat, rhs):
    """Gaussian elimination over exact scalars; returns None if singular/inconsistent."""
    n_rows, n_cols = len(mat), len(mat[0]) if mat else 0
    a = [list(row) + [b] for row, b in zip(mat, rhs)]
    piv_cols = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(not a[i][-1].is_zero() for i in range(r, n_rows)):
        return None
    sol = [Surd(0)] * n_cols
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][-1]
    return sol


def rational_antiderivative(f: RationalMap):
    """Split ``int f = R + int C/D2`` with ``D2`` square-free (Horowitz-Ostrogradsky).

    Returns ``(R, C/D2)``; the second part is zero iff ``f`` has a rational primitive.
    """
    if not f.exact:
        raise TypeError("exact rational map required")
    num, den = f.num, f.den
    poly_part, rem = _pdivmod(num, den) if num else ((), ())
    # integrate the polynomial part
    P = tuple([Surd(0)] + [c * Surd(1) / Surd(k + 1) for k, c in enumerate(poly_part)])
    if not rem:
        return RationalMap(_trim(P), (Surd(1),), f.var), RationalMap.zero(f.var)
    d1 = _pgcd(den, _pderiv(den))
    d2, _ = _pdivmod(den, d1)
    n1, n2 = len(d1) - 1, len(d2) - 1
    # rem = B' d2 - B (d2 d1' / d1) + C d1, deg B < n1, deg C < n2
    t, _ = _pdivmod(_pmul(d2, _pderiv(d1)), d1)
    cols = []
    for k in range(n1):
        bk = tuple([Surd(0)] * k + [Surd(1)])
        term = _pmul(_pderiv(bk), d2) if k else ()
        cols.append(_padd(term, _pneg(_pmul(bk, t))))
    for k in range(n2):
        ck = tuple([Surd(0)] * k + [Surd(1)])
        cols.append(_pmul(ck, d1))
    size = len(den) - 1
    mat = [[col[i] if i < len(col) else Surd(0) for col in cols] for i in range(size)]
    rhs = [rem[i] if i < len(rem) else Surd(0) for i in range(size)]
    sol = _solve_exact(mat, rhs)
    if sol is None:
        raise ArithmeticError("Horowitz-Ostrogradsky system is inconsistent")
    B = _trim(sol[:n1])
    C = _trim(sol[n1:])
    R = RationalMap(_trim(P), (Surd(1),), f.var) + (RationalMap(B, d1, f.var) if B else RationalMap.zero(f.var))
    log_part = RationalMap(C, d2, f.var) if C else RationalMap.zero(f.var)
    return R, log_part


@dataclass(frozen=True)
class _Primitive:
    rational: RationalMap
    poles: tuple  # log singularities a_k
    residues: tuple  # residues at a_k

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        val = np.asarray(self.rational(z) if self.rational.num else np.zeros_like(z), dtype=complex)
        for a, r in zip(self.poles, self.residues):
            val = val + r * np.log(z - a)
        return val


def _primitive(f: RationalMap, allow_log: bool) -> _Primitive:
    R, L = rational_antiderivative(f)
    if not L.num:
        return _Primitive(R, (), ())
    if not allow_log:
        raise NonrationalAntiderivative(f"integrand {f.to_text()} has nonzero residues")
    la = L.to_approx()
    roots = np.roots(list(reversed(la.den)))
    dq = np.polyder(np.array(list(reversed(la.den))))
    res = [complex(np.polyval(list(reversed(la.num)), a) / np.polyval(dq, a)) for a in roots]
    return _Primitive(R, tuple(complex(a) for a in roots), tuple(res))


def weierstrass_integrands(w: WeierstrassData):
    hz = w.h.derivative()
    one = RationalMap.const(Surd(1))
    g2 = w.g * w.g
    return (hz * (one - g2), hz * (one + g2) * Surd(0, -1), hz * w.g * Surd(2))


def weierstrass_surface(w: WeierstrassData, lam: complex = 1.0, base_point=None,
                        allow_log: bool = False) -> SurfaceFamily:
    """``x = Re(lam * int (h'(1-g^2), -i h'(1+g^2), 2 h' g))`` mapped to S^3.

    With ``allow_log`` the logarithmic part of a primitive uses the
    principal branch, i.e. the plane cut along rays from each log pole.
    """
    prims = tuple(_primitive(f, allow_log) for f in weierstrass_integrands(w))
    if base_point is None:
        base_point = 0.0
        for p in prims:
            if any(abs(a) < 1e-14 for a in p.poles) or _has_pole_at(p.rational, 0):
                base_point = 1.0
    b = complex(base_point)
    offset = np.array([complex(p(b)) for p in prims])

    def euclid(z):
        z = np.asarray(z, dtype=complex)
        vals = np.stack([p(z) for p in prims], axis=-1)
        return np.real(lam * (vals - offset))

    def lift(z):
        x = euclid(z)
        n2 = np.sum(x ** 2, axis=-1, keepdims=True)
        return np.concatenate([1 + n2, 1 - n2, 2 * x], axis=-1)

    return SurfaceFamily("weierstrass", lift, lam, 3, None, None, euclidean=euclid,
                         params={"h": w.h.to_text(), "g": w.g.to_text(), "base_point": b, "log_branch": allow_log})


def _has_pole_at(f: RationalMap, z0) -> bool:
    try:
        f(complex(z0))
        return False
    except ZeroDivisionError:
        return True


# ---------------------------------------------------------------------------
# point data
# ---------------------------------------------------------------------------

@dataclass
class SurfacePointData:
    z: complex
    y: np.ndarray
    y_z: np.ndarray
    y_zbar: np.ndarray
    e2u: float
    H_vec: np.ndarray
    K: float
    conformality: float


def point_data(fam: SurfaceFamily, z: complex) -> SurfacePointData:
    za = np.asarray([z], dtype=complex)
    yx, yt = _first_derivs(fam.y, za, _steps(za, FD_STEP))
    e2u = 0.5 * (np.sum(yx ** 2, axis=-1) + np.sum(yt ** 2, axis=-1))
    _check_branch(e2u, za)
    hv = mean_curvature_vector(fam.y, za, e2u)
    return SurfacePointData(
        z=complex(z),
        y=fam.y(za)[0],
        y_z=0.5 * (yx - 1j * yt)[0],
        y_zbar=0.5 * (yx + 1j * yt)[0],
        e2u=float(e2u[0]),
        H_vec=hv[0],
        K=float(gauss_curvature(fam, za)[0]),
        conformality=float(conformality_residual(fam, za)[0]),
    )


def random_points(rng, n: int, r_min: float = 0.1, r_max: float = 10.0) -> np.ndarray:
    """Log-uniform radius, uniform angle."""
    r = np.exp(rng.uniform(math.log(r_min), math.log(r_max), n))
    th = rng.uniform(0, 2 * math.pi, n)
    return r * np.exp(1j * th)
