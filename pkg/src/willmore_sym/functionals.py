"""Adaptive quadrature over the sphere and the global functionals built on it.

The sphere is covered by two closed unit disks: ``|z| <= 1`` in the
surface chart and ``|w| <= 1`` with ``z = 1/w``.  Each disk is integrated
in polar coordinates ``(rho, theta)`` with tensor 7-point Gauss-Legendre
cells that split dyadically until the parent and children agree.  The
origin sits on a cell edge, so no node lands on ``w = 0``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import NonConvergence
from .surfaces import (
    CURV_STEP,
    FD_STEP,
    LAP_STEP,
    SurfaceFamily,
    _first_derivs,
    _laplacian,
    area_density_analytic,
    conformality_residual,
)

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(7)


@dataclass
class QuadResult:
    values: np.ndarray
    cells: int
    converged: bool
    error: np.ndarray


def _cell_rule(a0, a1, b0, b1):
    """Nodes and weights on ``[a0,a1] x [b0,b1]`` for a batch of cells."""
    xa = 0.5 * (a1 - a0)[:, None] * GL_NODES[None, :] + 0.5 * (a1 + a0)[:, None]
    xb = 0.5 * (b1 - b0)[:, None] * GL_NODES[None, :] + 0.5 * (b1 + b0)[:, None]
    wa = 0.5 * (a1 - a0)[:, None] * GL_WEIGHTS[None, :]
    wb = 0.5 * (b1 - b0)[:, None] * GL_WEIGHTS[None, :]
    rho = np.repeat(xa[:, :, None], 7, axis=2)
    th = np.repeat(xb[:, None, :], 7, axis=1)
    w = wa[:, :, None] * wb[:, None, :]
    return rho, th, w


def _integrate_cells(f, cells):
    """Estimates of ``int f(rho e^{i theta}) rho`` for each cell; f returns (..., m)."""
    a0, a1, b0, b1 = cells.T
    rho, th, w = _cell_rule(a0, a1, b0, b1)
    z = rho * np.exp(1j * th)
    vals = f(z.ravel()).reshape(z.shape + (-1,))
    return np.einsum("cij,cijm->cm", w * rho, vals)


def _split(cells):
    a0, a1, b0, b1 = cells.T
    am, bm = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
    kids = np.stack([
        np.stack([a0, am, b0, bm], 1), np.stack([am, a1, b0, bm], 1),
        np.stack([a0, am, bm, b1], 1), np.stack([am, a1, bm, b1], 1),
    ], axis=1)
    return kids.reshape(-1, 4)


def integrate_disk(f: Callable, rel_tol: float = 1e-7, max_depth: int = 14, n_rho: int = 4,
                   n_theta: int = 8, scale_index: int = 0, abs_floor: float = 0.0) -> QuadResult:
    """Adaptive polar quadrature of a vector density over the closed unit disk.

    ``max_depth`` counts grid levels including the coarse one, so a single
    level never reports convergence.

    Tolerances are set relative to component ``scale_index`` of the coarse
    total, distributed over cells in proportion to their parameter area.
    """
    ra = np.linspace(0, 1, n_rho + 1)
    tb = np.linspace(0, 2 * math.pi, n_theta + 1)
    cells = np.array([[ra[i], ra[i + 1], tb[j], tb[j + 1]] for i in range(n_rho) for j in range(n_theta)])
    est = _integrate_cells(f, cells)
    total0 = np.sum(est, axis=0)
    scale = max(abs(total0[scale_index]), abs_floor, 1e-300)
    full_area = 2 * math.pi
    done = [np.zeros_like(total0)]
    errs = [np.zeros_like(total0)]
    n_cells = len(cells)
    converged = True
    depth = 1  # the coarse grid is the first level
    while len(cells):
        if depth >= max_depth:
            # no refinement left to compare against
            converged = False
            done.append(np.sum(est, axis=0))
            break
        kids = _split(cells)
        kid_est = _integrate_cells(f, kids).reshape(len(cells), 4, -1)
        refined = kid_est.sum(axis=1)
        diff = np.abs(refined - est)
        area = (cells[:, 1] - cells[:, 0]) * (cells[:, 3] - cells[:, 2])
        tol = rel_tol * scale * area / full_area
        ok = np.all(diff <= tol[:, None], axis=1)
        n_cells += 4 * len(cells)
        depth += 1
        done.append(np.sum(refined[ok], axis=0))
        errs.append(np.sum(diff[ok], axis=0))
        bad = ~ok
        cells = kids.reshape(len(cells), 4, 4)[bad].reshape(-1, 4)
        est = kid_est[bad].reshape(-1, kid_est.shape[-1])
    values = np.array([math.fsum(col) for col in np.array(done).T])
    error = np.array([math.fsum(col) for col in np.array(errs).T])
    return QuadResult(values, n_cells, converged, error)


def integrate_chart(f: Callable, f_w: Callable | None = None, rel_tol: float = 1e-7, max_depth: int = 14,
                    strict: bool = False, scale_index: int = 0) -> QuadResult:
    """Integrate a density over the sphere through both charts.

    ``f(z)`` is the density in the ``z`` chart.  ``f_w(w)``, if given, is
    the density in the ``w = 1/z`` chart; otherwise the pullback
    ``f(1/w) |w|^-4`` is used, which is correct for area-type densities.
    """
    if f_w is None:
        def f_w(w):
            return f(1.0 / w) / (np.abs(w) ** 4)[..., None]
    a = integrate_disk(f, rel_tol, max_depth, scale_index=scale_index)
    b = integrate_disk(f_w, rel_tol, max_depth, scale_index=scale_index,
                       abs_floor=abs(a.values[scale_index]))
    res = QuadResult(a.values + b.values, a.cells + b.cells, a.converged and b.converged, a.error + b.error)
    if strict and not res.converged:
        raise NonConvergence(f"quadrature did not converge within depth {max_depth}")
    return res


# ---------------------------------------------------------------------------
# pointwise densities
# ---------------------------------------------------------------------------

def _geometry_density(fn: Callable, z: np.ndarray, extra_density: Callable | None = None) -> np.ndarray:
    """Columns: e2u, (|H|^2 + 1 - K) e2u, K e2u, |H|, conformality.

    ``fn`` maps chart points to the unit sphere; all derivatives are finite
    differences in that chart.
    """
    z = np.asarray(z, dtype=complex)
    h1 = np.full(z.shape, FD_STEP)
    y0 = fn(z)
    yx, yt = _first_derivs(fn, z, h1)
    a, b = np.sum(yx ** 2, -1), np.sum(yt ** 2, -1)
    e2u = 0.5 * (a + b)
    conf = 0.25 * np.abs(a - b - 2j * np.sum(yx * yt, -1)) / e2u
    lap = _laplacian(fn, z, np.full(z.shape, LAP_STEP), y0)
    hvec = 0.5 * lap / e2u[:, None] + y0
    hn = np.linalg.norm(hvec, axis=-1)

    if extra_density is not None:
        logd = lambda q: np.log(extra_density(q))
    else:
        def logd(q):
            qx, qt = _first_derivs(fn, q, np.full(q.shape, FD_STEP))
            return np.log(0.5 * (np.sum(qx ** 2, -1) + np.sum(qt ** 2, -1)))
    l0 = np.log(e2u) if extra_density is None else logd(z)
    lapl = _laplacian(logd, z, np.full(z.shape, CURV_STEP), l0)
    K = -0.5 * lapl / np.exp(l0)
    return np.stack([e2u, (hn ** 2 + 1 - K) * e2u, K * e2u, hn, conf], axis=-1)


def geometry_densities(fam: SurfaceFamily, curvature_source: str = "fd"):
    """Density callables for both charts.

    ``curvature_source="analytic"`` differentiates the closed-form area
    density for K (available for families with a closed-form metric).
    """
    fz = fam.y
    fw = lambda w: fam.y(1.0 / w)
    dz = dw = None
    if curvature_source == "analytic":
        dz = lambda q: area_density_analytic(fam, q)
        dw = lambda q: area_density_analytic(fam, 1.0 / q) / np.abs(q) ** 4
    return (lambda z: _geometry_density(fz, z, dz)), (lambda w: _geometry_density(fw, w, dw))


@dataclass
class QuadratureReport:
    family: str
    area: float
    willmore_energy: float
    gauss_bonnet_total: float
    max_minimality_residual: float
    max_conformality_residual: float
    cells_used: int
    converged: bool
    area_half: float = 0.0
    willmore_half: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("area", "willmore_energy", "gauss_bonnet_total", "area_half", "willmore_half"):
            d[k] = {"value": d[k], "over_pi": d[k] / math.pi}
        return d


class _MaxTracker:
    """Wraps a density to record the maxima of diagnostic columns."""

    def __init__(self, fn):
        self.fn = fn
        self.max_h = 0.0
        self.max_conf = 0.0

    def __call__(self, z):
        v = self.fn(z)
        self.max_h = max(self.max_h, float(np.max(v[:, 3])))
        self.max_conf = max(self.max_conf, float(np.max(v[:, 4])))
        return v[:, :3]


def measure(fam: SurfaceFamily, rel_tol: float = 1e-7, max_depth: int = 14,
            curvature_source: str = "fd", strict: bool = False) -> QuadratureReport:
    """Area, Willmore energy and total curvature over the sphere chart."""
    if fam.domain != "sphere":
        raise ValueError(f"{fam.tag} is not parametrized by the sphere")
    fz, fw = geometry_densities(fam, curvature_source)
    tz, tw = _MaxTracker(fz), _MaxTracker(fw)
    res = integrate_chart(tz, tw, rel_tol, max_depth, strict=strict)
    area, w, gb = res.values
    return QuadratureReport(
        family=fam.tag,
        area=float(area),
        willmore_energy=float(w),
        gauss_bonnet_total=float(gb),
        max_minimality_residual=max(tz.max_h, tw.max_h),
        max_conformality_residual=max(tz.max_conf, tw.max_conf),
        cells_used=res.cells,
        converged=res.converged,
        area_half=float(area) / 2,
        willmore_half=float(w) / 2,
    )


def area(fam: SurfaceFamily, rel_tol: float = 1e-7, max_depth: int = 14, strict: bool = False) -> float:
    """Area over the full sphere chart, from the FD area density."""
    def dens(z):
        z = np.asarray(z, dtype=complex)
        yx, yt = _first_derivs(fam.y, z, np.full(z.shape, FD_STEP))
        return (0.5 * (np.sum(yx ** 2, -1) + np.sum(yt ** 2, -1)))[:, None]

    def dens_w(w):
        fn = lambda q: fam.y(1.0 / q)
        yx, yt = _first_derivs(fn, w, np.full(w.shape, FD_STEP))
        return (0.5 * (np.sum(yx ** 2, -1) + np.sum(yt ** 2, -1)))[:, None]

    return float(integrate_chart(dens, dens_w, rel_tol, max_depth, strict=strict).values[0])


def willmore_energy(fam: SurfaceFamily, **kw) -> float:
    return measure(fam, **kw).willmore_energy


def gauss_bonnet_total(fam: SurfaceFamily, **kw) -> float:
    return measure(fam, **kw).gauss_bonnet_total
