"""Command-line front end.

Every subcommand prints (or writes) a JSON report with a
``schema_version`` field, except ``sample`` which emits CSV.  Exit codes:
0 when every requested check passes, 1 on a verification failure, 2 on a
usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import appendix8, functionals, lawson, loopalg, potentials, surfaces
from .errors import (
    DegenerateG3,
    FieldMixError,
    InconsistentTheorem,
    MismatchError,
    NonConvergence,
    ParseError,
    UnknownExample,
)
from .potfile import read_potential_file
from .ratfun import MoebiusSymmetry, mu_pullback_conjugate, rf_relative_residual

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EXAMPLES = ("veronese", "rp2_m2", "rp2_m3", "twistor", "enneper", "catenoid", "lawson")
MEASURABLE = ("round_sphere", "veronese", "rp2_m2", "rp2_m3", "twistor_example", "twistor")
SAMPLEABLE = MEASURABLE + ("enneper", "catenoid")

# area / pi on the sphere cover and the lemma index of each minimal family
AREA_TARGETS = {"veronese": 12, "rp2_m2": 20, "rp2_m3": 28, "twistor_example": 12, "round_sphere": 4}
LEMMA_INDEX = {"veronese": 1, "rp2_m2": 2, "rp2_m3": 3}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    potential_file: str | None = None
    family: str | None = None
    rel_tol: float = 1e-7
    tol: float = 1e-10
    fd_step: float = surfaces.FD_STEP
    max_depth: int = 14
    lambda_samples: int = 16
    n_points: int = 100
    seed: int = 0
    exact: bool = True
    appendix: bool = False
    output: str | None = None
    output_format: str = "json"

    def validate(self) -> None:
        for name in ("rel_tol", "tol", "fd_step"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.max_depth < 1:
            raise UsageError("max_depth must be at least 1")
        if self.lambda_samples < 8:
            raise UsageError("lambda_samples must be at least 8")
        if self.n_points < 1:
            raise UsageError("n must be at least 1")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def _pi_multiple(v: float) -> dict:
    return {"value": v, "over_pi": v / math.pi}


def _emit(cfg: RunConfig, report: dict, out) -> None:
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.subcommand, **report}
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


# ---------------------------------------------------------------------------
# check-potential
# ---------------------------------------------------------------------------

def _approx_quadruple_checks(q, tol):
    # each identity is tested as a relative gap between its two sides
    d1, d2, d3, d4 = (f.derivative() for f in q.fs)
    iso_gap = rf_relative_residual(d1 * d4, -(d2 * d3))
    mu = MoebiusSymmetry.antipodal()
    cross = q.cross
    gaps = [rf_relative_residual(q.fs[j], -(cross * mu_pullback_conjugate(q.fs[k], mu)))
            for j, k in enumerate(potentials.DESCENT_PAIRING)]
    failing = [f"r{j + 1}" for j, g in enumerate(gaps) if g > tol]
    return iso_gap <= tol, {"passes": not failing, "failing": failing, "relative_gaps": gaps,
                            "isotropy_gap": iso_gap}


def cmd_check_potential(cfg: RunConfig) -> tuple[int, dict]:
    pf = read_potential_file(cfg.potential_file)
    checks: dict = {}
    info: dict = {}
    if pf.quadruple is not None:
        q = pf.quadruple if cfg.exact else pf.quadruple.to_approx()
        if cfg.exact:
            checks["isotropy"] = potentials.check_isotropy(q)
            desc = potentials.check_rp2_descent(q)
            checks["rp2_descent"] = desc.passes
            info["rp2_descent"] = desc.to_dict()
        else:
            iso, desc = _approx_quadruple_checks(q, cfg.tol)
            checks["isotropy"] = iso
            checks["rp2_descent"] = desc["passes"]
            info["rp2_descent"] = desc
        info["branch_note"] = ("the potential-level test cannot tell mu^*y = y from mu^*y = yhat; "
                               "surface evaluation is needed for that")
        b1 = potentials.build_isotropic_potential(q)
        info["parity"] = potentials.check_reflection_parity(b1).to_dict()
        info["finite_uniton"] = potentials.classify_finite_uniton_columns(b1).to_dict()
        if pf.symmetry is not None:
            checks["reflection"] = potentials.check_reflection_condition(b1, pf.symmetry)
        if cfg.appendix:
            if not cfg.exact:
                raise UsageError("--appendix needs exact mode")
            try:
                checks["appendix_equivalence"] = appendix8.verify_rp2_equivalence(q)
                info["appendix_plus_loop"] = appendix8.appendix_condition(q)
                info["appendix_obstructions"] = appendix8.obstruction_report(q)
            except DegenerateG3 as exc:
                checks["appendix_equivalence"] = False
                info["appendix_error"] = f"DegenerateG3: {exc}"
            except (MismatchError, InconsistentTheorem) as exc:
                checks["appendix_equivalence"] = False
                info["appendix_error"] = f"{type(exc).__name__}: {exc}"
    if pf.weierstrass is not None:
        w = pf.weierstrass
        checks["weierstrass_reflection"] = potentials.check_weierstrass_reflection(w)
        b1 = potentials.weierstrass_potential(w)
        info["weierstrass_normalized"] = w.normalization_ok()
        info["weierstrass_finite_uniton"] = potentials.classify_finite_uniton_columns(b1).to_dict()
    ok = all(checks.values())
    report = {"file": cfg.potential_file, "mode": "exact" if cfg.exact else "approx",
              "checks": checks, "details": info, "passes": ok,
              "failing": sorted(k for k, v in checks.items() if not v)}
    return (EXIT_OK if ok else EXIT_FAIL), report


# ---------------------------------------------------------------------------
# verify-example
# ---------------------------------------------------------------------------

def _minimal_family_suite(tag: str, cfg: RunConfig) -> tuple[dict, dict]:
    fam = surfaces.get_family(tag)
    rng = np.random.default_rng(cfg.seed)
    pts = surfaces.random_points(rng, cfg.n_points)
    mq = functionals.measure(fam, cfg.rel_tol, cfg.max_depth)
    target = AREA_TARGETS[fam.tag] * math.pi
    metric_res = float(np.max(surfaces.metric_residual(fam, pts)))
    minimal = float(np.max(surfaces.minimality_residual(fam, surfaces.random_points(rng, 2 * cfg.n_points))))
    checks = {
        "area": abs(mq.area - target) / target < 2e-3,
        "willmore_identity": abs(mq.willmore_energy - (mq.area - 4 * math.pi)) / mq.area < 1e-2,
        "gauss_bonnet": abs(mq.gauss_bonnet_total - 4 * math.pi) / (4 * math.pi) < 1e-3,
        "metric_closed_form": metric_res < 1e-6,
        "minimality": minimal < 1e-5,
        "lightcone": float(np.max(surfaces.lightcone_residual(fam, pts))) < 1e-10,
        "converged": mq.converged,
    }
    info = {"quadrature": mq.to_dict(), "area_target": _pi_multiple(target),
            "metric_residual": metric_res, "max_minimality_residual": minimal}
    if fam.mu_scale_power is not None:
        mu_res = float(np.max(surfaces.mu_invariance_residual(
            fam, MoebiusSymmetry.antipodal(), pts)))
        checks["mu_invariance"] = mu_res < 1e-10
        info["mu_invariance_residual"] = mu_res
        info["mu_scale_power"] = fam.mu_scale_power
    if tag in LEMMA_INDEX:
        q = potentials.lemma_family(LEMMA_INDEX[tag])
        checks["lemma_isotropy"] = potentials.check_isotropy(q)
        checks["lemma_rp2_descent"] = potentials.check_rp2_descent(q).passes
    if fam.tag == "twistor_example":
        b1 = potentials.build_isotropic_potential(potentials.twistor_quadruple())
        checks["reflection_phat"] = potentials.check_reflection_condition(b1, potentials.reflection_spec_phat(2))
        info["reflection_p"] = potentials.check_reflection_condition(b1, potentials.reflection_spec_p(2))
    return checks, info


def _weierstrass_suite(tag: str, cfg: RunConfig) -> tuple[dict, dict]:
    w = potentials.enneper_data(1) if tag == "enneper" else potentials.catenoid_data()
    fam = surfaces.get_family(tag)
    rng = np.random.default_rng(cfg.seed)
    pts = surfaces.random_points(rng, cfg.n_points, 0.3, 3.0)
    minimal = float(np.max(surfaces.minimality_residual(fam, pts)))
    conf = float(np.max(surfaces.conformality_residual(fam, pts)))
    b1 = potentials.weierstrass_potential(w)
    cls = potentials.classify_finite_uniton_columns(b1)
    checks = {
        "weierstrass_reflection": potentials.check_weierstrass_reflection(w),
        "minimality": minimal < 1e-5,
        "conformality": conf < 1e-6,
        "minimal_type_columns": cls.labels == ["minimal-type"],
    }
    return checks, {"max_minimality_residual": minimal, "max_conformality_residual": conf,
                    "finite_uniton": cls.to_dict(), "normalized": w.normalization_ok()}


def _lawson_suite(cfg: RunConfig) -> tuple[dict, dict]:
    rep = lawson.lawson_report(n_points=50, seed=cfg.seed)
    closure = loopalg.check_moebius_closure(lawson.build_L_lambda(), math.pi, np.eye(5), lawson.FORM_1_4,
                                            loopalg.unit_circle_samples(cfg.lambda_samples))
    ev = sorted(complex(*x).imag for x in rep["L1_eigenvalues"])
    mono = sorted(complex(*x).real for x in rep["monodromy_eigenvalues"])
    checks = {
        "omega0_is_ln2": rep["omega0_is_ln2"],
        "s0": abs(complex(*rep["s0"]) - 1.5) < 1e-8,
        "k0": abs(complex(*rep["k0"]) + 0.5j) < 1e-8,
        "metric": rep["metric_residual"] < 1e-10,
        "yuv_normal": rep["yuv_n_residual"] < 1e-8,
        "L1_eigenvalues": np.allclose(ev, [-2, -1, 0, 1, 2], atol=1e-10)
        and max(abs(complex(*x).real) for x in rep["L1_eigenvalues"]) < 1e-10,
        "monodromy_eigenvalues": np.allclose(mono, [-1, -1, 1, 1, 1], atol=1e-10),
        "v0": abs(rep["v0"] - 2.15652) < 1e-5,
        "mu_symmetry": rep["mu_symmetry_residual"] < 1e-12,
        "moebius_closure": closure.ok,
    }
    return checks, {"lawson": rep, "moebius_closure": closure.to_dict()}


def cmd_verify_example(cfg: RunConfig) -> tuple[int, dict]:
    name = cfg.family
    if name not in EXAMPLES:
        raise UnknownExample(name)
    if name == "lawson":
        checks, info = _lawson_suite(cfg)
    elif name in ("enneper", "catenoid"):
        checks, info = _weierstrass_suite(name, cfg)
    else:
        checks, info = _minimal_family_suite(name, cfg)
    checks = {k: bool(v) for k, v in checks.items()}
    ok = all(checks.values())
    report = {"example": name, "checks": checks, "details": info, "passes": ok,
              "failing": sorted(k for k, v in checks.items() if not v)}
    return (EXIT_OK if ok else EXIT_FAIL), report


# ---------------------------------------------------------------------------
# measure / sample / lawson-report
# ---------------------------------------------------------------------------

def cmd_measure(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.family not in MEASURABLE:
        raise UnknownExample(cfg.family)
    fam = surfaces.get_family(cfg.family)
    mq = functionals.measure(fam, cfg.rel_tol, cfg.max_depth)
    checks = {
        "converged": mq.converged,
        "willmore_nonnegative": mq.willmore_energy > -1e-6 * mq.area,
        "gauss_bonnet": abs(mq.gauss_bonnet_total - 4 * math.pi) / (4 * math.pi) < 1e-3,
    }
    ok = all(checks.values())
    report = {"family": fam.tag, **mq.to_dict(), "checks": checks, "passes": ok}
    return (EXIT_OK if ok else EXIT_FAIL), report


def cmd_sample(cfg: RunConfig) -> str:
    """CSV rows in sample order: z, projected y, e2u (FD and closed form), K, |H|, conformality."""
    if cfg.family not in SAMPLEABLE:
        raise UnknownExample(cfg.family)
    fam = surfaces.get_family(cfg.family)
    rng = np.random.default_rng(cfg.seed)
    pts = surfaces.random_points(rng, cfg.n_points)
    analytic = fam.metric_native is not None
    rows = []
    for z in pts:
        pd = surfaces.point_data(fam, z)
        ea = float(surfaces.area_density_analytic(fam, np.array([z]))[0]) if analytic else float("nan")
        rows.append([float(z.real), float(z.imag), *map(float, pd.y), pd.e2u, ea, pd.K,
                     float(np.linalg.norm(pd.H_vec)), pd.conformality])
    dim = len(rows[0]) - 7
    header = ["z_re", "z_im", *(f"y{k + 1}" for k in range(dim)),
              "e2u", "e2u_closed_form", "K", "H_norm", "conformality"]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow([repr(x) for x in r])
    return buf.getvalue()


def cmd_lawson_report(cfg: RunConfig) -> tuple[int, dict]:
    checks, info = _lawson_suite(cfg)
    checks = {k: bool(v) for k, v in checks.items()}
    ok = all(checks.values())
    return (EXIT_OK if ok else EXIT_FAIL), {"checks": checks, **info, "passes": ok}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True,
                      help="exact rational arithmetic (default)")
    mode.add_argument("--approx", dest="exact", action="store_false", help="floating-point checks")
    common.add_argument("--tol", type=float, default=1e-10, help="zero test tolerance in approx mode")
    common.add_argument("--rel-tol", type=float, default=1e-7, help="quadrature relative tolerance")
    common.add_argument("--max-depth", type=int, default=14, help="quadrature refinement depth")
    common.add_argument("--lambda-samples", type=int, default=16, help="spectral parameter samples (>= 8)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="willmore-sym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    cp = sub.add_parser("check-potential", parents=[common], help="run the potential checkers on a file")
    cp.add_argument("potential_file")
    cp.add_argument("--appendix", action="store_true", help="also run the 8x8 product-matrix test")
    ve = sub.add_parser("verify-example", parents=[common], help="full invariant suite of a named example")
    ve.add_argument("family", metavar="name", help=", ".join(EXAMPLES))
    ve.add_argument("--n", dest="n_points", type=int, default=100, help="random sample points")
    me = sub.add_parser("measure", parents=[common], help="area, Willmore energy and total curvature")
    me.add_argument("family", help=", ".join(MEASURABLE))
    sa = sub.add_parser("sample", parents=[common], help="pointwise data as CSV")
    sa.add_argument("family", help=", ".join(SAMPLEABLE))
    sa.add_argument("--n", dest="n_points", type=int, default=100)
    sub.add_parser("lawson-report", parents=[common], help="Klein bottle frame and monodromy data")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        subcommand=ns.subcommand,
        potential_file=getattr(ns, "potential_file", None),
        family=getattr(ns, "family", None),
        rel_tol=ns.rel_tol, tol=ns.tol, max_depth=ns.max_depth,
        lambda_samples=ns.lambda_samples, seed=ns.seed, exact=ns.exact,
        appendix=getattr(ns, "appendix", False), output=ns.output,
        n_points=getattr(ns, "n_points", 100),
        output_format="csv" if ns.subcommand == "sample" else "json",
    )
    cfg.validate()
    return cfg


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _config(ns)
        if cfg.subcommand == "sample":
            text = cmd_sample(cfg)
            if cfg.output:
                with open(cfg.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return EXIT_OK
        handler = {
            "check-potential": cmd_check_potential,
            "verify-example": cmd_verify_example,
            "measure": cmd_measure,
            "lawson-report": cmd_lawson_report,
        }[cfg.subcommand]
        code, report = handler(cfg)
        _emit(cfg, report, out)
        return code
    except (ParseError, FieldMixError, UsageError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except UnknownExample as exc:
        err.write(f"error: unknown example {exc.args[0]!r}\n")
        return EXIT_USAGE
    except NonConvergence as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
