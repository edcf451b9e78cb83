"""Laurent-polynomial matrices in the loop parameter and loop-group membership checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import ConvergenceError, SingularW0, SizeMismatch

__all__ = [
    "LaurentMatrix",
    "SignatureForm",
    "MembershipReport",
    "lm_mul",
    "lm_add",
    "lm_eval",
    "lm_exp",
    "eigen_data",
    "check_orthogonality",
    "check_reality",
    "check_twisting",
    "equivariant_monodromy",
    "check_moebius_closure",
    "unit_circle_samples",
]


class LaurentMatrix:
    """``A(lam) = sum_k lam**k * A_k`` with square complex coefficients."""

    __slots__ = ("size", "terms")

    def __init__(self, terms: Mapping[int, object], size: int | None = None):
        clean: dict[int, np.ndarray] = {}
        for k, a in terms.items():
            arr = np.array(a, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise SizeMismatch(f"coefficient {k} is not square: {arr.shape}")
            if size is None:
                size = arr.shape[0]
            elif arr.shape[0] != size:
                raise SizeMismatch(f"coefficient {k} has size {arr.shape[0]}, expected {size}")
            if np.any(arr != 0):
                arr.setflags(write=False)
                clean[int(k)] = arr
        if size is None:
            raise ValueError("size is required for an empty LaurentMatrix")
        self.size = size
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, a) -> "LaurentMatrix":
        a = np.asarray(a, dtype=complex)
        return cls({0: a}, a.shape[0])

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls({0: np.eye(n)}, n)

    @classmethod
    def zeros(cls, n: int) -> "LaurentMatrix":
        return cls({}, n)

    @property
    def degree_range(self) -> tuple[int, int]:
        if not self.terms:
            return (0, 0)
        ks = list(self.terms)
        return (ks[0], ks[-1])

    def coeff(self, k: int) -> np.ndarray:
        return self.terms.get(k, np.zeros((self.size, self.size), dtype=complex))

    def __matmul__(self, other):
        return lm_mul(self, other)

    def __mul__(self, other):
        if isinstance(other, LaurentMatrix):
            return lm_mul(self, other)
        return LaurentMatrix({k: other * a for k, a in self.terms.items()}, self.size)

    __rmul__ = __mul__

    def __add__(self, other):
        return lm_add(self, other)

    def __sub__(self, other):
        return lm_add(self, -1 * other)

    def __neg__(self):
        return -1 * self

    def __call__(self, lam):
        return lm_eval(self, lam)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix({k: a.T for k, a in self.terms.items()}, self.size)

    def bar_inverse_lambda(self) -> "LaurentMatrix":
        """``conj(A(1/conj(lam)))``: the coefficient map ``A_k -> conj(A_{-k})``."""
        return LaurentMatrix({-k: np.conj(a) for k, a in self.terms.items()}, self.size)

    def to_json(self) -> str:
        terms = {str(k): [[[float(x.real), float(x.imag)] for x in row] for row in a]
                 for k, a in self.terms.items()}
        return json.dumps({"size": self.size, "terms": terms}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LaurentMatrix":
        obj = json.loads(text)
        terms = {int(k): [[complex(re, im) for re, im in row] for row in rows]
                 for k, rows in obj["terms"].items()}
        return cls(terms, int(obj["size"]))

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix) or other.size != self.size:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(np.array_equal(self.coeff(k), other.coeff(k)) for k in keys)

    def __repr__(self):
        lo, hi = self.degree_range
        return f"LaurentMatrix(size={self.size}, degrees=[{lo}, {hi}])"


def lm_mul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    if a.size != b.size:
        raise SizeMismatch(f"sizes {a.size} and {b.size}")
    out: dict[int, np.ndarray] = {}
    for i, x in a.terms.items():
        for j, y in b.terms.items():
            out[i + j] = out.get(i + j, 0) + x @ y
    return LaurentMatrix(out, a.size)


def lm_add(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    if a.size != b.size:
        raise SizeMismatch(f"sizes {a.size} and {b.size}")
    out = dict(a.terms)
    for k, y in b.terms.items():
        out[k] = out.get(k, 0) + y
    return LaurentMatrix(out, a.size)


def lm_eval(a: LaurentMatrix, lam: complex) -> np.ndarray:
    if lam == 0:
        raise ZeroDivisionError("Laurent matrix evaluated at lambda = 0")
    out = np.zeros((a.size, a.size), dtype=complex)
    for k, c in a.terms.items():
        out = out + (lam ** k) * c
    return out


@dataclass(frozen=True)
class SignatureForm:
    """``diag(-1 x p, +1 x q)``."""

    p: int
    q: int

    @property
    def size(self) -> int:
        return self.p + self.q

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([-1.0] * self.p + [1.0] * self.q)


@dataclass
class MembershipReport:
    orthogonality_residual: float = 0.0
    reality_residual: float = 0.0
    twisting_residual: float = 0.0
    tol: float = 1e-10
    extra: dict = field(default_factory=dict)
    checked: tuple = ("orthogonality", "reality", "twisting")

    @property
    def passes(self) -> dict:
        out = {}
        if "orthogonality" in self.checked:
            out["orthogonality"] = self.orthogonality_residual < self.tol
        if "reality" in self.checked:
            out["reality"] = self.reality_residual < self.tol
        if "twisting" in self.checked:
            out["twisting"] = self.twisting_residual < self.tol
        for k, v in self.extra.items():
            if isinstance(v, bool):
                out[k] = v
        return out

    @property
    def ok(self) -> bool:
        return all(self.passes.values())

    def to_dict(self) -> dict:
        return {
            "orthogonality_residual": self.orthogonality_residual,
            "reality_residual": self.reality_residual,
            "twisting_residual": self.twisting_residual,
            "tol": self.tol,
            "passes": self.passes,
            "ok": self.ok,
            **{k: v for k, v in self.extra.items() if not isinstance(v, bool)},
        }


def _maxnorm(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def check_orthogonality(a: LaurentMatrix, form: SignatureForm, tol: float = 1e-10) -> MembershipReport:
    """Coefficientwise residual of ``A(lam)^t I A(lam) - I``."""
    if form.size != a.size:
        raise SizeMismatch(f"form size {form.size} vs matrix size {a.size}")
    g = LaurentMatrix.constant(form.matrix)
    prod = lm_mul(lm_mul(a.transpose(), g), a) - g
    res = max((_maxnorm(c) for c in prod.terms.values()), default=0.0)
    return MembershipReport(orthogonality_residual=res, tol=tol, checked=("orthogonality",))


def check_reality(a: LaurentMatrix, tol: float = 1e-10) -> MembershipReport:
    """Residual of ``conj(A_k) = A_{-k}``, i.e. ``A(lam)`` real on the unit circle."""
    keys = set(a.terms) | {-k for k in a.terms}
    res = max((_maxnorm(np.conj(a.coeff(k)) - a.coeff(-k)) for k in keys), default=0.0)
    return MembershipReport(reality_residual=res, tol=tol, checked=("reality",))


def check_twisting(a: LaurentMatrix, block_split: tuple[int, int], tol: float = 1e-10) -> MembershipReport:
    """Even powers block-diagonal, odd powers block-off-diagonal."""
    p, q = block_split
    if p + q != a.size:
        raise SizeMismatch(f"split {block_split} does not match size {a.size}")
    res = 0.0
    for k, c in a.terms.items():
        if k % 2 == 0:
            bad = [c[:p, p:], c[p:, :p]]
        else:
            bad = [c[:p, :p], c[p:, p:]]
        res = max([res] + [_maxnorm(b) for b in bad])
    return MembershipReport(twisting_residual=res, tol=tol, checked=("twisting",))


def lm_exp(a, t: float = 1.0) -> np.ndarray:
    """``exp(t A)`` for a constant square matrix (scaling and squaring Pade)."""
    a = np.asarray(a, dtype=complex)
    out = expm(t * a)
    if np.all(np.isreal(a)) and np.isreal(t):
        out = out.real.astype(complex)
    return out


def _lex_key(x: complex):
    return (round(x.real, 9), round(x.imag, 9))


def eigen_data(a, tol: float = 1e-10) -> list[complex]:
    """Eigenvalues with multiplicity, sorted by (real, imag)."""
    a = np.asarray(a, dtype=complex)
    vals, vecs = np.linalg.eig(a)
    scale = max(1.0, _maxnorm(a))
    for lam, v in zip(vals, vecs.T):
        r = np.linalg.norm(a @ v - lam * v) / max(np.linalg.norm(v), 1e-300)
        if r > tol * scale:
            raise ConvergenceError(f"eigenpair residual {r:.3e} for eigenvalue {lam}")
    return sorted((complex(v) for v in vals), key=_lex_key)


def equivariant_monodromy(d: LaurentMatrix, c0: float, w0_at_0, lam: complex) -> np.ndarray:
    """``exp(c0 D(lam)) W0^{-1}``."""
    w0 = np.asarray(w0_at_0, dtype=complex)
    if np.linalg.cond(w0) > 1e12:
        raise SingularW0("W0(0) is singular")
    return lm_exp(lm_eval(d, lam), c0) @ np.linalg.inv(w0)


def unit_circle_samples(n: int = 16) -> list[complex]:
    """``n`` roots of unity; 1 is always among them."""
    return [complex(np.exp(2j * np.pi * k / n)) for k in range(n)]


def _default_target(n: int) -> np.ndarray:
    d = np.ones(n)
    d[3] = d[4] = -1
    return np.diag(d)


def check_moebius_closure(d: LaurentMatrix, c0: float, w0_at_0, form: SignatureForm,
                          lam_samples: Sequence[complex] | None = None, tol: float = 1e-9,
                          target=None) -> MembershipReport:
    """Sampled membership checks for ``chi(lam) = exp(c0 D(lam)) W0^{-1}``.

    Reality is ``|Im chi|`` on the unit circle, orthogonality is
    ``chi^t I chi - I`` and twisting is ``chi(-lam) = Sigma chi(lam) Sigma``
    with ``Sigma = diag(1,1,1,1,-1,...)``.  At ``lam = 1`` the eigenvalues
    of chi must match those of the target signature matrix, and
    ``det = +1`` together with ``chi(1)[0,0] > 0`` serve as an
    identity-component proxy.
    """
    n = d.size
    if form.size != n:
        raise SizeMismatch(f"form size {form.size} vs {n}")
    samples = list(lam_samples) if lam_samples is not None else unit_circle_samples(16)
    if not any(abs(s - 1) < 1e-15 for s in samples):
        samples.append(1.0 + 0j)
    g = form.matrix
    sigma = np.diag([1.0] * min(4, n) + [-1.0] * (n - min(4, n)))
    orth = real = twist = det_res = 0.0
    for lam in samples:
        chi = equivariant_monodromy(d, c0, w0_at_0, lam)
        real = max(real, _maxnorm(chi.imag))
        orth = max(orth, _maxnorm(chi.T @ g @ chi - g))
        chi_neg = equivariant_monodromy(d, c0, w0_at_0, -lam)
        twist = max(twist, _maxnorm(chi_neg - sigma @ chi @ sigma))
        det_res = max(det_res, abs(np.linalg.det(chi) - 1))
    chi1 = equivariant_monodromy(d, c0, w0_at_0, 1.0)
    tgt = _default_target(n) if target is None else np.asarray(target)
    ev = eigen_data(chi1, tol=1e-8)
    ev_t = eigen_data(tgt)
    eig_res = max(abs(a - b) for a, b in zip(ev, ev_t))
    return MembershipReport(
        orthogonality_residual=orth,
        reality_residual=real,
        twisting_residual=twist,
        tol=tol,
        extra={
            "det_residual": det_res,
            "det_plus_one": det_res < tol,
            "time_orientation": bool(chi1[0, 0].real > 0),
            "chi1_eigen_residual": eig_res,
            "chi1_matches_target": eig_res < tol,
            "chi1_eigenvalues": [[v.real, v.imag] for v in ev],
            "lambda_samples": len(samples),
        },
    )
