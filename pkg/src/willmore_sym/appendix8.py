"""8x8 triangular loop matrices for the RP^2 descent condition.

Entries are Laurent polynomials in ``lam`` whose coefficients are rational
maps in a single formal variable ``w`` standing for ``conj(z)``:

* ``fbar_j(w) = conj(f_j(z))`` is ``f_j`` with conjugated coefficients,
* ``fhat_j(w) = f_j(mu(z)) = f_j(-1/w)``.

The product of the three triangular factors is compared against a
closed-form template, and its plus-loop condition (no negative powers of
``lam``) is compared against the direct descent test.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateG3, DegreeCapExceeded, InconsistentTheorem, MismatchError
from .potentials import IsotropicQuadruple, check_rp2_descent
from .ratfun import RationalMap, Surd

N = 8
# the sign-free permutation used to bring conj(F(1/lam))^t to lower triangular form
J8_SWAP = (3, 4)


class LaurentEntry:
    """``sum_k lam^k * c_k`` with RationalMap coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def mono(cls, k: int, c: RationalMap) -> "LaurentEntry":
        return cls({k: c})

    @classmethod
    def one(cls) -> "LaurentEntry":
        return cls({0: RationalMap.const(Surd(1))})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return LaurentEntry(out)

    def __neg__(self):
        return LaurentEntry({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalMap):
            return LaurentEntry({k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                p = a * b
                out[i + j] = out[i + j] + p if i + j in out else p
        return LaurentEntry(out)

    def negative_part(self) -> dict:
        return {k: c for k, c in self.terms.items() if k < 0}

    def map_coeffs(self, fn) -> "LaurentEntry":
        return LaurentEntry({k: fn(c) for k, c in self.terms.items()})

    def max_degree(self) -> int:
        return max((c.degree for c in self.terms.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, LaurentEntry):
            return NotImplemented
        return (self - other).is_zero()

    def eval(self, w, lam) -> complex:
        return sum(complex(lam) ** k * complex(c(w)) for k, c in self.terms.items())

    def __repr__(self):
        return " + ".join(f"lam^{k}*({c.to_text()})" for k, c in sorted(self.terms.items())) or "0"


class BiRationalLaurentMatrix:
    """Sparse 8x8 matrix of :class:`LaurentEntry`."""

    def __init__(self, entries=None, degree_cap: int = 400):
        self.entries = {ij: e for ij, e in (entries or {}).items() if not e.is_zero()}
        self.degree_cap = degree_cap
        for ij, e in self.entries.items():
            if e.max_degree() > degree_cap:
                raise DegreeCapExceeded(f"entry {ij} exceeds degree cap {degree_cap}")

    @classmethod
    def identity(cls) -> "BiRationalLaurentMatrix":
        return cls({(i, i): LaurentEntry.one() for i in range(N)})

    def get(self, i: int, j: int) -> LaurentEntry:
        return self.entries.get((i, j), LaurentEntry())

    def __matmul__(self, other):
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j in range(N):
                b = other.entries.get((k, j))
                if b is None:
                    continue
                p = a * b
                out[(i, j)] = out[(i, j)] + p if (i, j) in out else p
        return BiRationalLaurentMatrix(out, min(self.degree_cap, other.degree_cap))

    def __add__(self, other):
        out = dict(self.entries)
        for ij, e in other.entries.items():
            out[ij] = out[ij] + e if ij in out else e
        return BiRationalLaurentMatrix(out)

    def __neg__(self):
        return BiRationalLaurentMatrix({ij: -e for ij, e in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def transpose(self):
        return BiRationalLaurentMatrix({(j, i): e for (i, j), e in self.entries.items()})

    def permute(self, perm):
        """``P M P`` for the involutive index permutation ``perm``."""
        return BiRationalLaurentMatrix({(perm[i], perm[j]): e for (i, j), e in self.entries.items()})

    def map_entries(self, fn):
        return BiRationalLaurentMatrix({ij: fn(e) for ij, e in self.entries.items()})

    def is_upper_unitriangular(self) -> bool:
        return all(i <= j for i, j in self.entries) and all(self.get(i, i) == LaurentEntry.one() for i in range(N))

    def differing_entries(self, other) -> list:
        keys = set(self.entries) | set(other.entries)
        return sorted(ij for ij in keys if not (self.get(*ij) - other.get(*ij)).is_zero())

    def __eq__(self, other):
        if not isinstance(other, BiRationalLaurentMatrix):
            return NotImplemented
        return not self.differing_entries(other)

    def eval(self, w, lam) -> np.ndarray:
        out = np.zeros((N, N), dtype=complex)
        for (i, j), e in self.entries.items():
            out[i, j] = e.eval(w, lam)
        return out


def _perm_swap(a: int, b: int):
    p = list(range(N))
    p[a], p[b] = b, a
    return p


def _lam(k: int, c: RationalMap) -> LaurentEntry:
    return LaurentEntry.mono(k, c)


def _fminus_from(fs, g3) -> BiRationalLaurentMatrix:
    f1, f2, f3, f4 = fs
    e = {(i, i): LaurentEntry.one() for i in range(N)}
    for col, f in zip((2, 3, 4, 5), (f1, f2, f3, f4)):
        e[(1, col)] = _lam(-1, f)
    e[(1, 6)] = _lam(-2, g3)
    for row, f in zip((2, 3, 4, 5), (f4, f3, f2, f1)):
        e[(row, 6)] = _lam(-1, -f)
    return BiRationalLaurentMatrix(e)


def build_Fminus(q: IsotropicQuadruple) -> BiRationalLaurentMatrix:
    return _fminus_from(q.fs, q.g3)


def build_chi8() -> BiRationalLaurentMatrix:
    one = RationalMap.const(Surd(1))
    e = {(i, i): LaurentEntry.one() for i in range(N)}
    e[(1, 1)] = _lam(-2, one)
    e[(6, 6)] = _lam(2, one)
    return BiRationalLaurentMatrix(e)


def build_chi8_inverse() -> BiRationalLaurentMatrix:
    one = RationalMap.const(Surd(1))
    e = {(i, i): LaurentEntry.one() for i in range(N)}
    e[(1, 1)] = _lam(2, one)
    e[(6, 6)] = _lam(-2, one)
    return BiRationalLaurentMatrix(e)


def unitriangular_inverse(m: BiRationalLaurentMatrix) -> BiRationalLaurentMatrix:
    """``(I + N)^{-1} = I - N + N^2 - ...`` for nilpotent ``N``."""
    eye = BiRationalLaurentMatrix.identity()
    nil = m - eye
    out, term, sign = eye, eye, 1
    for _ in range(N):
        term = term @ nil
        if not term.entries:
            break
        sign = -sign
        out = out + (term if sign > 0 else -term)
    return out


_MU_W = (Surd(0), Surd(-1), Surd(1), Surd(0))  # w -> -1/w


@dataclass(frozen=True)
class AppendixData:
    """The four function families entering the product, as maps in ``w``."""

    fbar: tuple
    fhat: tuple
    gbar: RationalMap
    ghat: RationalMap


def appendix_data(q: IsotropicQuadruple) -> AppendixData:
    fbar = tuple(f.conj_coeffs().substitute_var("w") for f in q.fs)
    fhat = tuple(f.compose_moebius(*_MU_W).substitute_var("w") for f in q.fs)
    g3 = q.g3
    return AppendixData(fbar, fhat, g3.conj_coeffs().substitute_var("w"),
                        g3.compose_moebius(*_MU_W).substitute_var("w"))


def conj_reflected_factor(q: IsotropicQuadruple) -> BiRationalLaurentMatrix:
    """``J conj(F_-(1/lam))^t J``: coefficients conjugated, lam-powers kept (|lam| = 1)."""
    d = appendix_data(q)
    fbar_minus = _fminus_from(d.fbar, d.gbar)
    return fbar_minus.transpose().permute(_perm_swap(*J8_SWAP))


def pulled_back_factor(q: IsotropicQuadruple) -> BiRationalLaurentMatrix:
    """``chi^{-1} mu^* F_-``."""
    d = appendix_data(q)
    return build_chi8_inverse() @ _fminus_from(d.fhat, d.ghat)


def product_template(q: IsotropicQuadruple) -> BiRationalLaurentMatrix:
    """The closed-form product, entry by entry."""
    d = appendix_data(q)
    fb, fh, gb, gh = d.fbar, d.fhat, d.gbar, d.ghat
    one = RationalMap.const(Surd(1), "w")
    e = {(0, 0): LaurentEntry.one(), (7, 7): LaurentEntry.one()}
    e[(1, 1)] = _lam(2, one)
    for c in range(4):
        e[(1, 2 + c)] = _lam(1, fh[c])
    e[(1, 6)] = _lam(0, gh)
    # rows 2..5 carry fbar in the order 1, 3, 2, 4
    row_order = (0, 2, 1, 3)
    # last column pairs each row with fhat in the order 4, 3, 2, 1
    col_hat = (3, 2, 1, 0)
    for r, jb in enumerate(row_order):
        row = 2 + r
        e[(row, 1)] = _lam(1, fb[jb])
        for c in range(4):
            val = fb[jb] * fh[c]
            if c == r:
                val = val + one
            e[(row, 2 + c)] = _lam(0, val)
        e[(row, 6)] = _lam(-1, fb[jb] * gh - fh[col_hat[r]])
    e[(6, 1)] = _lam(0, gb)
    bar_pair = (3, 1, 2, 0)
    for c in range(4):
        e[(6, 2 + c)] = _lam(-1, gb * fh[c] - fb[bar_pair[c]])
    h0 = one + gb * gh + fb[3] * fh[3] + fb[1] * fh[2] + fb[2] * fh[1] + fb[0] * fh[0]
    e[(6, 6)] = _lam(-2, h0)
    return BiRationalLaurentMatrix(e)


def rp2_product_matrix(q: IsotropicQuadruple, check: bool = True) -> BiRationalLaurentMatrix:
    """Product of the two factors; raises MismatchError if it differs from the template."""
    prod = conj_reflected_factor(q) @ pulled_back_factor(q)
    if check:
        tmpl = product_template(q)
        bad = prod.differing_entries(tmpl)
        if bad:
            raise MismatchError(f"product differs from template at entries {bad}")
    return prod


def plus_loop_obstructions(prod: BiRationalLaurentMatrix) -> dict:
    """All nonzero negative-power coefficients, keyed by (row, col, power)."""
    out = {}
    for (i, j), e in prod.entries.items():
        for k, c in e.negative_part().items():
            out[(i, j, k)] = c
    return out


def appendix_condition(q: IsotropicQuadruple) -> bool:
    return not plus_loop_obstructions(rp2_product_matrix(q))


def verify_rp2_equivalence(q: IsotropicQuadruple) -> bool:
    """Compare the plus-loop condition with the direct descent test.

    Returns True when they agree; raises InconsistentTheorem otherwise.
    A quadruple with ``f1 f4 + f2 f3 == 0`` is outside the equivalence
    and raises DegenerateG3.
    """
    if q.cross.is_zero():
        raise DegenerateG3("f1*f4 + f2*f3 vanishes identically")
    appendix_side = appendix_condition(q)
    descent_side = check_rp2_descent(q).passes
    if appendix_side != descent_side:
        raise InconsistentTheorem(f"appendix={appendix_side} descent={descent_side}")
    return True


def obstruction_report(q: IsotropicQuadruple, max_terms: int = 6) -> list:
    """Human-readable list of surviving negative-power coefficients (truncated)."""
    obs = plus_loop_obstructions(rp2_product_matrix(q))
    lines = []
    for (i, j, k), c in sorted(obs.items()):
        num = c.num[:max_terms]
        tail = ", ..." if len(c.num) > max_terms else ""
        lines.append(f"entry ({i + 1},{j + 1}) lam^{k}: num [{', '.join(map(str, num))}{tail}]")
    return lines
