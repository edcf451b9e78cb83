"""Potential families and exact symmetry checkers.

All potentials here have the block form ``lam^-1 [[0, B1], [-B1^t I13, 0]] dz``
so only the 4 x n block ``B1`` is stored, as a list of rows of
:class:`RationalMap`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateG3, SizeMismatch
from .ratfun import (
    I,
    MoebiusSymmetry,
    RationalMap,
    Surd,
    mu_pullback_conjugate,
    rf_is_zero_approx,
)

SIGNATURE_1_3 = (-1, 1, 1, 1)
# descent pairing: f1 <-> conj(f4 o mu), f2 <-> f2, f3 <-> f3, f4 <-> f1
DESCENT_PAIRING = (3, 1, 2, 0)


def _is_zero(f: RationalMap) -> bool:
    return f.is_zero() if f.exact else rf_is_zero_approx(f)


def _eq(f: RationalMap, g: RationalMap) -> bool:
    return _is_zero(f - g)


def _z() -> RationalMap:
    return RationalMap.identity()


@dataclass(frozen=True)
class IsotropicQuadruple:
    f1: RationalMap
    f2: RationalMap
    f3: RationalMap
    f4: RationalMap

    @property
    def fs(self) -> tuple:
        return (self.f1, self.f2, self.f3, self.f4)

    @property
    def cross(self) -> RationalMap:
        """``f1 f4 + f2 f3``."""
        return self.f1 * self.f4 + self.f2 * self.f3

    @property
    def g3(self) -> RationalMap:
        return -self.cross

    @property
    def exact(self) -> bool:
        return all(f.exact for f in self.fs)

    def to_approx(self) -> "IsotropicQuadruple":
        return IsotropicQuadruple(*(f.to_approx() for f in self.fs))

    def is_zero(self) -> bool:
        return all(_is_zero(f) for f in self.fs)


@dataclass(frozen=True)
class NormalizedPotential:
    """``B1`` as 4 rows of RationalMaps; ``n`` columns, target ``S^{n+2}``."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if len(rows) != 4:
            raise SizeMismatch(f"B1 needs 4 rows, got {len(rows)}")
        if len({len(r) for r in rows}) != 1:
            raise SizeMismatch("ragged B1")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def entry(self, i: int, j: int) -> RationalMap:
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [self.rows[i][j] for i in range(4)]

    def gram(self) -> list:
        """``B1^t I13 B1`` as an n x n list of RationalMaps."""
        n = self.n
        return [[sum((self.rows[i][a] * self.rows[i][b] * SIGNATURE_1_3[i] for i in range(1, 4)),
                     self.rows[0][a] * self.rows[0][b] * SIGNATURE_1_3[0])
                 for b in range(n)] for a in range(n)]

    def eval(self, z) -> np.ndarray:
        return np.array([[complex(f(z)) for f in row] for row in self.rows])

    def full_block(self, z, lam: complex = 1.0) -> np.ndarray:
        """The full (4+n)x(4+n) matrix of the potential at ``z``."""
        b = self.eval(z)
        n = self.n
        out = np.zeros((4 + n, 4 + n), dtype=complex)
        out[:4, 4:] = b
        out[4:, :4] = -b.T @ np.diag(SIGNATURE_1_3)
        return out / lam


def _sign_matrix(diag) -> tuple:
    n = len(diag)
    return tuple(tuple(Surd(diag[i]) if i == j else Surd(0) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class SymmetrySpec:
    """(mu, S1, S2) with S1 in O(1,3) (4x4) and S2 in O(n)."""

    mu: MoebiusSymmetry
    s_hat1: tuple
    s_hat2: tuple
    det_flag: int = 2

    def __post_init__(self):
        s1 = np.array([[complex(x) for x in r] for r in self.s_hat1])
        s2 = np.array([[complex(x) for x in r] for r in self.s_hat2])
        g = np.diag(SIGNATURE_1_3).astype(float)
        if s1.shape != (4, 4) or np.max(np.abs(s1.T @ g @ s1 - g)) > 1e-12:
            raise ValueError("s_hat1 is not in O(1,3)")
        if s2.shape[0] != s2.shape[1] or np.max(np.abs(s2.T @ s2 - np.eye(len(s2)))) > 1e-12:
            raise ValueError("s_hat2 is not orthogonal")
        if self.det_flag not in (1, 2):
            raise ValueError("det_flag must be 1 or 2")

    @classmethod
    def from_diagonals(cls, mu, d1, d2, det_flag=None) -> "SymmetrySpec":
        if det_flag is None:
            det = int(np.prod(d1) * np.prod(d2))
            det_flag = (det + 3) // 2
        return cls(mu, _sign_matrix(d1), _sign_matrix(d2), det_flag)


def reflection_spec_p(n: int) -> SymmetrySpec:
    """mu = conj, S = (diag(1,1,1,-1), I_n)."""
    return SymmetrySpec.from_diagonals(MoebiusSymmetry.reflection(), (1, 1, 1, -1), (1,) * n)


def reflection_spec_phat(n: int) -> SymmetrySpec:
    """mu = conj, S = (diag(1,1,1,-1), diag(1,-1,...,1,-1))."""
    return SymmetrySpec.from_diagonals(MoebiusSymmetry.reflection(), (1, 1, 1, -1),
                                       tuple(1 if j % 2 == 0 else -1 for j in range(n)))


@dataclass(frozen=True)
class WeierstrassData:
    h: RationalMap
    g: RationalMap

    def normalization_ok(self) -> bool:
        """``h(0) = 1`` and ``g(0) = 0``; checked, never enforced."""
        try:
            return self.h(Surd(0)) == Surd(1) and self.g(Surd(0)) == Surd(0)
        except ZeroDivisionError:
            return False


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_isotropic_potential(q: IsotropicQuadruple) -> NormalizedPotential:
    d1, d2, d3, d4 = (f.derivative() for f in q.fs)
    half = Surd(Fraction(1, 2)) if q.exact else 0.5
    i = I if q.exact else 1j
    col1 = [i * (d3 - d2), i * (d3 + d2), d4 - d1, i * (d4 + d1)]
    col1 = [c * half for c in col1]
    col2 = [c * i for c in col1]
    return NormalizedPotential(tuple((a, b) for a, b in zip(col1, col2)))


def lemma_family(m: int) -> IsotropicQuadruple:
    """Monomial quadruple with ``f1 f4 + f2 f3 = z^{4m}``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    root = Surd.sqrt(4 * m * m - 1, I)
    f1 = RationalMap.monomial(Surd(-2 * m), 2 * m + 1)
    f23 = RationalMap.monomial(root, 2 * m)
    f4 = RationalMap.monomial(Surd(-2 * m), 2 * m - 1)
    return IsotropicQuadruple(f1, f23, f23, f4)


def perturbed_lemma_family(m: int, factor=Fraction(101, 100)) -> IsotropicQuadruple:
    """Lemma family with ``f2`` scaled by ``factor`` (negative control)."""
    q = lemma_family(m)
    return IsotropicQuadruple(q.f1, q.f2 * Surd(factor), q.f3, q.f4)


def twistor_quadruple() -> IsotropicQuadruple:
    z = _z()
    return IsotropicQuadruple(z ** 3 * Surd(Fraction(4, 3)), z ** 2 * I, z ** 2 * I, z)


def weierstrass_potential(w: WeierstrassData) -> NormalizedPotential:
    """4 x 1 block ``(1/2)(-h g'/sqrt2, -h g'/sqrt2, -g', -i g')``."""
    gz = w.g.derivative()
    c = Surd.sqrt(2, Fraction(-1, 4))  # -1/(2 sqrt 2)
    top = w.h * gz * c
    half = Surd(Fraction(-1, 2))
    return NormalizedPotential(((top,), (top,), (gz * half,), (gz * half * I,)))


def enneper_data(n: int = 1) -> WeierstrassData:
    z = _z()
    return WeierstrassData(z, z ** n)


def catenoid_data() -> WeierstrassData:
    z = _z()
    return WeierstrassData(RationalMap.const(Surd(-1)) / z, z)


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

def isotropy_form(q: IsotropicQuadruple) -> RationalMap:
    d1, d2, d3, d4 = (f.derivative() for f in q.fs)
    return d1 * d4 + d2 * d3


def check_isotropy(q: IsotropicQuadruple) -> bool:
    return _is_zero(isotropy_form(q))


@dataclass
class DescentReport:
    residuals: list
    passes: bool
    degenerate: bool = False
    diagnostic: str | None = None
    failing: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "degenerate": self.degenerate,
            "diagnostic": self.diagnostic,
            "failing": self.failing,
            "residuals": [r.to_text() for r in self.residuals],
        }


def descent_residuals(q: IsotropicQuadruple, mu: MoebiusSymmetry | None = None) -> list:
    mu = mu or MoebiusSymmetry.antipodal()
    cross = q.cross
    fs = q.fs
    return [fs[j] + cross * mu_pullback_conjugate(fs[DESCENT_PAIRING[j]], mu) for j in range(4)]


def check_rp2_descent(q: IsotropicQuadruple, mu: MoebiusSymmetry | None = None) -> DescentReport:
    res = descent_residuals(q, mu)
    failing = [f"r{j + 1}" for j, r in enumerate(res) if not _is_zero(r)]
    degenerate = _is_zero(q.cross)
    diag = None
    if degenerate and not q.is_zero():
        diag = DegenerateG3.__name__ + ": f1*f4 + f2*f3 vanishes identically but the quadruple is nonzero"
    return DescentReport(res, not failing, degenerate, diag, failing)


def _mat_apply(s1, b_rows, s2inv, n):
    """``S1 . B . S2inv`` for a 4 x n matrix of RationalMaps."""
    tmp = [[sum((b_rows[k][l] * s1[i][k] for k in range(4) if s1[i][k]), RationalMap.zero())
            for l in range(n)] for i in range(4)]
    return [[sum((tmp[i][l] * s2inv[l][j] for l in range(n) if s2inv[l][j]), RationalMap.zero())
             for j in range(n)] for i in range(4)]


def _inverse_orthogonal(s2):
    # S2 orthogonal with real entries: inverse is the transpose
    n = len(s2)
    return tuple(tuple(s2[j][i] for j in range(n)) for i in range(n))


def reflection_residuals(b1: NormalizedPotential, spec: SymmetrySpec) -> list:
    """Entrywise ``B1(mu(z)) - S1 conj(B1(z)) S2^{-1}`` in the variable ``w = conj z``."""
    if not spec.mu.antiholomorphic:
        raise ValueError("reflection condition needs an antiholomorphic mu")
    if len(spec.s_hat2) != b1.n:
        raise SizeMismatch(f"s_hat2 has size {len(spec.s_hat2)}, B1 has {b1.n} columns")
    a, b, c, d = spec.mu.matrix
    lhs = [[f.compose_moebius(a, b, c, d) for f in row] for row in b1.rows]
    conj_rows = [[f.conj_coeffs() for f in row] for row in b1.rows]
    rhs = _mat_apply(spec.s_hat1, conj_rows, _inverse_orthogonal(spec.s_hat2), b1.n)
    return [[lhs[i][j] - rhs[i][j] for j in range(b1.n)] for i in range(4)]


def check_reflection_condition(b1: NormalizedPotential, spec: SymmetrySpec) -> bool:
    return all(_is_zero(r) for row in reflection_residuals(b1, spec) for r in row)


def parity_sign(row: int, col: int) -> int:
    """Required sign for entry (row, col), both 1-based: h(conj z) = sign * conj(h(z))."""
    if row in (1, 4):
        return (-1) ** (col + 1)
    return (-1) ** col


@dataclass
class ParityTable:
    table: list
    passes: bool

    def to_dict(self) -> dict:
        return {"table": self.table, "passes": self.passes}


def check_reflection_parity(b1: NormalizedPotential) -> ParityTable:
    table = []
    for i, row in enumerate(b1.rows):
        out = []
        for j, h in enumerate(row):
            s = parity_sign(i + 1, j + 1)
            out.append(_eq(h.conj_coeffs() * Surd(s) if h.exact else h.conj_coeffs() * s, h))
        table.append(out)
    return ParityTable(table, all(all(r) for r in table))


@dataclass
class UnitonClassification:
    labels: list
    null_relations: bool
    padded: bool

    def to_dict(self) -> dict:
        return {"labels": self.labels, "null_relations": self.null_relations, "padded": self.padded}


def _is_minimal_column(col) -> bool:
    i = I if col[0].exact else 1j
    return _eq(col[0], col[1]) and _eq(col[3], col[2] * i)


def classify_finite_uniton_columns(b1: NormalizedPotential) -> UnitonClassification:
    """Label each column pair (v_j, vhat_j) as minimal-type, isotropic-type or neither.

    An odd column count is padded with a zero column.  Minimal-type is
    tested first, so every pair gets exactly one label.
    """
    cols = [b1.column(j) for j in range(b1.n)]
    padded = False
    if len(cols) % 2:
        zero = RationalMap.zero() if cols[0][0].exact else RationalMap.zero().to_approx()
        cols.append([zero] * 4)
        padded = True
    labels = []
    for j in range(0, len(cols), 2):
        v, vh = cols[j], cols[j + 1]
        i = I if v[0].exact else 1j
        if _is_minimal_column(v) and _is_minimal_column(vh):
            labels.append("minimal-type")
        elif all(_eq(vh[r], v[r] * i) for r in range(4)):
            labels.append("isotropic-type")
        else:
            labels.append("neither")
    null = all(_is_zero(x) for row in b1.gram() for x in row)
    return UnitonClassification(labels, null, padded)


def check_weierstrass_reflection(w: WeierstrassData) -> bool:
    """``g'(conj z) = conj(g'(z))`` and ``h(conj z) = conj(h(z))``."""
    gz = w.g.derivative()
    return _eq(gz.conj_coeffs(), gz) and _eq(w.h.conj_coeffs(), w.h)


def random_quadruple(rng, max_degree: int = 3, coeff_range: int = 4, rational: bool = False) -> IsotropicQuadruple:
    """Random Gaussian-integer polynomial (or rational) quadruple, not isotropic in general."""

    def rnd():
        return Surd(int(rng.integers(-coeff_range, coeff_range + 1)),
                    int(rng.integers(-coeff_range, coeff_range + 1)))

    fs = []
    for _ in range(4):
        deg = int(rng.integers(0, max_degree + 1))
        num = [rnd() for _ in range(deg + 1)]
        if num[-1].is_zero():
            num[-1] = Surd(1)
        den = [Surd(1)]
        if rational and rng.random() < 0.5:
            den = [rnd(), Surd(1)]
        fs.append(RationalMap(num, den))
    return IsotropicQuadruple(*fs)
