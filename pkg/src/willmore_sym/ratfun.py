"""Univariate rational functions over Q(i)(sqrt d) or complex floats.

Two coefficient domains share one :class:`RationalMap` type:

* exact mode: every coefficient is a :class:`Surd`; maps are kept reduced
  (``gcd(num, den) = 1``, monic denominator), so equality and zero tests
  are decidable.
* approximate mode: coefficients are Python ``complex``; zero tests go
  through sampled residuals instead (:func:`rf_is_zero_approx`).

The antiholomorphic pullback ``z -> conj(f(mu(z)))`` is always normalized
back into a rational map of the forward variable, which turns every
symmetry condition into a polynomial identity.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import ApproxModeError, FieldMixError, ParseError, PoleError

__all__ = [
    "Surd",
    "RationalMap",
    "MoebiusSymmetry",
    "rf_eval",
    "rf_derivative",
    "mu_pullback_conjugate",
    "rf_is_zero",
    "rf_is_zero_approx",
    "rf_relative_residual",
    "parse_scalar",
    "format_scalar",
    "I",
]


def _is_squarefree(n: int) -> bool:
    if n < 0:
        return False
    if n in (0, 1):
        return True
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _gmul(a, b, c, d):
    # (a + ib)(c + id)
    return a * c - b * d, a * d + b * c


_F0 = Fraction(0)


def _mk(re, im, sre, sim, d):
    # trusted constructor: components are Fractions, already normalized
    obj = object.__new__(Surd)
    object.__setattr__(obj, "re", re)
    object.__setattr__(obj, "im", im)
    object.__setattr__(obj, "sre", sre)
    object.__setattr__(obj, "sim", sim)
    object.__setattr__(obj, "d", d)
    return obj


class Surd:
    """Exact scalar ``(re + i*im) + (sre + i*sim) * sqrt(d)``.

    ``d`` is a square-free nonnegative integer; ``d == 0`` means the surd
    part is absent.  Scalars with different nonzero ``d`` do not mix.
    """

    __slots__ = ("re", "im", "sre", "sim", "d")

    def __init__(self, re=0, im=0, sre=0, sim=0, d=0):
        re, im, sre, sim = (Fraction(x) for x in (re, im, sre, sim))
        d = int(d)
        if not _is_squarefree(d):
            raise ValueError(f"radicand {d} is not square-free")
        if d == 1:
            re, im, sre, sim, d = re + sre, im + sim, Fraction(0), Fraction(0), 0
        if d == 0 or (sre == 0 and sim == 0):
            if d == 0 and (sre or sim):
                raise ValueError("d = 0 forces a vanishing surd part")
            sre = sim = Fraction(0)
            d = 0
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "sre", sre)
        object.__setattr__(self, "sim", sim)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    # --- construction helpers -------------------------------------------
    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, complex) or isinstance(x, float):
            raise ApproxModeError(f"cannot use floating value {x!r} as an exact scalar")
        raise TypeError(f"cannot coerce {type(x).__name__} to Surd")

    @classmethod
    def sqrt(cls, n: int, coeff=1) -> "Surd":
        """``coeff * sqrt(n)`` with the square part of ``n`` pulled out."""
        if n < 0:
            raise ValueError("negative radicand; multiply by I instead")
        outer, inner = 1, n
        k = 2
        while k * k <= inner:
            while inner % (k * k) == 0:
                inner //= k * k
                outer *= k
            k += 1
        c = Surd.coerce(coeff) * outer
        if inner == 1:
            return c
        return c * cls(0, 0, 1, 0, inner)

    # --- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not (self.re or self.im or self.sre or self.sim)

    def is_real(self) -> bool:
        return self.im == 0 and self.sim == 0

    def is_imaginary(self) -> bool:
        return self.re == 0 and self.sre == 0

    # --- arithmetic ------------------------------------------------------
    def _common_d(self, other: "Surd") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise FieldMixError(f"cannot combine sqrt({self.d}) and sqrt({other.d})")

    def __add__(self, other):
        try:
            other = Surd.coerce(other)
        except (TypeError, ApproxModeError):
            return NotImplemented
        if self.d == 0 and other.d == 0:
            return _mk(self.re + other.re, self.im + other.im, _F0, _F0, 0)
        d = self._common_d(other)
        return Surd(self.re + other.re, self.im + other.im,
                    self.sre + other.sre, self.sim + other.sim, d)

    __radd__ = __add__

    def __neg__(self):
        return _mk(-self.re, -self.im, -self.sre, -self.sim, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = Surd.coerce(other)
        except (TypeError, ApproxModeError):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = Surd.coerce(other)
        except (TypeError, ApproxModeError):
            return NotImplemented
        if self.d == 0 and other.d == 0:
            a, b, c, e = self.re, self.im, other.re, other.im
            if not b and not e:
                return _mk(a * c, _F0, _F0, _F0, 0)
            return _mk(a * c - b * e, a * e + b * c, _F0, _F0, 0)
        d = self._common_d(other)
        a1, b1 = (self.re, self.im), (self.sre, self.sim)
        a2, b2 = (other.re, other.im), (other.sre, other.sim)
        rr = _gmul(*a1, *a2)
        ss = _gmul(*b1, *b2)
        rs = _gmul(*a1, *b2)
        sr = _gmul(*b1, *a2)
        return Surd(rr[0] + d * ss[0], rr[1] + d * ss[1],
                    rs[0] + sr[0], rs[1] + sr[1], d)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero Surd")
        if self.d == 0:
            m2 = self.re * self.re + self.im * self.im
            return _mk(self.re / m2, -self.im / m2, _F0, _F0, 0)
        a, b, d = (self.re, self.im), (self.sre, self.sim), self.d
        # (a + b s)^-1 = (a - b s) / (a^2 - d b^2); the norm lies in Q(i)
        aa = _gmul(*a, *a)
        bb = _gmul(*b, *b)
        nr, ni = aa[0] - d * bb[0], aa[1] - d * bb[1]
        mod2 = nr * nr + ni * ni
        inv = (nr / mod2, -ni / mod2)
        p = _gmul(*a, *inv)
        q = _gmul(-b[0], -b[1], *inv)
        return Surd(p[0], p[1], q[0], q[1], d)

    def __truediv__(self, other):
        try:
            other = Surd.coerce(other)
        except (TypeError, ApproxModeError):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Surd.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Surd(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Surd":
        return _mk(self.re, -self.im, self.sre, -self.sim, self.d)

    # --- comparison / conversion ------------------------------------------
    def _key(self):
        return (self.re, self.im, self.sre, self.sim, self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self.d == 0 and self.im == 0:
            return hash(self.re)
        return hash(self._key())

    def __complex__(self):
        s = math.sqrt(self.d) if self.d else 0.0
        return complex(float(self.re) + float(self.sre) * s,
                       float(self.im) + float(self.sim) * s)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Surd({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = Surd(0, 1)


# ---------------------------------------------------------------------------
# scalar text format
# ---------------------------------------------------------------------------

_NUM = r"\d+(?:\.\d+)?(?:/\d+)?"
_GAUSS_FULL = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")
_REAL_ONLY = re.compile(rf"^[+-]?{_NUM}$")
_IMAG_ONLY = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_SURD = re.compile(r"^\((?P<a>[^()]*)\)\+\((?P<b>[^()]*)\)\*sqrt\((?P<d>\d+)\)$")


def _parse_gauss(s: str) -> tuple[Fraction, Fraction]:
    m = _GAUSS_FULL.match(s)
    if m:
        im = m.group("im")
        im = im + "1" if im in "+-" else im
        return Fraction(m.group("re")), Fraction(im)
    if _REAL_ONLY.match(s):
        return Fraction(s), Fraction(0)
    m = _IMAG_ONLY.match(s)
    if m:
        im = m.group("im")
        im = im + "1" if im in ("", "+", "-") else im
        return Fraction(0), Fraction(im)
    raise ParseError(f"bad scalar {s!r}")


def parse_scalar(text: str) -> Surd:
    """Parse ``a+bi`` or ``(a+bi)+(c+di)*sqrt(d)`` into a :class:`Surd`."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty scalar")
    m = _SURD.match(s)
    if m:
        a = _parse_gauss(m.group("a"))
        b = _parse_gauss(m.group("b"))
        d = int(m.group("d"))
        if not _is_squarefree(d):
            raise ParseError(f"radicand {d} is not square-free")
        return Surd(a[0], a[1], b[0], b[1], d)
    re_, im_ = _parse_gauss(s)
    return Surd(re_, im_)


def _fmt_gauss(re_: Fraction, im_: Fraction) -> str:
    sign = "-" if im_ < 0 else "+"
    return f"{re_}{sign}{abs(im_)}i"


def format_scalar(x) -> str:
    if isinstance(x, Surd):
        g = _fmt_gauss(x.re, x.im)
        if x.d == 0:
            return g
        return f"({g})+({_fmt_gauss(x.sre, x.sim)})*sqrt({x.d})"
    x = complex(x)
    sign = "-" if x.imag < 0 or (x.imag == 0 and math.copysign(1, x.imag) < 0) else "+"
    return f"{x.real!r}{sign}{abs(x.imag)!r}i"


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient tuples, lowest degree first)
# ---------------------------------------------------------------------------

def _zero_like(c):
    return Surd(0) if isinstance(c, Surd) else 0j


def _iszero(c) -> bool:
    return c.is_zero() if isinstance(c, Surd) else c == 0


def _trim(p: Sequence) -> tuple:
    p = list(p)
    while p and _iszero(p[-1]):
        p.pop()
    return tuple(p)


def _padd(p, q):
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        if k < len(p) and k < len(q):
            out.append(p[k] + q[k])
        elif k < len(p):
            out.append(p[k])
        else:
            out.append(q[k])
    return _trim(out)


def _pneg(p):
    return tuple(-c for c in p)


def _pscale(p, c):
    return _trim([a * c for a in p])


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _iszero(a):
            continue
        for j, b in enumerate(q):
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    z = _zero_like(p[0])
    return _trim([z if c is None else c for c in out])


def _pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    lead_inv = 1 / q[-1] if isinstance(q[-1], Surd) else 1.0 / q[-1]
    dq = len(q) - 1
    if len(p) - 1 < dq:
        return (), _trim(p)
    quo = [None] * (len(p) - dq)
    for k in range(len(p) - 1, dq - 1, -1):
        c = p[k] * lead_inv
        quo[k - dq] = c
        if _iszero(c):
            continue
        for j in range(dq + 1):
            p[k - dq + j] = p[k - dq + j] - c * q[j]
    return _trim(quo), _trim(p[:dq])


def _pmonic(p):
    inv = p[-1].inverse()
    return tuple(c * inv for c in p)


def _pgcd(p, q):
    """Monic gcd over the exact coefficient field."""
    a, b = _trim(p), _trim(q)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return ()
    return _pmonic(a)


def _pderiv(p):
    return _trim([p[k] * k for k in range(1, len(p))])


def _ppow(p, n):
    out = (Surd(1),) if (p and isinstance(p[0], Surd)) else (1 + 0j,)
    for _ in range(n):
        out = _pmul(out, p)
    return out


def _peval(p, z):
    acc = 0
    for c in reversed(p):
        acc = acc * z + c
    return acc


def _to_complex(p):
    return tuple(complex(c) for c in p)


def _is_exact_poly(p) -> bool:
    return all(isinstance(c, Surd) for c in p)


def _coerce_coeff(c, exact: bool):
    if exact:
        return Surd.coerce(c)
    return complex(c)


# ---------------------------------------------------------------------------
# RationalMap
# ---------------------------------------------------------------------------

class RationalMap:
    """``num(z) / den(z)`` with coefficient tuples stored lowest degree first."""

    __slots__ = ("num", "den", "var", "exact")

    def __init__(self, num: Iterable, den: Iterable = (1,), var: str = "z", *, _reduced=False):
        num = list(num)
        den = list(den)
        exact = all(not isinstance(c, (complex, float)) for c in num + den)
        num = _trim([_coerce_coeff(c, exact) for c in num])
        den = _trim([_coerce_coeff(c, exact) for c in den])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if exact and not _reduced:
            num, den = self._reduce(num, den)
        elif not exact and not num:
            den = (1 + 0j,)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMap is immutable")

    @staticmethod
    def _reduce(num, den):
        if not num:
            return (), (Surd(1),)
        g = _pgcd(num, den)
        if len(g) > 1:
            num, _ = _pdivmod(num, g)
            den, _ = _pdivmod(den, g)
        inv = den[-1].inverse()
        return tuple(c * inv for c in num), tuple(c * inv for c in den)

    # --- constructors ----------------------------------------------------
    @classmethod
    def const(cls, c, var="z") -> "RationalMap":
        return cls((c,), (Surd(1) if not isinstance(c, (complex, float)) else 1 + 0j,), var)

    @classmethod
    def monomial(cls, c, k: int, var="z") -> "RationalMap":
        """``c * z**k`` for any integer ``k``."""
        exact = not isinstance(c, (complex, float))
        one = Surd(1) if exact else 1 + 0j
        zero = Surd(0) if exact else 0j
        if k >= 0:
            return cls([zero] * k + [c], [one], var)
        return cls([c], [zero] * (-k) + [one], var)

    @classmethod
    def identity(cls, var="z") -> "RationalMap":
        return cls((Surd(0), Surd(1)), (Surd(1),), var)

    @classmethod
    def zero(cls, var="z") -> "RationalMap":
        return cls((), (Surd(1),), var)

    @classmethod
    def poly(cls, coeffs: Iterable, var="z") -> "RationalMap":
        coeffs = list(coeffs)
        exact = all(not isinstance(c, (complex, float)) for c in coeffs)
        return cls(coeffs, (Surd(1) if exact else 1 + 0j,), var)

    # --- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        """max(deg num, deg den); the zero map has degree 0."""
        return max(len(self.num), len(self.den)) - 1

    @property
    def field_d(self) -> int:
        if not self.exact:
            return 0
        ds = {c.d for c in self.num + self.den if c.d}
        if len(ds) > 1:
            raise FieldMixError(f"mixed radicands {sorted(ds)}")
        return ds.pop() if ds else 0

    def _coerce(self, other) -> "RationalMap":
        if isinstance(other, RationalMap):
            return other
        return RationalMap.const(other, self.var)

    def _align(self, other):
        a, b = self, self._coerce(other)
        if a.exact != b.exact:
            a, b = a.to_approx(), b.to_approx()
        return a, b

    def to_approx(self) -> "RationalMap":
        if not self.exact:
            return self
        return RationalMap(_to_complex(self.num), _to_complex(self.den), self.var)

    # --- arithmetic ------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        if a.den == b.den:
            return RationalMap(_padd(a.num, b.num), a.den, a.var)
        num = _padd(_pmul(a.num, b.den), _pmul(b.num, a.den))
        return RationalMap(num, _pmul(a.den, b.den), a.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalMap(_pneg(self.num), self.den, self.var, _reduced=True)

    def __sub__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        if a.exact:
            # cross-cancel first to keep the gcd step small
            g1 = _pgcd(a.num, b.den) if a.num else ()
            g2 = _pgcd(b.num, a.den) if b.num else ()
            an, bd = (a.num, b.den) if len(g1) <= 1 else (_pdivmod(a.num, g1)[0], _pdivmod(b.den, g1)[0])
            bn, ad = (b.num, a.den) if len(g2) <= 1 else (_pdivmod(b.num, g2)[0], _pdivmod(a.den, g2)[0])
            num, den = _pmul(an, bn), _pmul(ad, bd)
            if not num:
                return RationalMap.zero(a.var)
            inv = den[-1].inverse()
            return RationalMap(_pscale(num, inv), _pscale(den, inv), a.var, _reduced=True)
        return RationalMap(_pmul(a.num, b.num), _pmul(a.den, b.den), a.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational map")
        return self * RationalMap(other.den, other.num, other.var)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RationalMap.const(Surd(1) if self.exact else 1 + 0j, self.var) / self) ** (-n)
        out = RationalMap.const(Surd(1) if self.exact else 1 + 0j, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # --- comparisons -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        if not (self.exact and other.exact):
            return rf_relative_residual(self, other) < 1e-10
        return _pmul(self.num, other.den) == _pmul(other.num, self.den)

    def __hash__(self):
        if not self.exact:
            raise TypeError("approximate rational maps are unhashable")
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return rf_is_zero(self)

    # --- calculus / transforms ---------------------------------------------
    def derivative(self) -> "RationalMap":
        return rf_derivative(self)

    def conj_coeffs(self) -> "RationalMap":
        """The map ``z -> conj(f(conj z))`` (coefficient conjugation)."""
        return RationalMap(tuple(c.conjugate() for c in self.num),
                           tuple(c.conjugate() for c in self.den), self.var, _reduced=self.exact)

    def compose_moebius(self, a, b, c, d) -> "RationalMap":
        """``f((a z + b) / (c z + d))`` as a rational map in ``z``."""
        exact = self.exact and not any(isinstance(x, (complex, float)) for x in (a, b, c, d))
        src = self if exact else self.to_approx()
        conv = (lambda x: Surd.coerce(x)) if exact else complex
        lin_num = _trim([conv(b), conv(a)])
        lin_den = _trim([conv(d), conv(c)])
        n = max(len(src.num), len(src.den)) - 1
        pows_num = [_ppow(lin_num, k) for k in range(n + 1)]
        pows_den = [_ppow(lin_den, k) for k in range(n + 1)]

        def homog(p):
            acc = ()
            for k, ck in enumerate(p):
                if _iszero(ck):
                    continue
                acc = _padd(acc, _pscale(_pmul(pows_num[k], pows_den[n - k]), ck))
            return acc

        return RationalMap(homog(src.num), homog(src.den), self.var)

    def substitute_var(self, var: str) -> "RationalMap":
        return RationalMap(self.num, self.den, var, _reduced=self.exact)

    def __call__(self, z):
        return rf_eval(self, z)

    # --- text --------------------------------------------------------------
    def to_text(self) -> str:
        n = ", ".join(format_scalar(c) for c in self.num) if self.num else format_scalar(
            Surd(0) if self.exact else 0j)
        d = ", ".join(format_scalar(c) for c in self.den)
        return f"num: [{n}] den: [{d}]"

    @classmethod
    def from_text(cls, text: str, var="z") -> "RationalMap":
        m = re.match(r"^\s*num:\s*\[(?P<n>[^\]]*)\]\s*den:\s*\[(?P<d>[^\]]*)\]\s*$", text)
        if not m:
            raise ParseError(f"expected 'num: [...] den: [...]', got {text!r}")
        num = [parse_scalar(s) for s in m.group("n").split(",") if s.strip()]
        den = [parse_scalar(s) for s in m.group("d").split(",") if s.strip()]
        if not _trim(den):
            raise ParseError("zero denominator")
        # radicand consistency is checked by reduction
        return cls(num, den, var)

    def __repr__(self):
        return f"RationalMap({self.to_text()!r})"


# ---------------------------------------------------------------------------
# Moebius symmetries
# ---------------------------------------------------------------------------

def _mat_mul(m1, m2):
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def _conj(x):
    return x.conjugate()


@dataclass(frozen=True)
class MoebiusSymmetry:
    """``z -> (a w + b) / (c w + d)`` with ``w = conj(z)`` when antiholomorphic."""

    a: object = 1
    b: object = 0
    c: object = 0
    d: object = 1
    antiholomorphic: bool = True

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if (isinstance(det, Surd) and det.is_zero()) or (not isinstance(det, Surd) and det == 0):
            raise ValueError("degenerate Moebius map: ad - bc = 0")

    @classmethod
    def reflection(cls) -> "MoebiusSymmetry":
        """mu(z) = conj(z)."""
        return cls(Surd(1), Surd(0), Surd(0), Surd(1), True)

    @classmethod
    def antipodal(cls) -> "MoebiusSymmetry":
        """mu(z) = -1/conj(z), the fixed-point-free involution of the sphere."""
        return cls(Surd(0), Surd(-1), Surd(1), Surd(0), True)

    @classmethod
    def glide(cls, c0) -> "MoebiusSymmetry":
        """mu(z) = conj(z) + c0."""
        return cls(Surd(1), c0, Surd(0), Surd(1), True)

    @property
    def matrix(self):
        return (self.a, self.b, self.c, self.d)

    def __call__(self, z):
        w = np.conj(z) if self.antiholomorphic else z
        a, b, c, d = (complex(x) for x in self.matrix)
        return (a * w + b) / (c * w + d)

    def compose(self, other: "MoebiusSymmetry") -> "MoebiusSymmetry":
        """``self o other``."""
        m2 = tuple(_conj(x) for x in other.matrix) if self.antiholomorphic else other.matrix
        a, b, c, d = _mat_mul(self.matrix, m2)
        return MoebiusSymmetry(a, b, c, d, self.antiholomorphic != other.antiholomorphic)

    def is_identity(self, tol: float = 1e-12) -> bool:
        if self.antiholomorphic:
            return False
        a, b, c, d = self.matrix
        if all(isinstance(x, Surd) for x in self.matrix):
            return b.is_zero() and c.is_zero() and a == d
        a, b, c, d = (complex(x) for x in self.matrix)
        scale = max(abs(a), abs(d))
        return abs(b) <= tol * scale and abs(c) <= tol * scale and abs(a - d) <= tol * scale

    def order(self, max_order: int = 64) -> int | None:
        """Smallest n with mu^n = id, or ``None`` if none up to ``max_order``."""
        power = self
        for n in range(1, max_order + 1):
            if power.is_identity():
                return n
            power = self.compose(power)
        return None

    def forward_conjugate(self):
        """Coefficients of the holomorphic map ``z -> conj(mu(z))``."""
        if not self.antiholomorphic:
            raise ValueError("forward_conjugate needs an antiholomorphic map")
        return tuple(_conj(x) for x in self.matrix)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def rf_eval(f: RationalMap, z):
    """Evaluate ``f`` at ``z``; exact when ``z`` is a Surd and ``f`` is exact."""
    if isinstance(z, (Surd, int, Fraction)) and f.exact:
        z = Surd.coerce(z)
        q = _peval(f.den, z)
        if q.is_zero():
            raise PoleError(f"pole at {z}")
        return _peval(f.num, z) / q if f.num else Surd(0)
    num, den = _to_complex(f.num), _to_complex(f.den)
    zc = np.asarray(z, dtype=complex)
    q = _peval(den, zc)
    scale = _peval(tuple(abs(c) for c in den), np.abs(zc))
    if np.any(np.abs(q) <= 1e-14 * np.maximum(scale, 1e-300)):
        raise PoleError(f"pole of {f!r} at {z}")
    val = _peval(num, zc) / q if num else np.zeros_like(zc)
    return complex(val) if np.ndim(val) == 0 else val


def rf_derivative(f: RationalMap) -> RationalMap:
    p, q = f.num, f.den
    num = _padd(_pmul(_pderiv(p), q), _pneg(_pmul(p, _pderiv(q))))
    return RationalMap(num, _pmul(q, q), f.var)


def mu_pullback_conjugate(f: RationalMap, mu: MoebiusSymmetry) -> RationalMap:
    """The rational map ``g`` with ``g(z) = conj(f(mu(z)))``.

    ``conj(f(mu(z))) = fbar(conj(mu(z)))`` where ``fbar`` has conjugated
    coefficients and ``conj(mu(z))`` is holomorphic in ``z``.
    """
    if not mu.antiholomorphic:
        raise ValueError("mu_pullback_conjugate needs an antiholomorphic mu")
    if f.exact:
        f.field_d
        coeffs = [x for x in mu.matrix if isinstance(x, Surd)]
        for x in coeffs:
            if x.d and f.field_d and x.d != f.field_d:
                raise FieldMixError(f"mu uses sqrt({x.d}), f uses sqrt({f.field_d})")
    return f.conj_coeffs().compose_moebius(*mu.forward_conjugate())


def rf_is_zero(f: RationalMap) -> bool:
    if not f.exact:
        raise ApproxModeError("rf_is_zero needs exact mode; use rf_is_zero_approx")
    return not f.num


def _sample_points(n_per_circle: int = 25) -> np.ndarray:
    k = np.arange(n_per_circle)
    ang = 2 * np.pi * (k + 0.5) / n_per_circle
    return np.concatenate([0.5 * np.exp(1j * ang), 2.0 * np.exp(1j * (ang + np.pi / n_per_circle))])


def rf_relative_residual(f: RationalMap, g: RationalMap) -> float:
    """max|f - g| / max(|f|, |g|) over 50 points on the circles |z| = 1/2, 2."""
    pts = _sample_points()
    fv = rf_eval(f.to_approx(), pts) if f.num else np.zeros(len(pts), complex)
    gv = rf_eval(g.to_approx(), pts) if g.num else np.zeros(len(pts), complex)
    scale = max(np.max(np.abs(fv)), np.max(np.abs(gv)))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(fv - gv)) / scale)


def rf_is_zero_approx(f: RationalMap, scale: float | None = None, tol: float = 1e-10) -> bool:
    """Floating zero test: sampled ``|f| < tol * scale``.

    Without ``scale`` the reference magnitude is the coefficient 1-norm of
    the numerator evaluated on the sample circles.
    """
    pts = _sample_points()
    if not f.num:
        return True
    fa = f.to_approx()
    vals = np.abs(rf_eval(fa, pts))
    if scale is None:
        ref_num = _peval(tuple(abs(c) for c in fa.num), np.abs(pts))
        ref_den = np.abs(_peval(fa.den, pts))
        scale = float(np.max(ref_num / ref_den))
    return bool(np.max(vals) < tol * max(scale, 1e-300))


def gcd_maps(maps: Sequence[RationalMap]):
    return reduce(lambda a, b: _pgcd(a, b), [m.num for m in maps])
