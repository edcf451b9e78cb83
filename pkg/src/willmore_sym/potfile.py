"""Plain-text potential files.

A file holds up to three sections; blank lines and ``#`` comments are
ignored::

    [quadruple]
    f1 = num: [0, 0, 0, -2] den: [1]
    ...
    [symmetry]
    mu = [0, -1, 1, 0] anti
    s_hat1 = 1, 0, 0, 0; 0, 1, 0, 0; 0, 0, 1, 0; 0, 0, 0, -1
    s_hat2 = 1, 0; 0, 1
    m = 2
    [weierstrass]
    h = num: [1] den: [1]
    g = num: [0, 1] den: [1]

``mu`` also accepts the names ``reflection`` and ``antipodal``.  Writing
a parsed file back with :func:`dump_potential_file` reproduces any file
that is already in canonical form byte for byte.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FieldMixError, ParseError
from .potentials import IsotropicQuadruple, SymmetrySpec, WeierstrassData
from .ratfun import MoebiusSymmetry, RationalMap, Surd, format_scalar, parse_scalar

SECTION_KEYS = {
    "quadruple": ("f1", "f2", "f3", "f4"),
    "symmetry": ("mu", "s_hat1", "s_hat2", "m"),
    "weierstrass": ("h", "g"),
}
_OPTIONAL = {"symmetry": {"m"}}


@dataclass
class PotentialFile:
    quadruple: IsotropicQuadruple | None = None
    symmetry: SymmetrySpec | None = None
    weierstrass: WeierstrassData | None = None

    def is_empty(self) -> bool:
        return self.quadruple is None and self.symmetry is None and self.weierstrass is None


def _parse_map(text: str, line: int) -> RationalMap:
    try:
        f = RationalMap.from_text(text)
        f.field_d
        return f
    except FieldMixError as exc:
        raise FieldMixError(f"line {line}: {exc}") from None
    except ParseError as exc:
        raise ParseError(str(exc), line) from None
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), line) from None


def _parse_scalar(text: str, line: int) -> Surd:
    try:
        return parse_scalar(text.strip())
    except (ParseError, ValueError) as exc:
        raise ParseError(str(exc), line) from None


def _parse_matrix(text: str, line: int) -> tuple:
    out = tuple(tuple(_parse_scalar(x, line) for x in r.split(",")) for r in text.split(";"))
    if len({len(r) for r in out}) != 1:
        raise ParseError("ragged matrix", line)
    return out


def _parse_mu(text: str, line: int) -> MoebiusSymmetry:
    t = text.strip()
    if t == "reflection":
        return MoebiusSymmetry.reflection()
    if t == "antipodal":
        return MoebiusSymmetry.antipodal()
    m = re.fullmatch(r"\[(?P<c>[^\]]*)\]\s*(?P<kind>anti|holo)", t)
    if not m:
        raise ParseError(f"bad mu {t!r}; expected '[a, b, c, d] anti|holo'", line)
    coeffs = [_parse_scalar(x, line) for x in m.group("c").split(",")]
    if len(coeffs) != 4:
        raise ParseError("mu needs four coefficients", line)
    try:
        return MoebiusSymmetry(*coeffs, m.group("kind") == "anti")
    except ValueError as exc:
        raise ParseError(str(exc), line) from None


def parse_potential_file(text: str) -> PotentialFile:
    """Parse file contents; errors carry 1-based line numbers."""
    sections: dict = {}
    where: dict = {}
    current = None
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        m = re.fullmatch(r"\[(\w+)\]", s)
        if m:
            current = m.group(1)
            if current not in SECTION_KEYS:
                raise ParseError(f"unknown section [{current}]", no)
            if current in sections:
                raise ParseError(f"duplicate section [{current}]", no)
            sections[current] = {}
            where[current] = no
            continue
        if current is None:
            raise ParseError("content before the first section", no)
        if "=" not in s:
            raise ParseError(f"expected 'key = value', got {s!r}", no)
        key, val = (p.strip() for p in s.split("=", 1))
        if key not in SECTION_KEYS[current]:
            raise ParseError(f"unknown key {key!r} in [{current}]", no)
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", no)
        sections[current][key] = (val, no)
    if not sections:
        raise ParseError("empty potential file", 1)
    for name, body in sections.items():
        missing = [k for k in SECTION_KEYS[name] if k not in body and k not in _OPTIONAL.get(name, ())]
        if missing:
            raise ParseError(f"[{name}] is missing {', '.join(missing)}", where[name])

    out = PotentialFile()
    if "quadruple" in sections:
        body = sections["quadruple"]
        fs = [_parse_map(*body[k]) for k in SECTION_KEYS["quadruple"]]
        ds = {f.field_d for f in fs} - {0}
        if len(ds) > 1:
            raise FieldMixError(f"line {where['quadruple']}: quadruple mixes radicands {sorted(ds)}")
        out.quadruple = IsotropicQuadruple(*fs)
    if "symmetry" in sections:
        body = sections["symmetry"]
        mu = _parse_mu(*body["mu"])
        s1 = _parse_matrix(*body["s_hat1"])
        s2 = _parse_matrix(*body["s_hat2"])
        flag = 2
        if "m" in body:
            val, no = body["m"]
            if val not in ("1", "2"):
                raise ParseError("m must be 1 or 2", no)
            flag = int(val)
        try:
            out.symmetry = SymmetrySpec(mu, s1, s2, flag)
        except ValueError as exc:
            raise ParseError(str(exc), where["symmetry"]) from None
    if "weierstrass" in sections:
        body = sections["weierstrass"]
        out.weierstrass = WeierstrassData(_parse_map(*body["h"]), _parse_map(*body["g"]))
    return out


def _fmt_matrix(m) -> str:
    return "; ".join(", ".join(format_scalar(Surd.coerce(x)) for x in row) for row in m)


def dump_potential_file(pf: PotentialFile) -> str:
    """Canonical text for ``pf``; inverse of :func:`parse_potential_file`."""
    lines = []
    if pf.quadruple is not None:
        lines.append("[quadruple]")
        for k, f in zip(SECTION_KEYS["quadruple"], pf.quadruple.fs):
            lines.append(f"{k} = {f.to_text()}")
    if pf.symmetry is not None:
        sp = pf.symmetry
        coeffs = ", ".join(format_scalar(Surd.coerce(x)) for x in sp.mu.matrix)
        kind = "anti" if sp.mu.antiholomorphic else "holo"
        lines += ["[symmetry]", f"mu = [{coeffs}] {kind}",
                  f"s_hat1 = {_fmt_matrix(sp.s_hat1)}", f"s_hat2 = {_fmt_matrix(sp.s_hat2)}",
                  f"m = {sp.det_flag}"]
    if pf.weierstrass is not None:
        lines += ["[weierstrass]", f"h = {pf.weierstrass.h.to_text()}", f"g = {pf.weierstrass.g.to_text()}"]
    return "\n".join(lines) + "\n"


def read_potential_file(path) -> PotentialFile:
    with open(path, encoding="utf-8") as fh:
        return parse_potential_file(fh.read())


def write_potential_file(path, pf: PotentialFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_potential_file(pf))
