from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given

from strategies import rational_maps
from willmore_sym.errors import FieldMixError, ParseError
from willmore_sym.potentials import (
    IsotropicQuadruple,
    WeierstrassData,
    catenoid_data,
    lemma_family,
    reflection_spec_phat,
    twistor_quadruple,
)
from willmore_sym.potfile import (
    PotentialFile,
    dump_potential_file,
    parse_potential_file,
    read_potential_file,
    write_potential_file,
)
from willmore_sym.ratfun import MoebiusSymmetry

DATA = Path(__file__).resolve().parents[1] / "data"


def test_round_trip_all_sections(tmp_path):
    pf = PotentialFile(lemma_family(3), reflection_spec_phat(2), catenoid_data())
    path = tmp_path / "p.pot"
    write_potential_file(path, pf)
    back = read_potential_file(path)
    assert back.quadruple == pf.quadruple
    assert back.weierstrass == pf.weierstrass
    assert back.symmetry.det_flag == pf.symmetry.det_flag
    assert dump_potential_file(back) == path.read_text()


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.pot")))
def test_shipped_files_are_canonical(name):
    text = (DATA / name).read_text()
    assert dump_potential_file(parse_potential_file(text)) == text


def test_comments_blank_lines_and_named_mu():
    text = """
# lemma family, m = 1
[quadruple]
f1 = num: [0, 0, 0, -2] den: [1]   # -2 z^3
f2 = num: [0, 0, (0)+(1i)*sqrt(3)] den: [1]
f3 = num: [0, 0, (0)+(1i)*sqrt(3)] den: [1]
f4 = num: [0, -2] den: [1]

[symmetry]
mu = antipodal
s_hat1 = 1, 0, 0, 0; 0, 1, 0, 0; 0, 0, 1, 0; 0, 0, 0, 1
s_hat2 = 1, 0; 0, 1
"""
    pf = parse_potential_file(text)
    assert pf.quadruple == lemma_family(1)
    assert pf.symmetry.mu.matrix == MoebiusSymmetry.antipodal().matrix
    assert pf.symmetry.det_flag == 2
    assert pf.weierstrass is None


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("   \n# only a comment\n", 1),
    ("f1 = num: [1] den: [1]", 1),
    ("[quadruple]\nf1 = num: [1] den: [1]\n", 1),
    ("[weierstrass]\nh = num: [1] den: [1]\ng = num: [1 den: [1]\n", 3),
    ("[weierstrass]\nh = num: [1] den: [1]\nh = num: [1] den: [1]\n", 3),
    ("[weierstrass]\nh = num: [1] den: [1]\nx = 1\n", 3),
    ("[nothing]\n", 1),
    ("[weierstrass]\nh = num: [1] den: [0]\ng = num: [1] den: [1]\n", 2),
    ("[symmetry]\nmu = sideways\ns_hat1 = 1\ns_hat2 = 1\n", 2),
    ("[symmetry]\nmu = reflection\ns_hat1 = 1, 0; 0\ns_hat2 = 1\n", 3),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_potential_file(text)
    assert exc.value.line == line


def test_mixed_radicands_in_a_quadruple():
    text = ("[quadruple]\nf1 = num: [(0+0i)+(1+0i)*sqrt(2)] den: [1]\n"
            "f2 = num: [(0+0i)+(1+0i)*sqrt(3)] den: [1]\nf3 = num: [1] den: [1]\nf4 = num: [1] den: [1]\n")
    with pytest.raises(FieldMixError):
        parse_potential_file(text)


def test_symmetry_must_be_signature_orthogonal():
    text = "[symmetry]\nmu = reflection\ns_hat1 = 2, 0, 0, 0; 0, 1, 0, 0; 0, 0, 1, 0; 0, 0, 0, 1\ns_hat2 = 1\n"
    with pytest.raises(ParseError):
        parse_potential_file(text)


@given(rational_maps(surd=15), rational_maps(surd=15), rational_maps(), rational_maps(surd=15))
def test_round_trip_is_bit_exact(f1, f2, f3, f4):
    pf = PotentialFile(IsotropicQuadruple(f1, f2, f3, f4), weierstrass=WeierstrassData(f3, f1))
    text = dump_potential_file(pf)
    back = parse_potential_file(text)
    assert back.quadruple == pf.quadruple
    assert dump_potential_file(back) == text


def test_twistor_file_symmetry_survives():
    pf = PotentialFile(twistor_quadruple(), reflection_spec_phat(2))
    back = parse_potential_file(dump_potential_file(pf))
    assert back.symmetry.s_hat2 == pf.symmetry.s_hat2
