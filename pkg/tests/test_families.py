from fractions import Fraction

import pytest

from k3klein import catalog as cat
from k3klein import families as fam
from k3klein.lattice import genus_fingerprint

X = cat.build("H2X")


def decorations(base, degree):
    return {f.label.decoration for f in fam.classify_ns(base, degree)}


def test_classify_examples():
    fams = {f.label.decoration: f for f in fam.classify_ns("Omega22", 8)}
    assert set(fams) == {"plain", "prime1", "prime2"}
    assert fams["prime1"].fingerprint != fams["prime2"].fingerprint
    assert "star" in decorations("Omega22", 12)
    assert "star" in decorations("Gamma22", 12)
    assert "star" not in decorations("Omega22", 8)


def test_classify_structure():
    for f in fam.classify_ns("Omega22", 12):
        assert f.lattice.rank == 13
        assert f.lattice.det * f.index ** 2 == fam.classify_ns("Omega22", 12)[0].lattice.det
    with pytest.raises(fam.FamilyError):
        fam.classify_ns("Omega22", 0)
    with pytest.raises(fam.FamilyError):
        fam.classify_ns("Nope", 4)


def test_label_text():
    assert fam.FamilyLabel("Gamma22", 12, "prime1").text() == "(Gamma22+<24>)'(1)"
    assert fam.FamilyLabel("Omega22", 8, "plain").text() == "Omega22+<16>"
    assert fam.FamilyLabel("M22", 2, "star").text() == "(M22+<4>)*"
    assert fam.FamilyLabel("Omega22", 6, "prime", "b").text() == "(Omega22+<12>)' [b]"


@pytest.mark.parametrize("d", range(1, 9))
def test_l0_square(d):
    L = fam.ample_class("L0", d)
    # oracle: evaluate the printed formula directly
    v = X.space.parse(f"(x+2*y-e1-f1+e2+f2)/3+{d}*y")
    assert X.space.square(v) == 2 * d == L.square


@pytest.mark.parametrize("h", [2, 3, 5])
def test_l20_2_glue(h):
    L = fam.ample_class("L20_2", h)
    assert L.degree == 4 * (h - 1)
    x = X.space.parse("(b1+c1+d1-3*a1)/2")
    v = tuple((a + b) / 2 for a, b in zip(L.coords, x))
    assert X.embedding.contains(v) or X.embedding.contains(tuple(a / 2 - b for a, b in zip(L.coords, x)))


def test_l20_2_degree_one_is_rejected():
    with pytest.raises(fam.FamilyError):
        fam.ample_class("L20_2", 1)


def test_l44_glue_class():
    assert fam.ample_class("L44", 1).glue_class == "(4,3/2,384)"


@pytest.mark.parametrize("name", fam.AMPLE_NAMES)
def test_ns_x_matches_classification(name):
    row = fam.AMPLE_ROWS[name]
    for d in fam.degrees_of(name, 32):
        L = fam.ample_class(name, fam.parameter_for_degree(name, d))
        label, NS = fam.ns_x(L)
        G = NS.gram
        assert NS.rank == 13 and NS.signature == (1, 12)
        assert all(G[i, i].numerator % 2 == 0 for i in range(13))
        assert label.decoration == row.decoration or (row.decoration == "prime" and label.decoration == "prime")
        fp = genus_fingerprint(NS)
        assert any(f.fingerprint == fp for f in fam.classify_ns("Omega22", d))


def test_l0_odd_correspondence():
    for d in (1, 3, 5):
        for route in ("tau", "phi"):
            c = fam.correspondence("L0", d, route)
            assert c.ns_z.label == fam.FamilyLabel("Gamma22", 2 * d, "prime") and c.ns_z.divisor == 1
            assert c.ns_y.label == fam.FamilyLabel("M22", d, "prime") and c.ns_y.divisor == 2


def test_l22b_route_split():
    for h in (0, 1, 2):
        d = 4 * h + 2
        tau = fam.correspondence("L22b", h, "tau")
        phi = fam.correspondence("L22b", h, "phi")
        assert tau.ns_z.label == fam.FamilyLabel("Gamma22", d // 2, "plain") and tau.ns_z.divisor == 2
        assert phi.ns_z.label == fam.FamilyLabel("Gamma22", 2 * d, "star") and phi.ns_z.divisor == 1


def test_l20_2_zero_mod_8():
    for d in (8, 16, 24):
        h = d // 4 + 1
        for route in ("tau", "phi"):
            c = fam.correspondence("L20_2", h, route)
            assert c.ns_z.label.base == "Gamma22" and c.ns_z.label.degree == d // 2
            assert c.ns_z.label.decoration in ("prime1", "prime2")
            assert c.ns_y.label == fam.FamilyLabel("M22", d // 4, "plain") and c.ns_y.divisor == 4


def test_correspondence_json():
    data = fam.correspondence("L0", 3, "tau").to_json()
    assert data["d"] == 3 and data["Z"]["text"] == "(Gamma22+<12>)'"


def test_divisor_examples():
    for d in (1, 5, 9):
        ds = fam.divisor_set("L0", d, "Y")
        q = Fraction(d + 3, 4)
        assert ds.chis == [q, q, Fraction(d - 1, 4), q] == ds.expected
    for h in (0, 1, 2):
        ds = fam.divisor_set("L22a", h, "Y")
        d = 4 * h + 2
        assert ds.chis == [Fraction(d + 2, 4)] * 4
    for r in fam.table2(40):
        assert r["sum"] == r["d"] + 2


def test_divisors_are_integral_with_nonnegative_chi():
    for r in fam.table2(40):
        assert r["integral"]
        assert all(c >= 0 and c.denominator == 1 for c in r["chi"])


def test_dihedral_case():
    assert fam.dihedral_flag("L0", 2)
    assert not fam.dihedral_flag("L0", 1)
    assert not fam.dihedral_flag("L22b", 0)
    with pytest.raises(fam.DihedralCase, match="dihedral"):
        fam.divisor_set("L0", 2, "Y")


def test_parity_flip_breaks_integrality():
    assert fam.divisor_set("L0", 1, "Y").all_integral
    assert not fam.divisor_set("L0", 1, "Y", "3mod4").all_integral
    assert not fam.divisor_set("L22b", 1, "Y", "even").all_integral
    assert not fam.divisor_set("L0", 3, "Ztau", "even").all_integral


def test_printed_d4_gives_wrong_chi():
    ds = fam.divisor_set("L4m4", 1, "Y", printed=True)
    d = 12
    assert ds.chis[3] == Fraction(d, 4) - 4
    assert sum(ds.chis) != d + 2
    good = fam.divisor_set("L4m4", 1, "Y")
    assert good.chis == good.expected and sum(good.chis) == d + 2


def test_unknown_inputs():
    with pytest.raises(fam.FamilyError):
        fam.ample_class("L9", 1)
    with pytest.raises(fam.FamilyError):
        fam.parameter_for_degree("L20_1", 6)
    with pytest.raises(fam.FamilyError):
        fam.divisor_set("L0", 1, "W")
