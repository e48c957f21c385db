import pytest

from k3klein import catalog as cat
from k3klein.action import coinvariant_sublattice, phi_star, rho_star, tau_star
from k3klein.isometry import is_isometric, vectors_of_norm
from k3klein.lattice import (discriminant_group, orthogonal_complement, root_lattice, same_subgroup,
                             sublattice_index, twist)

K3_LIKE = ("Lambda_K3", "H2X", "H2Ztau", "H2Zphi", "H2Y_via_tau", "H2Y_via_phi")

RANK_SIGNATURE = {
    "Lambda_K3": (22, (3, 19)), "W": (22, (3, 19)), "H2X": (22, (3, 19)), "Omega22": (12, (0, 12)),
    "InvariantI": (10, (3, 7)), "Delta": (12, (0, 12)), "N": (8, (0, 8)), "M22": (12, (0, 12)),
    "GammaTau": (12, (0, 12)), "GammaPhi": (12, (0, 12)), "D4_2": (4, (0, 4)), "NS_Xomega": (20, (1, 19)),
    "H2Ztau": (22, (3, 19)), "H2Zphi": (22, (3, 19)), "H2Y_via_tau": (22, (3, 19)), "H2Y_via_phi": (22, (3, 19)),
}


@pytest.mark.parametrize("name", cat.NAMES)
def test_entry_is_even_with_stated_rank_and_signature(name):
    L = cat.build(name).lattice
    G = L.gram
    assert G.is_integral() and all(G[i, i].numerator % 2 == 0 for i in range(G.nrows))
    assert (L.rank, L.signature) == RANK_SIGNATURE[name]


@pytest.mark.parametrize("name", K3_LIKE)
def test_k3_genus(name):
    L = cat.build(name).lattice
    assert abs(L.det) == 1 and L.signature == (3, 19)


@pytest.mark.parametrize("name", [n for n in cat.NAMES if cat.build(n).glue_names])
def test_glue_vectors_are_integral_and_even(name):
    e = cat.build(name)
    for g in e.glue_names:
        v = e.space[g]
        assert e.embedding.contains(v), g
        assert all(e.space.pair(v, r).denominator == 1 for r in e.embedding.basis.rows), g
        assert e.space.square(v).numerator % 2 == 0 and e.space.square(v).denominator == 1, g


def test_h2x_over_w():
    assert sublattice_index(cat.build("W").embedding, cat.build("H2X").embedding) == 3 ** 5 * 12


def test_omega22_data():
    e = cat.build("Omega22")
    assert e.lattice.rank == 12 and e.lattice.signature == (0, 12)
    assert discriminant_group(e.lattice).order == 1024


def test_nikulin_lattice_roots():
    N = cat.build("N").lattice
    assert N.rank == 8 and abs(N.det) == 2 ** 6
    assert len(vectors_of_norm(N, 2)) == 8  # only +-n_i


def test_symbols():
    X = cat.build("H2X")
    assert X.symbol("gamma") == X.space.parse("(x-y-e1+e2-f1+f2)/3")
    W = cat.build("W")
    assert W.space.square(cat.symbol(W, "v1")) == 4
    Y = cat.build("H2Y_via_tau")
    assert Y.symbol("mu1") == Y.space.parse("(m1+m2+m3+m4+m5+m6+m7+m8)/2")
    assert Y.symbol("mu2") == Y.space.parse("(n1+n2+n3+n4+m1+m2+m7+m8)/2")
    Yp = cat.build("H2Y_via_phi")
    assert Yp.symbol("mu2p") == Yp.space.parse("(n1+n2+n3+n6+m3+m4+m5+m8)/2")


def test_unknown_names():
    with pytest.raises(cat.CatalogError, match="unknown catalog entry"):
        cat.build("Nope")
    with pytest.raises(KeyError):
        cat.build("H2X").symbol("nope")


def test_omega_is_complement_of_invariant():
    H = cat.build("H2X").embedding
    comp = orthogonal_complement(cat.build("InvariantI").embedding, H)
    assert same_subgroup(comp, cat.build("Omega22").embedding)


def test_three_e8_2_copies():
    e8_2 = twist(root_lattice("E", 8), 2)
    subs = [coinvariant_sublattice([g]) for g in (tau_star(), phi_star(), rho_star())]
    omega = cat.build("Omega22").embedding
    for E in subs:
        assert E.rank == 8 and is_isometric(E.lattice, e8_2)
        assert all(omega.contains(r) for r in E.basis.rows)
    assert not any(same_subgroup(a, b) for i, a in enumerate(subs) for b in subs[:i])


def test_printed_phi_glue_is_not_integral():
    # the printed x'2 and h1..h4 do not lie in their host; the repaired ones do
    Z = cat.build("H2Zphi")
    assert not Z.embedding.contains(Z.space.parse(cat.GAMMA_PHI_GLUE_PRINTED["xp2"]))
    assert Z.embedding.contains(Z.space.parse(cat.GAMMA_PHI_GLUE["xp2"]))
    Y = cat.build("H2Y_via_phi")
    for h in ("h1", "h2", "h3", "h4"):
        assert not Y.embedding.contains(Y.space.parse(cat.YPHI_GLUE_PRINTED[h])), h
        assert Y.embedding.contains(Y.space.parse(cat.YPHI_GLUE[h])), h


def test_ns_xomega():
    e = cat.build_ns_xomega()
    assert e.lattice.signature == (1, 19)
    assert abs(e.lattice.det) == 12
    for s in ("t", "r", "q"):
        assert e.space.square(e.space[s]) == -2


def test_to_json_has_symbol_table():
    data = cat.build("N").to_json()
    assert data["name"] == "N" and "nu" in data["symbols"]
    assert data["det"] == 64 and data["signature"] == [0, 8]
