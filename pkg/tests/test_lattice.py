import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3klein import catalog as cat
from k3klein.classes import enumerate_classes
from k3klein.families import classify_ns
from k3klein.lattice import (
    Embedding,
    GlueError,
    Lattice,
    NotContained,
    direct_sum,
    discriminant_group,
    genus_fingerprint,
    k3_embedding_unique,
    lattice,
    mod2,
    orthogonal_complement,
    overlattice_from_glue,
    root_lattice,
    same_subgroup,
    saturation,
    sublattice_index,
    twist,
)
from k3klein.linalg import Matrix
from k3klein.quotients import gamma22, m22, total_image

A1 = root_lattice("A", 1)
A2 = root_lattice("A", 2)
U = lattice([[0, 1], [1, 0]], "U")


def test_lattice_rejects_odd_and_degenerate():
    with pytest.raises(ValueError, match="odd diagonal"):
        lattice([[1]])
    with pytest.raises(ValueError, match="degenerate"):
        lattice([[2, 2], [2, 2]])


def test_root_lattices_are_negative_definite():
    assert A2.gram == Matrix([[-2, 1], [1, -2]])
    for kind, n, det in (("A", 3, 4), ("D", 4, 4), ("E", 8, 1)):
        L = root_lattice(kind, n)
        assert L.signature == (0, n) and abs(L.det) == det


def test_direct_sum():
    assert direct_sum(A1, A1).gram == Matrix.diagonal([-2, -2])
    assert direct_sum(A2) is A2
    W = direct_sum(*[A2] * 8, twist(A2, 2), twist(U, 3), lattice([[4, 2], [2, 4]]))
    assert W.rank == 22
    assert W.gram == cat.build("W").lattice.gram


def test_twist():
    assert twist(U, 3).gram == Matrix([[0, 3], [3, 0]])
    assert twist(A2, 2).gram == Matrix([[-4, 2], [2, -4]])
    assert twist(lattice([[4, 2], [2, 4]]), 2).gram == Matrix([[8, 4], [4, 8]])
    with pytest.raises(ValueError):
        twist(U, 0)


def test_nikulin_overlattice():
    L = direct_sum(*[A1] * 8)
    nu = [Fraction(1, 2)] * 8
    N, idx, C = overlattice_from_glue(L, [nu])
    assert idx == 2
    assert abs(N.det) == 2 ** 8 // 2 ** 2 == 2 ** 6


def test_m22_overlattice():
    L = direct_sum(*[A1] * 12)
    half = Fraction(1, 2)
    mu1 = [half] * 8 + [0] * 4
    mu2 = [0] * 4 + [half] * 8
    M, idx, _ = overlattice_from_glue(L, [mu1, mu2])
    assert idx == 4
    assert abs(M.det) == 2 ** 12 // 4 ** 2 == 2 ** 8


def test_half_root_is_not_isotropic():
    L = direct_sum(*[A1] * 8)
    with pytest.raises(GlueError, match=r"overlattice not even: q\(.*\) = 3/2 mod 2"):
        overlattice_from_glue(L, [[Fraction(1, 2)] + [0] * 7])
    with pytest.raises(GlueError, match="trivial glue"):
        overlattice_from_glue(L, [[1] + [0] * 7])


half_glues = st.lists(st.sampled_from([0, 1]), min_size=6, max_size=6).filter(any)


@given(st.lists(half_glues, min_size=1, max_size=3))
def test_overlattice_even_iff_glue_isotropic(choices):
    # over A1^6 a glue (sum of a subset)/2 has q = -|subset|/2
    L = direct_sum(*[A1] * 6)
    glue = [[Fraction(c, 2) for c in g] for g in choices]
    isotropic = all(sum(g) % 4 == 0 for g in choices) and all(
        sum(a & b for a, b in zip(g, h)) % 2 == 0 for i, g in enumerate(choices) for h in choices[:i])
    try:
        M, idx, C = overlattice_from_glue(L, glue)
    except GlueError as e:
        assert not isotropic or "not even" not in str(e)
        return
    assert isotropic
    assert M.det * idx ** 2 == L.det
    assert all(M.gram[i, i].numerator % 2 == 0 for i in range(M.rank))


@given(st.lists(st.sampled_from([0, 1, 2, 3]), min_size=4, max_size=4).filter(any))
def test_quarter_glue_over_a1_4_twisted(cs):
    # A1(2)^4 has q(e_i/4) = -1/4; a glue sum c_i e_i / 4 is isotropic iff sum c_i^2 = 0 mod 8
    L = twist(direct_sum(*[A1] * 4), 2)
    v = [Fraction(c, 4) for c in cs]
    isotropic = sum(c * c for c in cs) % 8 == 0
    if all(c % 4 == 0 for c in cs):
        return
    try:
        M, idx, _ = overlattice_from_glue(L, [v])
    except GlueError:
        assert not isotropic
        return
    assert isotropic and M.det * idx ** 2 == L.det


def test_discriminant_groups():
    assert discriminant_group(U).order == 1
    A = discriminant_group(A2)
    assert A.orders == (3,)
    assert A.q((1,)) == Fraction(4, 3)
    Om = discriminant_group(cat.build("Omega22").lattice)
    assert Om.order == 1024 and sorted(Om.orders) == [2] * 6 + [4, 4]


@pytest.mark.parametrize("L", [A2, direct_sum(A1, A2), cat.build("D4_2").lattice, lattice([[4, 2], [2, 4]])])
def test_q_is_well_defined_and_polarises(L):
    A = discriminant_group(L)
    G = L.gram
    n = L.rank
    elements = A.all_elements()
    assert len(elements) == A.order == abs(L.det)
    for c in elements:
        v = A.element(c)
        for i in range(n):
            shifted = tuple(x + (1 if j == i else 0) for j, x in enumerate(v))
            assert mod2(G.bilinear(shifted, shifted)) == A.q(c)
    for c in elements:
        for d in elements:
            s = tuple((x + y) for x, y in zip(c, d))
            lhs = mod2(A.q(s) - A.q(c) - A.q(d))
            assert lhs == mod2(2 * A.b(c, d))


def test_invariant_is_complement_of_omega():
    H = cat.build("H2X").embedding
    comp = orthogonal_complement(cat.build("Omega22").embedding, H)
    assert comp.rank == 10
    assert same_subgroup(comp, cat.build("InvariantI").embedding)


def test_complement_of_m22_is_total_image_plus_gamma_half():
    Y = cat.build("H2Y_via_tau")
    comp = orthogonal_complement(m22("tau"), Y.embedding)
    rows = list(total_image("tau").basis.rows) + [Y.space["gamma_half"]]
    assert same_subgroup(comp, Embedding.from_generators(Y.space.lattice, rows))
    assert sublattice_index(total_image("tau"), comp) == 2


def test_complement_of_everything_is_zero():
    H = cat.build("H2X").embedding
    assert orthogonal_complement(H, H).rank == 0


def test_complement_is_primitive():
    H = cat.build("H2X").embedding
    comp = orthogonal_complement(cat.build("Omega22").embedding, H)
    assert same_subgroup(saturation(comp, H), comp)


def test_sublattice_index_examples():
    W = cat.build("W").embedding
    H = cat.build("H2X").embedding
    # oracle: sqrt of the determinant ratio
    ratio = Fraction(W.lattice.det, H.lattice.det)
    assert ratio.denominator == 1 and math.isqrt(abs(ratio.numerator)) ** 2 == abs(ratio.numerator)
    assert sublattice_index(W, H) == math.isqrt(abs(ratio.numerator)) == 2916
    assert sublattice_index(H, H) == 1


def test_sublattice_index_errors_are_distinct():
    H = cat.build("H2X").embedding
    Om = cat.build("Omega22").embedding
    with pytest.raises(ValueError, match="rank mismatch"):
        sublattice_index(Om, H)
    W = cat.build("W").embedding
    with pytest.raises(NotContained):
        sublattice_index(H, W)


def test_fingerprint_examples():
    assert genus_fingerprint(direct_sum(A2, A2)) != genus_fingerprint(twist(A2, 2))
    fams = {f.label.decoration: f for f in classify_ns("Omega22", 8)}
    assert fams["prime1"].fingerprint != fams["prime2"].fingerprint
    assert genus_fingerprint(gamma22("tau").lattice) == genus_fingerprint(gamma22("phi").lattice)


def _unimodular(n, entries):
    it = iter(entries)
    upper = Matrix([[1 if i == j else (next(it) if j > i else 0) for j in range(n)] for i in range(n)])
    lower = Matrix([[1 if i == j else (next(it) if j < i else 0) for j in range(n)] for i in range(n)])
    return upper @ lower


@given(st.lists(st.integers(-2, 2), min_size=20, max_size=20))
def test_fingerprint_is_basis_invariant(entries):
    L = direct_sum(A1, A2, lattice([[4, 2], [2, 4]]))
    T = _unimodular(5, entries)
    M = Lattice(T @ L.gram @ T.T)
    assert genus_fingerprint(M) == genus_fingerprint(L)


def test_k3_embedding_criterion():
    assert k3_embedding_unique(lattice([[4]]))
    # Omega22 + <2d>: rank 13, length(A) is 9 or 8 against the bound 7
    for d in (1, 2, 3):
        L = direct_sum(cat.build("Omega22").lattice, lattice([[2 * d]]))
        length = discriminant_group(L).length
        assert length == 9 if d % 2 == 0 else length in (8, 9)
        assert k3_embedding_unique(L) == (length <= 22 - 13 - 2)
    big = direct_sum(*[A1] * 19, lattice([[2]]))
    assert big.rank == 20 and not k3_embedding_unique(big)


def test_embedding_json_round_trip():
    E = cat.build("Omega22").embedding
    assert Embedding.from_json(E.to_json()).basis == E.basis
