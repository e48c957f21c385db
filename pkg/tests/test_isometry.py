from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3klein import catalog as cat
from k3klein.isometry import (
    NotDefinite,
    find_isometry,
    is_isometric,
    lll,
    minimum,
    short_vectors,
    vectors_of_norm,
)
from k3klein.lattice import Lattice, direct_sum, lattice, root_lattice, twist
from k3klein.linalg import Matrix
from k3klein.quotients import pushed_omega

A1 = root_lattice("A", 1)


def brute_short_vectors(G: Matrix, bound: int, box: int):
    # oracle: every vector in a box, one of each +- pair
    n = G.nrows
    out = set()

    def rec(prefix):
        if len(prefix) == n:
            v = tuple(prefix)
            if any(v) and 0 < G.bilinear(v, v) <= bound:
                out.add(max(v, tuple(-x for x in v)))
            return
        for x in range(-box, box + 1):
            rec(prefix + [x])
    rec([])
    return out


@pytest.mark.parametrize("G,bound", [
    (Matrix([[2, 1], [1, 2]]), 6),
    (Matrix([[4, 2, 0], [2, 4, 1], [0, 1, 2]]), 6),
    (root_lattice("D", 4).gram.scale(-1), 4),
])
def test_short_vectors_against_brute_force(G, bound):
    ours = {max(v, tuple(-x for x in v)) for v in short_vectors(G, bound)}
    assert ours == brute_short_vectors(G, bound, 4)


def test_e8_root_count():
    E8 = root_lattice("E", 8)
    assert len(vectors_of_norm(E8, 2)) == 120  # 240 roots
    assert minimum(E8) == 2


def test_lll_is_unimodular_and_reduces():
    G = Matrix([[10, 7], [7, 5]])
    T = lll(G)
    R = T @ G @ T.T
    assert abs(T.det()) == 1
    assert R[0, 0] <= 2


def test_indefinite_is_rejected():
    with pytest.raises(NotDefinite):
        minimum(lattice([[0, 1], [1, 0]]))


def test_isometry_examples():
    assert not is_isometric(direct_sum(*[A1] * 4), root_lattice("D", 4))
    d4 = cat.build("D4_2").lattice
    for route in ("tau", "phi"):
        assert is_isometric(pushed_omega(route).lattice, d4)
    U = find_isometry(cat.build("GammaTau").lattice, cat.build("GammaPhi").lattice)
    B = cat.build("GammaPhi").lattice.gram
    assert U is not None and U @ B @ U.T == cat.build("GammaTau").lattice.gram


def test_self_isometry_has_a_witness():
    L = root_lattice("E", 8)
    U = find_isometry(L, L)
    assert U is not None and U @ L.gram @ U.T == L.gram


def test_non_isometric_same_determinant():
    # same |det| 12, minima 2 and 4
    a = direct_sum(A1, twist(A1, 3))
    b = lattice([[-4, 2], [2, -4]])
    assert abs(a.det) == abs(b.det) == 12
    assert not is_isometric(a, b)


@settings(max_examples=20)
@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_random_basis_change_is_isometric(entries):
    L = direct_sum(root_lattice("A", 2), root_lattice("A", 2))
    n = 4
    it = iter(entries)
    T = Matrix([[1 if i == j else (next(it) if j > i else 0) for j in range(n)] for i in range(n)])
    M = Lattice(T @ L.gram @ T.T)
    U = find_isometry(M, L)
    assert U is not None and U @ L.gram @ U.T == M.gram
