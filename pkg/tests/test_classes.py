from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from k3klein import catalog as cat
from k3klein import quotients as qt
from k3klein.action import phi_star, tau_star
from k3klein.classes import THETA_BOUND, _refine, class_of, class_table, coset_theta, enumerate_classes, killed_by
from k3klein.isometry import find_isometry
from k3klein.lattice import discriminant_group, mod2, root_lattice, twist
from k3klein.linalg import Matrix
from k3klein.verify import CLASS_TABLES, REPRESENTATIVES

OMEGA = cat.build("Omega22")


def triples(recs):
    return sorted((r.order, str(r.square), r.size) for r in recs)


def test_omega_examples():
    E, S = OMEGA.embedding, OMEGA.space
    assert class_of(E, S.parse("w/2")).label() == "(2,1,36)"
    assert class_of(E, S.parse("(b1+c1+d1-3*a1)/2")).label() == "(2,0,3)"
    assert class_of(E, (0,) * 22).label() == "(1,0,1)"


@pytest.mark.parametrize("key,lat", [("Omega22", lambda: OMEGA.lattice), ("M22", lambda: qt.m22("tau").lattice),
                                     ("Gamma22", lambda: qt.gamma22("tau").lattice),
                                     ("Gamma22", lambda: qt.gamma22("phi").lattice)])
def test_tables(key, lat):
    L = lat()
    recs = enumerate_classes(L)
    assert triples(recs) == sorted(CLASS_TABLES[key])
    assert sum(r.size for r in recs) == abs(L.det)


@pytest.mark.parametrize("lat", [lambda: OMEGA.lattice, lambda: qt.m22("tau").lattice, lambda: qt.gamma22("tau").lattice])
def test_representatives_have_stated_order_and_square(lat):
    L = lat()
    A = discriminant_group(L)
    for r in enumerate_classes(L):
        assert A.element_order(r.representative) == r.order
        assert A.q(r.representative) == r.square


def test_printed_representatives():
    for key, reps in REPRESENTATIVES.items():
        if key == "Omega22":
            E, S = OMEGA.embedding, OMEGA.space
        elif key == "M22":
            E, S = qt.m22("tau"), qt._y_entry("tau").space
        else:
            route = key.split("_")[1]
            E, S = qt.gamma22(route), qt._z_entry(route).space
        for label, expr in reps.items():
            assert class_of(E, S.parse(expr)).label() == label, (key, expr)


def _induced(E, g: Matrix) -> Matrix:
    # the isometry g (ambient) written in the basis of E
    return Matrix([E.coordinates(g.apply(b)) for b in E.basis.rows])


def _check_invariant(L, M):
    """Fingerprint classes are unions of orbits of the isometry M of L."""
    A = discriminant_group(L)
    T = class_table(L)
    for c in T.elements:
        v = A.element(tuple(int(x) for x in c))
        w = M.apply(v)
        assert T.record_of(A.coefficients(w)) is T.record_of(tuple(int(x) for x in c))


@pytest.mark.parametrize("g", [tau_star, phi_star])
def test_partition_is_invariant_under_the_action(g):
    E = OMEGA.embedding
    M = _induced(E, g().matrix)
    assert M.is_integral()
    _check_invariant(E.lattice, M)


def test_gamma_witness_preserves_triples():
    Lt, Lp = cat.build("GammaTau").lattice, cat.build("GammaPhi").lattice
    U = find_isometry(Lt, Lp)  # rows: images of the GammaTau basis in GammaPhi coordinates
    At, Ap = discriminant_group(Lt), discriminant_group(Lp)
    Tt, Tp = class_table(Lt), class_table(Lp)
    for c in Tt.elements:
        c = tuple(int(x) for x in c)
        w = U.apply(At.element(c))
        assert Tp.record_of(Ap.coefficients(w)).triple == Tt.record_of(c).triple


def _brute_theta(L, bound, box=3):
    # oracle: count vectors of the coset v + L by direct enumeration in a box
    G = L.gram.scale(-1)
    A = discriminant_group(L)
    n = L.rank
    out = {}
    for c in A.all_elements():
        c = tuple(int(x) for x in c)
        v = A.element(c)
        cnt = Counter()

        def rec(prefix):
            if len(prefix) == n:
                u = tuple(a + b for a, b in zip(v, prefix))
                m = G.bilinear(u, u)
                if 0 < m <= bound:
                    cnt[m] += 1
                return
            for x in range(-box, box + 1):
                rec(prefix + [x])
        rec([])
        out[c] = tuple(sorted(cnt.items()))
    return out


@pytest.mark.parametrize("L", [root_lattice("A", 2), root_lattice("D", 4), twist(root_lattice("A", 2), 2)])
def test_coset_theta_against_brute_force(L):
    A = discriminant_group(L)
    theta = coset_theta(L, THETA_BOUND)
    brute = _brute_theta(L, THETA_BOUND)
    for i, c in enumerate(A.all_elements()):
        assert theta[i] == brute[tuple(int(x) for x in c)]


def test_pairing_profile_alone_does_not_split_omega():
    # refining (order, q) by the pairing data alone leaves (2,1,108) and (2,1,36) merged
    L = OMEGA.lattice
    A = discriminant_group(L)
    E = A.all_elements()
    seed = list(zip(A.orders_of(E).tolist(), A.q_values(E).tolist()))
    ids = {x: j for j, x in enumerate(sorted(set(seed)))}
    colour = _refine(np.array([ids[x] for x in seed], dtype=np.int64), A.b_values(E, E))
    assert len(set(colour.tolist())) < len(enumerate_classes(L))


def test_killed_by():
    X = cat.build("H2X").space
    tau, phi = qt.pushforward("tau"), qt.pushforward("phi")
    assert killed_by(X.parse("w/2"), tau) and not killed_by(X.parse("w/2"), phi)
    assert killed_by(X.parse("(e1-f1)/2"), phi) and not killed_by(X.parse("(e1-f1)/2"), tau)
    assert killed_by((0,) * 22, tau)


def test_class_json():
    r = enumerate_classes(OMEGA.lattice)[-1]
    data = r.to_json()
    assert (data["k"], data["g"], data["n"]) == (4, "3/2", 384)
    assert mod2(Fraction(data["g"])) == r.square
