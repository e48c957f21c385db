"""Orbit classes on discriminant groups, approximated by an isometry-invariant fingerprint.

Every element v of A_L starts with the colour (order, q(v), theta), where theta counts
the vectors of each norm up to THETA_BOUND in the coset v + L.  Colours are then
refined by the multiset of pairs (b(v, w), colour of w) until the partition is
stable.  Both steps commute with every isometry of L, so true orbits never
straddle two classes; the converse is checked against known tables.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .isometry import _positive_gram, lll, short_vectors
from .lattice import ENUMERATION_CAP, DiscriminantGroup, Embedding, Lattice, discriminant_group
from .linalg import Matrix


@dataclass(frozen=True)
class ClassRecord:
    order: int
    square: Fraction
    size: int
    representative: tuple[int, ...]  # coefficient tuple in the discriminant group
    fingerprint: tuple

    @property
    def triple(self) -> tuple[int, Fraction, int]:
        return (self.order, self.square, self.size)

    def label(self) -> str:
        return f"({self.order},{_fmt_q(self.square)},{self.size})"

    def to_json(self) -> dict:
        return {"k": self.order, "g": _fmt_q(self.square), "n": self.size,
                "representative": list(self.representative)}


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class ClassTable:
    group: DiscriminantGroup
    records: list[ClassRecord]
    element_class: np.ndarray  # index into records, per enumerated element
    elements: np.ndarray

    def record_of(self, coeffs: Sequence[int]) -> ClassRecord:
        idx = _element_index(self.group, coeffs)
        return self.records[int(self.element_class[idx])]

    @property
    def triples(self) -> list[tuple[int, Fraction, int]]:
        return [r.triple for r in self.records]


def _element_index(A: DiscriminantGroup, coeffs: Sequence[int]) -> int:
    # row-major (meshgrid "ij") index of a coefficient tuple
    idx = 0
    for c, d in zip(coeffs, A.orders):
        idx = idx * d + (c % d)
    return idx


# largest |norm| of coset vectors counted in the theta colour
THETA_BOUND = 3


def coset_theta(L: Lattice, bound=THETA_BOUND) -> list[tuple]:
    """Per enumerated element of A_L: sorted (|norm|, count) pairs over the coset v + L.

    L must be definite.  One short-vector enumeration of the dual lattice serves all cosets.
    """
    A = discriminant_group(L)
    G = _positive_gram(L)
    dual = G.inverse()
    T = lll(dual)
    R = T @ dual @ T.T
    # reduced dual coordinates -> discriminant coefficients
    K = T @ dual @ A._uinv_cols
    K = Matrix([[x * A.orders[j] for j, x in enumerate(r)] for r in K.rows])
    if not K.is_integral():
        raise AssertionError("dual basis does not map into the discriminant group")
    Kn = np.array([[int(x) for x in r] for r in K.rows], dtype=np.int64)
    e = A.exponent
    Rn = np.array([[int(x * e) for x in r] for r in R.rows], dtype=np.int64)
    vs = list(short_vectors(R, bound))
    counts: list[Counter] = [Counter() for _ in range(A.order)]
    if vs:
        V = np.array(vs, dtype=np.int64)
        orders = np.array(A.orders, dtype=np.int64)
        coeffs = np.mod(V @ Kn, orders)
        norms = np.einsum("ij,jk,ik->i", V, Rn, V)
        # v lies in the coset of c, -v in the coset of -c
        for cs in (coeffs, np.mod(-coeffs, orders)):
            idx = np.zeros(len(vs), dtype=np.int64)
            for col, d in zip(cs.T, A.orders):
                idx = idx * d + col
            for i, n in zip(idx.tolist(), norms.tolist()):
                counts[i][Fraction(n, e)] += 1
    return [tuple(sorted(c.items())) for c in counts]


def _refine(colour: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Split colour classes by the multiset of (b(v, w), colour(w)) until stable."""
    while True:
        k = int(colour.max()) + 1
        keys = B * k + colour[None, :]
        sig = []
        for i, row in enumerate(keys):
            vals, cnt = np.unique(row, return_counts=True)
            sig.append((int(colour[i]), tuple(zip(vals.tolist(), cnt.tolist()))))
        ids = {x: j for j, x in enumerate(sorted(set(sig)))}
        new = np.array([ids[x] for x in sig], dtype=np.int64)
        if len(ids) == k:
            return new
        colour = new


@lru_cache(maxsize=None)
def _table_for(L: Lattice, cap: int) -> ClassTable:
    A = discriminant_group(L)
    E = A.all_elements(cap)
    M = A._scale
    q = A.q_values(E)
    orders = A.orders_of(E)
    theta = coset_theta(L) if L.is_definite() else [()] * len(E)
    seed = [(int(o), int(qq), t) for o, qq, t in zip(orders, q, theta)]
    ids = {x: j for j, x in enumerate(sorted(set(seed)))}
    colour = _refine(np.array([ids[x] for x in seed], dtype=np.int64), A.b_values(E, E))
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(colour.tolist()):
        groups.setdefault(c, []).append(i)
    recs = []
    for c, idx in groups.items():
        rep = tuple(int(x) for x in E[idx[0]])
        o, qq, t = seed[idx[0]]
        recs.append((idx, ClassRecord(o, Fraction(qq, M), len(idx), rep, (o, qq, t, c))))
    recs.sort(key=lambda t: (t[1].order, t[1].square, t[1].size, t[1].representative))
    element_class = np.empty(E.shape[0], dtype=np.int64)
    records = []
    for j, (idx, r) in enumerate(recs):
        element_class[idx] = j
        records.append(r)
    return ClassTable(A, records, element_class, E)


def class_table(L: Lattice, cap: int = ENUMERATION_CAP) -> ClassTable:
    return _table_for(L, cap)


def enumerate_classes(L: Lattice, cap: int = ENUMERATION_CAP) -> list[ClassRecord]:
    """Fingerprint classes of A_L sorted by (order, q, size)."""
    return class_table(L, cap).records


def dual_coefficients(E: Embedding, v: Sequence) -> tuple[int, ...]:
    """Discriminant group coefficients of an ambient vector v in the dual of E."""
    c = E.rational_coordinates(v)
    if c is None:
        raise ValueError("vector is not in the rational span of the lattice")
    return discriminant_group(E.lattice).coefficients(c)


def class_of(E: Embedding | Lattice, v: Sequence, cap: int = ENUMERATION_CAP) -> ClassRecord:
    """The class of a dual vector; for an Embedding v is in ambient coordinates."""
    if isinstance(E, Embedding):
        L = E.lattice
        coeffs = dual_coefficients(E, v)
    else:
        L = E
        coeffs = discriminant_group(L).coefficients(v)
    return class_table(L, cap).record_of(coeffs)


def killed_by(v: Sequence, pushforward) -> bool:
    """Whether the pushforward sends the (ambient) vector v to zero."""
    return not any(pushforward.apply(v))


def class_counts(records: Sequence[ClassRecord]) -> Counter:
    return Counter((r.order, r.square) for r in records)
