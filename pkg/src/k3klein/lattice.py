"""Even lattices, embeddings, overlattices and discriminant forms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import (
    Matrix,
    integer_nullspace,
    lcm,
    row_span,
    saturate,
    signature,
    smith_normal_form,
    solve_exact,
)

__all__ = [
    "Lattice",
    "Embedding",
    "DiscriminantGroup",
    "GlueVector",
    "GlueError",
    "Fingerprint",
    "ENUMERATION_CAP",
    "root_lattice",
    "lattice",
    "direct_sum",
    "twist",
    "overlattice_from_glue",
    "discriminant_group",
    "orthogonal_complement",
    "sublattice_index",
    "genus_fingerprint",
    "k3_embedding_unique",
    "mod2",
    "mod1",
]

ENUMERATION_CAP = 4096
# p-primary parts up to this size are enumerated for fingerprints
PRIMARY_PART_CAP = 1 << 18


def mod2(x: Fraction) -> Fraction:
    """Canonical representative of x in Q/2Z, in [0, 2)."""
    return x - 2 * (x.numerator // (2 * x.denominator))


def mod1(x: Fraction) -> Fraction:
    return x - x.numerator // x.denominator


class GlueError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Lattice:
    """A nondegenerate even lattice given by its Gram matrix."""

    gram: Matrix
    label: str = ""

    def __post_init__(self):
        g = self.gram
        if not g.is_symmetric():
            raise ValueError(f"{self.label or 'lattice'}: Gram matrix is not symmetric")
        if not g.is_integral():
            raise ValueError(f"{self.label or 'lattice'}: Gram matrix is not integral")
        odd = [i for i in range(g.nrows) if g[i, i].numerator % 2]
        if odd:
            raise ValueError(f"{self.label or 'lattice'}: odd diagonal entry at {odd[0]}")
        if g.nrows and self.det == 0:
            raise ValueError(f"{self.label or 'lattice'}: Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return self.gram.nrows

    @cached_property
    def det(self) -> int:
        return int(self.gram.det())

    @cached_property
    def signature(self) -> tuple[int, int]:
        return signature(self.gram) if self.rank else (0, 0)

    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def is_definite(self) -> bool:
        return 0 in self.signature

    def pair(self, u: Sequence, v: Sequence) -> Fraction:
        return self.gram.bilinear(u, v)

    def square(self, u: Sequence) -> Fraction:
        return self.gram.bilinear(u, u)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"Lattice({self.label or '?'}, rank={self.rank}, det={self.det})"

    def to_json(self) -> dict:
        return {"label": self.label, "gram": self.gram.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        return cls(Matrix.from_json(data["gram"]), data.get("label", ""))


@dataclass(frozen=True, eq=False)
class Embedding:
    """A sublattice of the rational span of ``ambient``.

    ``basis`` rows are coordinates in the ambient basis; they may be rational
    when the ambient is a finite-index sublattice of the lattice we care about
    (e.g. H^2(X) presented over W).
    """

    ambient: Lattice
    basis: Matrix
    label: str = ""

    def __post_init__(self):
        if self.basis.nrows and self.basis.ncols != self.ambient.rank:
            raise ValueError("basis width does not match ambient rank")
        if self.basis.nrows and self.basis.rank() != self.basis.nrows:
            raise ValueError(f"{self.label or 'embedding'}: basis rows are dependent")

    @classmethod
    def from_generators(cls, ambient: Lattice, gens: Matrix | Sequence, label: str = "") -> "Embedding":
        """The Z-span of arbitrary rational generators (not necessarily independent)."""
        M = gens if isinstance(gens, Matrix) else Matrix(gens)
        if M.nrows == 0:
            return cls(ambient, Matrix.zeros(0, ambient.rank), label)
        return cls(ambient, row_span(M), label)

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @cached_property
    def gram(self) -> Matrix:
        return self.basis @ self.ambient.gram @ self.basis.T

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, self.label)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...] | None:
        """Integer coordinates of v in this basis, or None if v is not in the lattice."""
        x = self.rational_coordinates(v)
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return x

    def rational_coordinates(self, v: Sequence) -> tuple[Fraction, ...] | None:
        return solve_exact(self.basis.T, v)

    def pair(self, u, v) -> Fraction:
        return self.ambient.gram.bilinear(u, v)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "gram": self.gram.to_json(),
            "ambient": self.ambient.to_json(),
            "basis": self.basis.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Embedding":
        return cls(Lattice.from_json(data["ambient"]), Matrix.from_json(data["basis"]), data.get("label", ""))

    def __repr__(self):
        return f"Embedding({self.label or '?'}, rank={self.rank})"


@dataclass(frozen=True)
class GlueVector:
    coords: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return lcm(*(c.denominator for c in self.coords))


# -- constructors -----------------------------------------------------------

def lattice(rows, label: str = "") -> Lattice:
    return Lattice(Matrix(rows), label)


def root_lattice(kind: str, n: int) -> Lattice:
    """Negative definite root lattice A_n, D_n or E_8 (diagonal -2)."""
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif kind == "E" and n == 8:
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    else:
        raise ValueError(f"unsupported root lattice {kind}{n}")
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return lattice(g, f"{kind}{n}")


def direct_sum(*lattices: Lattice, label: str = "") -> Lattice:
    if not lattices:
        raise ValueError("direct_sum needs at least one lattice")
    if len(lattices) == 1 and not label:
        return lattices[0]
    gram = Matrix.block_diagonal([L.gram for L in lattices])
    return Lattice(gram, label or "+".join(L.label or "?" for L in lattices))


def twist(L: Lattice, n: int, label: str = "") -> Lattice:
    """The rescaled lattice L(n)."""
    if n == 0:
        raise ValueError("twist by zero")
    return Lattice(L.gram.scale(n), label or f"{L.label}({n})")


def overlattice_from_glue(L: Lattice, glue: Sequence) -> tuple[Lattice, int, Matrix]:
    """Adjoin rational glue vectors to L.

    Returns the overlattice (Gram in a new basis), its index over L and the
    new basis written in L's coordinates.
    """
    vecs = [tuple(Fraction(c) for c in (g.coords if isinstance(g, GlueVector) else g)) for g in glue]
    G = L.gram
    for v in vecs:
        if len(v) != L.rank:
            raise GlueError("glue vector has wrong length")
        if all(c.denominator == 1 for c in v):
            raise GlueError(f"trivial glue: {_fmt_vec(v)} already lies in the lattice")
        w = G.apply(v)
        if any(c.denominator != 1 for c in w):
            raise GlueError(f"glue {_fmt_vec(v)} is not in the dual lattice")
        q = G.bilinear(v, v)
        if mod2(q) != 0:
            raise GlueError(f"overlattice not even: q({_fmt_vec(v)}) = {mod2(q)} mod 2")
    for i, u in enumerate(vecs):
        for v in vecs[:i]:
            b = G.bilinear(u, v)
            if b.denominator != 1:
                raise GlueError(
                    f"overlattice not even: b({_fmt_vec(u)}, {_fmt_vec(v)}) = {mod1(b)} mod 1"
                )
    C = row_span(Matrix.vstack(Matrix.identity(L.rank), Matrix(vecs)))
    index = 1 / abs(C.det())
    if index.denominator != 1:
        raise GlueError("glue produced a non-overlattice")
    return Lattice(C @ G @ C.T, f"{L.label}'"), int(index), C


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


# -- discriminant forms -----------------------------------------------------

class DiscriminantGroup:
    """The finite quadratic module ``A_L = L^* / L`` with ``q`` in Q/2Z.

    Elements are integer coefficient tuples with respect to ``generators``,
    the i-th coefficient taken modulo ``orders[i]``.
    """

    def __init__(self, L: Lattice):
        self.lattice = L
        G = L.gram
        n = L.rank
        U, D, V = smith_normal_form(G)
        diag = [int(D[i, i]) for i in range(n)]
        keep = [i for i in range(n) if abs(diag[i]) > 1]
        self.orders: tuple[int, ...] = tuple(abs(diag[i]) for i in keep)
        self.generators: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(x / diag[i] for x in U.row(i)) for i in keep
        )
        self._uinv_cols = U.inverse().select_cols(keep) if keep else None
        k = len(keep)
        self.bmatrix = [[G.bilinear(self.generators[i], self.generators[j]) for j in range(k)] for i in range(k)]
        self.qgens = tuple(mod2(self.bmatrix[i][i]) for i in range(k))

    # -- basic data
    @property
    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    @property
    def length(self) -> int:
        """Minimal number of generators."""
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    def element(self, c: Sequence[int]) -> tuple[Fraction, ...]:
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for ci, g in zip(c, self.generators):
            if ci:
                for j in range(n):
                    v[j] += ci * g[j]
        return tuple(v)

    def coefficients(self, v: Sequence) -> tuple[int, ...]:
        """Coefficients of a dual vector v modulo the lattice."""
        v = tuple(Fraction(x) for x in v)
        if any(x.denominator != 1 for x in self.lattice.gram.apply(v)):
            raise ValueError(f"{_fmt_vec(v)} is not in the dual lattice")
        if not self.orders:
            return ()
        # v = sum c_i g_i + lattice  <=>  (v U^{-1})_i = c_i / d_i mod 1
        w = self._uinv_cols.apply(v)
        out = []
        for wi, d in zip(w, self.orders):
            c = wi * d
            if c.denominator != 1:
                raise AssertionError("coefficient extraction failed")
            out.append(int(c) % d)
        return tuple(out)

    def q(self, c: Sequence[int]) -> Fraction:
        k = len(self.orders)
        total = Fraction(0)
        for i in range(k):
            if c[i]:
                total += c[i] * c[i] * self.qgens[i]
                for j in range(i):
                    if c[j]:
                        total += 2 * c[i] * c[j] * self.bmatrix[i][j]
        return mod2(total)

    def b(self, c: Sequence[int], d: Sequence[int]) -> Fraction:
        k = len(self.orders)
        total = Fraction(0)
        for i in range(k):
            if c[i]:
                for j in range(k):
                    if d[j]:
                        total += c[i] * d[j] * self.bmatrix[i][j]
        return mod1(total)

    def element_order(self, c: Sequence[int]) -> int:
        return lcm(*(d // np.gcd(ci, d) for ci, d in zip(c, self.orders) if ci % d)) or 1

    def q_of_vector(self, v: Sequence) -> Fraction:
        return mod2(self.lattice.gram.bilinear(v, v))

    # -- vectorised enumeration
    @cached_property
    def _scale(self) -> int:
        return lcm(*(d * d for d in self.orders), 2) if self.orders else 2

    @cached_property
    def _int_forms(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer matrices Qm, Bm with q(c) = c Qm c^T / M mod 2, b = c Bm d^T / M mod 1."""
        M = self._scale
        k = len(self.orders)
        Bm = np.zeros((k, k), dtype=np.int64)
        Qm = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                bij = mod1(self.bmatrix[i][j]) * M
                Bm[i, j] = int(bij)
                Qm[i, j] = int(bij) if i != j else int(self.qgens[i] * M)
        return Qm, Bm

    def all_elements(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        if self.order > cap:
            raise ValueError(f"discriminant group of order {self.order} exceeds the cap {cap}")
        return _enumerate_box(self.orders)

    def q_values(self, E: np.ndarray) -> np.ndarray:
        """q for each row of E, as integers scaled by ``self._scale`` modulo 2*scale."""
        Qm, _ = self._int_forms
        M = self._scale
        if E.shape[1] == 0:
            return np.zeros(E.shape[0], dtype=np.int64)
        val = np.einsum("ni,ij,nj->n", E, Qm, E)
        return np.mod(val, 2 * M)

    def b_values(self, E: np.ndarray, F: np.ndarray) -> np.ndarray:
        _, Bm = self._int_forms
        M = self._scale
        if E.shape[1] == 0:
            return np.zeros((E.shape[0], F.shape[0]), dtype=np.int64)
        return np.mod(E @ Bm @ F.T, M)

    def orders_of(self, E: np.ndarray) -> np.ndarray:
        out = np.ones(E.shape[0], dtype=np.int64)
        for i, d in enumerate(self.orders):
            o = d // np.gcd(E[:, i], d)
            out = np.lcm(out, o)
        return out

    def primary_parts(self) -> dict[int, tuple[list[int], list[int]]]:
        """For each prime p: (ambient coefficient multipliers, orders) of A_p."""
        primes = sorted({p for d in self.orders for p in _factor(d)})
        out = {}
        for p in primes:
            gens = []
            ords = []
            for i, d in enumerate(self.orders):
                e = _factor(d).get(p, 0)
                if e:
                    c = [0] * len(self.orders)
                    c[i] = d // p ** e
                    gens.append(c)
                    ords.append(p ** e)
            out[p] = (gens, ords)
        return out

    def __repr__(self):
        return f"DiscriminantGroup(orders={self.orders})"


def _enumerate_box(orders: Sequence[int]) -> np.ndarray:
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in orders], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def discriminant_group(L: Lattice) -> DiscriminantGroup:
    return DiscriminantGroup(L)


# -- sublattices ------------------------------------------------------------

class NotContained(Exception):
    pass


def orthogonal_complement(E: Embedding, host: Embedding | None = None) -> Embedding:
    """Vectors of ``host`` (default: the ambient lattice itself) orthogonal to E."""
    G = E.ambient.gram
    H = host.basis if host is not None else Matrix.identity(E.ambient.rank)
    if E.rank == 0:
        return Embedding(E.ambient, H, f"{E.label}^perp")
    M = (H @ G @ E.basis.T).T  # rows: pairings of host basis with E basis
    K = integer_nullspace(M)
    basis = K @ H if K.nrows else Matrix.zeros(0, E.ambient.rank)
    return Embedding(E.ambient, basis, f"{E.label}^perp")


def saturation(E: Embedding, host: Embedding | None = None) -> Embedding:
    """Primitive closure of E inside host (default: the ambient lattice)."""
    if E.rank == 0:
        return E
    H = host.basis if host is not None else Matrix.identity(E.ambient.rank)
    coords = []
    for r in E.basis.rows:
        c = solve_exact(H.T, r)
        if c is None:
            raise NotContained(f"{E.label or 'sublattice'} is not in the span of the host")
        coords.append(c)
    C = Matrix(coords)
    S = saturate(C.scale(C.denominator()))
    return Embedding(E.ambient, S @ H, E.label)


def sublattice_index(sub: Embedding, sup: Embedding) -> int:
    """[sup : sub] for equal-rank sub ⊆ sup.  Raises NotContained / ValueError."""
    if sub.ambient.gram != sup.ambient.gram:
        raise ValueError("embeddings live in different ambient spaces")
    if sub.rank != sup.rank:
        raise ValueError(f"rank mismatch: {sub.rank} vs {sup.rank}")
    rows = []
    for r in sub.basis.rows:
        c = sup.coordinates(r)
        if c is None:
            raise NotContained(f"{sub.label or 'sub'} is not contained in {sup.label or 'sup'}")
        rows.append(c)
    return abs(int(Matrix(rows).det()))


def same_subgroup(a: Embedding, b: Embedding) -> bool:
    return a.rank == b.rank and row_span(a.basis) == row_span(b.basis)


# -- invariants -------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    rank: int
    signature: tuple[int, int]
    abs_det: int
    invariant_factors: tuple[int, ...]
    primary_forms: tuple

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "signature": list(self.signature),
            "abs_det": self.abs_det,
            "invariant_factors": list(self.invariant_factors),
            "primary_forms": [
                [p, complete, [[o, str(g), h, n] for (o, g, h, n) in data]]
                for p, complete, data in self.primary_forms
            ],
        }


def _primary_multiset(A: DiscriminantGroup, gens: list[list[int]], ords: list[int], cap: int):
    """Multiset of (order, q, p-height) over a p-primary component."""
    total = 1
    for o in ords:
        total *= o
    complete = total <= cap
    use = list(ords)
    if not complete:
        # restrict to the p^j-torsion layer of largest size under the cap
        p = _smallest_prime(ords[0])
        j = 0
        while True:
            nxt = [min(o, p ** (j + 1)) for o in ords]
            size = 1
            for o in nxt:
                size *= o
            if size > cap:
                break
            j += 1
        use = [min(o, p ** j) for o in ords]
    # coefficient box over the (possibly truncated) component
    local = _enumerate_box(use)
    # local coefficient c_i on generator of order o_i, truncated layer scaled by o_i/u_i
    scale = np.array([o // u for o, u in zip(ords, use)], dtype=np.int64)
    local_full = local * scale
    G = np.array(gens, dtype=np.int64)
    E = np.mod(local_full @ G, np.array(A.orders, dtype=np.int64))
    qv = A.q_values(E)
    od = A.orders_of(E)
    p = _smallest_prime(ords[0])
    heights = _heights(local_full, ords, p)
    M = A._scale
    keys = Counter(zip(od.tolist(), qv.tolist(), heights.tolist()))
    data = tuple(sorted((o, Fraction(q, M), h, n) for (o, q, h), n in keys.items()))
    return complete, data


def _smallest_prime(n: int) -> int:
    return min(_factor(n))


def _heights(local: np.ndarray, ords: list[int], p: int) -> np.ndarray:
    big = 64
    out = np.full(local.shape[0], big, dtype=np.int64)
    for i, o in enumerate(ords):
        col = local[:, i] % o
        v = np.zeros_like(col)
        nz = col != 0
        x = col.copy()
        while True:
            m = nz & (x % p == 0)
            if not m.any():
                break
            v[m] += 1
            x = np.where(m, x // p, x)
        out = np.where(nz, np.minimum(out, v), out)
    return out


def genus_fingerprint(L: Lattice, cap: int = PRIMARY_PART_CAP) -> Fingerprint:
    """Isometry invariants of L: rank, signature, |det| and its discriminant form."""
    A = discriminant_group(L)
    forms = []
    for p, (gens, ords) in A.primary_parts().items():
        complete, data = _primary_multiset(A, gens, ords, cap)
        forms.append((p, complete, data))
    return Fingerprint(
        rank=L.rank,
        signature=L.signature,
        abs_det=abs(L.det),
        invariant_factors=A.orders,
        primary_forms=tuple(forms),
    )


def k3_embedding_unique(L: Lattice) -> bool:
    """Sufficient criterion for a unique primitive embedding into the K3 lattice.

    True when s+ < 3, s- < 19 and length(A_L) <= 22 - rank - 2.  False means
    the criterion is inconclusive.
    """
    sp, sm = L.signature
    if sp > 3 or sm > 19:
        raise ValueError(f"signature {L.signature} does not fit in (3,19)")
    length = discriminant_group(L).length
    return sp < 3 and sm < 19 and length <= 22 - L.rank - 2
