"""Definite lattices: LLL reduction, short vectors and isometry search."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .lattice import Lattice
from .linalg import Matrix


class NotDefinite(ValueError):
    pass


def _positive_gram(L: Lattice | Matrix) -> Matrix:
    G = L.gram if isinstance(L, Lattice) else L
    sp, sm = (L.signature if isinstance(L, Lattice) else Lattice(G).signature)
    if sp and sm:
        raise NotDefinite(f"form of signature {(sp, sm)} is indefinite")
    return G if sm == 0 else G.scale(-1)


def lll(G: Matrix, delta: Fraction = Fraction(99, 100)) -> Matrix:
    """Unimodular T such that T G T^T is LLL-reduced (G positive definite, exact)."""
    n = G.nrows
    B = [list(r) for r in Matrix.identity(n).rows]
    g = [list(r) for r in G.rows]

    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n

    def gso(upto):
        for i in range(upto + 1):
            for j in range(i):
                mu[i][j] = (g[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))) / bstar[j]
            bstar[i] = g[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))

    def swap(i, j):
        B[i], B[j] = B[j], B[i]
        g[i], g[j] = g[j], g[i]
        for r in g:
            r[i], r[j] = r[j], r[i]

    gso(n - 1)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                _sub(g, B, k, j, q, n)
                gso(k)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            gso(k)
            k = max(k - 1, 1)
    return Matrix([[int(x) for x in r] for r in B])


def _sub(g, B, k, j, q, n):
    """b_k -= q b_j on basis and Gram."""
    B[k] = [x - q * y for x, y in zip(B[k], B[j])]
    row = [g[k][t] - q * g[j][t] for t in range(n)]
    row[k] = g[k][k] - 2 * q * g[k][j] + q * q * g[j][j]
    for t in range(n):
        g[k][t] = row[t]
        g[t][k] = row[t]


def _cholesky(G: Matrix) -> list[list[float]]:
    """q_ii, q_ij with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2 (floats, for pruning only)."""
    n = G.nrows
    q = [[float(x) for x in r] for r in G.rows]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(G: Matrix, bound, exact: bool = False) -> Iterator[tuple[int, ...]]:
    """Nonzero x (one of each ±pair) with 0 < x G x^T <= bound (or == bound if exact).

    G must be positive definite.  Fincke-Pohst enumeration pruned in floating point with
    a safety margin; every returned vector is checked in exact integer arithmetic.
    """
    n = G.nrows
    bound = Fraction(bound)
    den = G.denominator()
    Gi = [[int(x * den) for x in r] for r in G.rows]
    target = bound * den
    q = _cholesky(G)
    slack = 1e-7 * (1 + float(bound))
    x = [0] * n

    def rec(i, remaining):
        center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = (remaining + slack) / q[i][i]
        if r < 0:
            return
        s = math.sqrt(r)
        for xi in range(math.ceil(center - s), math.floor(center + s) + 1):
            t = q[i][i] * (xi - center) ** 2
            x[i] = xi
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, remaining - t)
        x[i] = 0

    for v in rec(n - 1, float(bound)):
        if not any(v):
            continue
        # keep the representative whose last nonzero entry is positive
        last = next(c for c in reversed(v) if c)
        if last < 0:
            continue
        norm = sum(v[i] * sum(Gi[i][j] * v[j] for j in range(n) if v[j]) for i in range(n) if v[i])
        if norm > target or (exact and norm != target):
            continue
        yield v


def minimum(L: Lattice) -> Fraction:
    """Minimal nonzero |v^2| of a definite lattice."""
    G = _positive_gram(L)
    T = lll(G)
    R = T @ G @ T.T
    best = min(R.rows[i][i] for i in range(R.nrows))
    return min(R.bilinear(v, v) for v in short_vectors(R, best))


def vectors_of_norm(L: Lattice, norm) -> list[tuple[int, ...]]:
    """All ± pairs of vectors with |v^2| = norm in a definite lattice, in L's basis."""
    G = _positive_gram(L)
    T = lll(G)
    R = T @ G @ T.T
    return [_back(v, T) for v in short_vectors(R, norm, exact=True)]


def _back(v, T: Matrix) -> tuple[int, ...]:
    return tuple(int(c) for c in T.apply(v))


def find_isometry(A: Lattice, B: Lattice) -> Matrix | None:
    """An integral matrix U with U B.gram U^T = A.gram, or None if A is not isometric to B.

    Rows of U are the images of A's basis vectors written in B's basis.
    Backtracking over short vectors of B after LLL-reducing A.  The search runs
    from whichever side has the shorter reduced basis, since the candidate pools
    grow quickly with the largest norm needed.
    """
    if A.rank != B.rank or A.det != B.det or A.signature != B.signature:
        return None
    if A.rank == 0:
        return Matrix.zeros(0, 0)
    GA, GB = _positive_gram(A), _positive_gram(B)
    TA, TB = lll(GA), lll(GB)
    if _max_diag(TB @ GB @ TB.T) < _max_diag(TA @ GA @ TA.T):
        V = _search(B, A, GB, GA, TB, TA)
        if V is None:
            return None
        U = V.inverse()
        if not U.is_integral() or U @ B.gram @ U.T != A.gram:
            raise AssertionError("isometry search produced an invalid map")
        return U
    return _search(A, B, GA, GB, TA, TB)


def _max_diag(R: Matrix) -> Fraction:
    return max(R.rows[i][i] for i in range(R.nrows))


def _search(A: Lattice, B: Lattice, GA: Matrix, GB: Matrix, TA: Matrix, TB: Matrix) -> Matrix | None:
    n = GA.nrows
    RA = TA @ GA @ TA.T
    order = sorted(range(n), key=lambda i: RA.rows[i][i])
    TA = TA.select_rows(order)
    RA = TA @ GA @ TA.T
    RB = TB @ GB @ TB.T
    norms = sorted({RA.rows[i][i] for i in range(n)})
    cand: dict[Fraction, list[tuple[int, ...]]] = {m: [] for m in norms}
    for v in short_vectors(RB, norms[-1]):
        m = RB.bilinear(v, v)
        if m in cand:
            cand[m].append(v)
            cand[m].append(tuple(-c for c in v))
    pools = [cand[RA.rows[i][i]] for i in range(n)]

    chosen: list[tuple[int, ...]] = []

    def extend(i, pools) -> bool:
        # forward checking: every later level keeps only candidates compatible with chosen[i]
        if i == n:
            return True
        for v in pools[0]:
            rest = []
            for k, pool in enumerate(pools[1:], start=i + 1):
                want = RA.rows[k][i]
                kept = [w for w in pool if RB.bilinear(v, w) == want]
                if not kept:
                    break
                rest.append(kept)
            else:
                chosen.append(v)
                if extend(i + 1, rest):
                    return True
                chosen.pop()
        return False

    if not extend(0, pools):
        return None
    # images of TA rows in RB-coordinates; convert to B's basis and back to A's basis
    img = Matrix(chosen) @ TB  # rows: images of reduced A basis, in B's basis
    U = TA.inverse() @ img
    if not U.is_integral() or U @ B.gram @ U.T != A.gram:
        raise AssertionError("isometry search produced an invalid map")
    return U


def is_isometric(A: Lattice, B: Lattice) -> bool:
    return find_isometry(A, B) is not None
