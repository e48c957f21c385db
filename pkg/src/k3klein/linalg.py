"""Exact dense linear algebra over Z and Q.

Everything here works on :class:`Matrix`, an immutable matrix of
:class:`fractions.Fraction` entries.  Integer algorithms (Hermite and Smith
normal forms) run on plain Python ints internally and convert on the way out.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

__all__ = [
    "Matrix",
    "NotIntegralError",
    "DegenerateFormError",
    "hermite_normal_form",
    "smith_normal_form",
    "solve_exact",
    "saturate",
    "signature",
    "nullspace",
    "integer_nullspace",
    "row_span",
    "lcm",
    "floor_sqrt",
    "parse_entry",
]


class NotIntegralError(ValueError):
    """An integer algorithm was handed a matrix with a non-integral entry."""


class DegenerateFormError(ValueError):
    """A quadratic form expected to be nondegenerate has a kernel."""

    def __init__(self, message: str, witness: tuple[Fraction, ...]):
        super().__init__(message)
        self.witness = witness


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        if v:
            out = out * v // gcd(out, v)
    return out


def floor_sqrt(x: Fraction) -> int:
    """Exact floor of sqrt(x) for a nonnegative rational."""
    if x < 0:
        raise ValueError("negative argument")
    # floor(sqrt(y)) == floor(sqrt(floor(y))) for y >= 0
    return isqrt(x.numerator // x.denominator)


def parse_entry(value) -> Fraction:
    """Read one matrix-literal entry: an int or a string "p" / "p/q"."""
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"unsupported matrix entry {value!r}")


def _format_entry(x: Fraction):
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense matrix with exact rational entries.

    Equality is structural and entry-wise exact, so matrices can be used as
    dictionary keys and compared directly in golden tests.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(parse_entry(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged matrix rows")
            if ncols is not None and ncols != width:
                raise ValueError(f"expected {ncols} columns, got {width}")
        else:
            width = ncols or 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = width
        self._hash = None

    @classmethod
    def _trusted(cls, rows: tuple[tuple[Fraction, ...], ...], ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m._rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def from_ints(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "Matrix":
        data = tuple(tuple(Fraction(x) for x in r) for r in rows)
        width = len(data[0]) if data else (ncols or 0)
        return cls._trusted(data, width)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        zero = Fraction(0)
        return cls._trusted(tuple((zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        zero = Fraction(0)
        vals = [parse_entry(e) for e in entries]
        return cls._trusted(
            tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        rows = [[Fraction(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b._rows):
                rows[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls._trusted(tuple(map(tuple, rows)), m)

    @classmethod
    def vstack(cls, *mats: "Matrix") -> "Matrix":
        mats = [m for m in mats if m.nrows]
        if not mats:
            return cls.zeros(0, 0)
        width = mats[0].ncols
        if any(m.ncols != width for m in mats):
            raise ValueError("vstack: column mismatch")
        return cls._trusted(tuple(r for m in mats for r in m._rows), width)

    @classmethod
    def from_json(cls, data) -> "Matrix":
        return cls(data)

    def to_json(self) -> list:
        return [[_format_entry(x) for x in row] for row in self._rows]

    # -- access -----------------------------------------------------------
    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, key):
        i, j = key
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.nrows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ncols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.to_json()!r})"

    # -- arithmetic -------------------------------------------------------
    @property
    def T(self) -> "Matrix":
        return Matrix._trusted(tuple(zip(*self._rows)) if self.nrows else (), self.nrows)

    def transpose(self) -> "Matrix":
        return self.T

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = tuple(zip(*other._rows)) if other.nrows else ((),) * other.ncols
        out = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols)
            for r in self._rows
        )
        return Matrix._trusted(out, other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._trusted(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = parse_entry(c)
        return Matrix._trusted(tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Row vector times matrix: ``v @ self``."""
        if len(v) != self.nrows:
            raise ValueError("length mismatch")
        out = [Fraction(0)] * self.ncols
        for a, r in zip(v, self._rows):
            if a:
                for j, b in enumerate(r):
                    if b:
                        out[j] += a * b
        return tuple(out)

    def bilinear(self, u: Sequence, v: Sequence) -> Fraction:
        """``u @ self @ v^T`` for row vectors u, v."""
        w = self.apply(u)
        return sum((a * b for a, b in zip(w, v) if a and b), Fraction(0))

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._trusted(tuple(self._rows[i] for i in idx), self.ncols)

    def select_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._trusted(tuple(tuple(r[j] for j in idx) for r in self._rows), len(idx))

    # -- predicates -------------------------------------------------------
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._rows for x in r)

    def denominator(self) -> int:
        return lcm(*(x.denominator for r in self._rows for x in r))

    def to_ints(self) -> list[list[int]]:
        out = []
        for i, r in enumerate(self._rows):
            row = []
            for j, x in enumerate(r):
                if x.denominator != 1:
                    raise NotIntegralError(f"entry ({i},{j}) = {x} is not an integer")
                row.append(x.numerator)
            out.append(row)
        return out

    # -- Gaussian elimination over Q -------------------------------------
    def _echelon(self):
        """Reduced row echelon form over Q; returns (rows, pivot_columns)."""
        A = [list(r) for r in self._rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            p = next((i for i in range(r, self.nrows) if A[i][c]), None)
            if p is None:
                continue
            A[r], A[p] = A[p], A[r]
            inv = 1 / A[r][c]
            A[r] = [x * inv for x in A[r]]
            for i in range(self.nrows):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return A, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("det of non-square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        if self.is_integral():
            return Fraction(_bareiss_det(self.to_ints()))
        A = [list(r) for r in self._rows]
        det = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if A[i][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                A[c], A[p] = A[p], A[c]
                det = -det
            det *= A[c][c]
            inv = 1 / A[c][c]
            for i in range(c + 1, n):
                if A[i][c]:
                    f = A[i][c] * inv
                    A[i] = [x - f * y for x, y in zip(A[i], A[c])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of non-square matrix")
        n = self.nrows
        aug = Matrix._trusted(
            tuple(r + tuple(Fraction(int(i == j)) for j in range(n)) for i, r in enumerate(self._rows)),
            2 * n,
        )
        A, pivots = aug._echelon()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix._trusted(tuple(tuple(r[n:]) for r in A[:n]), n)


def _bareiss_det(A: list[list[int]]) -> int:
    n = len(A)
    M = [r[:] for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k]), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# -- integer normal forms ---------------------------------------------------

def _int_rows(M: Matrix) -> list[list[int]]:
    return M.to_ints()


def _hnf_rows(A: list[list[int]], track: bool = True):
    """Row-style HNF in place.  Returns (H, U) with U*A_original = H."""
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            if p != r:
                A[r], A[p] = A[p], A[r]
                if track:
                    U[r], U[p] = U[p], U[r]
            clean = True
            piv = A[r][c]
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // piv
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                        if track:
                            U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if not any(A[i][c] for i in range(r, m)):
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            if track:
                U[r] = [-x for x in U[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                if track:
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def hermite_normal_form(M: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form of an integer matrix.

    Returns ``(H, U)`` with ``U @ M == H``, ``U`` unimodular, pivots positive
    and entries above each pivot reduced into ``[0, pivot)``.  Zero rows sit at
    the bottom of ``H``.
    """
    A = _int_rows(M)
    H, U = _hnf_rows(A)
    return Matrix.from_ints(H, M.ncols), Matrix.from_ints(U, M.nrows)


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U @ M @ V == D`` of an integer matrix.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    A = _int_rows(M)
    m, n = M.nrows, M.ncols
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(X, i, j):
        for row in X:
            row[i], row[j] = row[j], row[i]

    def add_col(X, dst, src, q):
        # col_dst -= q * col_src
        for row in X:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
                U[t], U[i] = U[i], U[t]
            if j != t:
                swap_cols(A, t, j)
                swap_cols(V, t, j)
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                    dirty = dirty or bool(A[i][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    add_col(A, j, t, q)
                    add_col(V, j, t, q)
                    dirty = dirty or bool(A[t][j])
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return Matrix.from_ints(U, m), Matrix.from_ints(A, n), Matrix.from_ints(V, n)


def invariant_factors(M: Matrix) -> tuple[int, ...]:
    _, D, _ = smith_normal_form(M)
    return tuple(int(D[i, i]) for i in range(min(D.nrows, D.ncols)))


# -- solving, kernels, spans ------------------------------------------------

def solve_exact(A: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``A x = b`` over Q.  Returns one solution or None if inconsistent."""
    if len(b) != A.nrows:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has length {len(b)}")
    aug = Matrix._trusted(
        tuple(r + (parse_entry(bi),) for r, bi in zip(A.rows, b)), A.ncols + 1
    )
    R, pivots = aug._echelon()
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [Fraction(0)] * A.ncols
    for i, c in enumerate(pivots):
        x[c] = R[i][A.ncols]
    return tuple(x)


def nullspace(M: Matrix) -> Matrix:
    """Rows spanning ``{x : M x = 0}`` over Q."""
    R, pivots = M._echelon()
    free = [c for c in range(M.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(tuple(v))
    return Matrix._trusted(tuple(basis), M.ncols)


def _clear_denominators(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        d = lcm(*(x.denominator for x in r))
        out.append([int(x * d) for x in r])
    return out


def integer_nullspace(M: Matrix) -> Matrix:
    """Basis of the primitive integer lattice ``{x in Z^n : M x = 0}``."""
    K = nullspace(M)
    if K.nrows == 0:
        return K
    return saturate(Matrix.from_ints(_clear_denominators(K.rows), M.ncols))


def row_span(M: Matrix) -> Matrix:
    """HNF basis of the Z-module spanned by the (rational) rows of M."""
    if M.nrows == 0:
        return M
    d = M.denominator()
    A = [[int(x * d) for x in r] for r in M.rows]
    H, _ = _hnf_rows(A, track=False)
    H = [r for r in H if any(r)]
    return Matrix._trusted(tuple(tuple(Fraction(x, d) for x in r) for r in H), M.ncols)


def saturate(B: Matrix) -> Matrix:
    """Basis of ``span_Q(B) ∩ Z^n`` for linearly independent integer rows B.

    The result is returned in Hermite normal form.
    """
    rows = _int_rows(B)
    k = B.nrows
    if k == 0:
        return B
    if Matrix.from_ints(rows, B.ncols).rank() != k:
        raise ValueError("saturate: rows are linearly dependent")
    _, _, V = smith_normal_form(Matrix.from_ints(rows, B.ncols))
    Vinv = _unimodular_inverse(V.to_ints())
    H, _ = _hnf_rows([r[:] for r in Vinv[:k]], track=False)
    return Matrix.from_ints(H, B.ncols)


def _unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    inv = Matrix.from_ints(V).inverse()
    return inv.to_ints()


def signature(G: Matrix) -> tuple[int, int]:
    """Exact inertia ``(n_plus, n_minus)`` of a nondegenerate symmetric matrix."""
    if not G.is_symmetric():
        raise ValueError("signature: matrix is not symmetric")
    n = G.nrows
    A = [list(r) for r in G.rows]
    active = list(range(n))
    pos = neg = 0
    while active:
        p = next((i for i in active if A[i][i]), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if i < j and A[i][j]), None)
            if pair is None:
                K = nullspace(G)
                raise DegenerateFormError(
                    f"form is degenerate (kernel rank {K.nrows})", K.row(0)
                )
            i, j = pair
            # congruence e_i -> e_i + e_j makes the (i,i) entry 2*A[i][j] != 0
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            p = i
        piv = A[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(p)
        for i in active:
            if A[i][p]:
                f = A[i][p] / piv
                for j in active:
                    A[i][j] -= f * A[p][j]
        for i in active:
            A[i][p] = A[p][i] = Fraction(0)
    return pos, neg
