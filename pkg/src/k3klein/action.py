"""The symplectic (Z/2)^2 action on H^2(X) and its (co)invariant lattices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from . import catalog as cat
from .lattice import Embedding, orthogonal_complement
from .linalg import Matrix, integer_nullspace

# fixed-point data of the three involutions (documentation only)
FIXED_POINTS_PER_INVOLUTION = 8
FIXED_POINTS_TOTAL = 24


class IsometryError(ValueError):
    pass


@dataclass(frozen=True)
class Isometry:
    """An isometry of ``host`` given on ambient coordinates (row convention: v -> v @ matrix).

    ``host`` is a sublattice of the rational span of its ambient lattice; the
    matrix may be rational but must preserve the form and map host onto host.
    """

    name: str
    matrix: Matrix
    host: Embedding

    def __post_init__(self):
        G = self.host.ambient.gram
        M = self.matrix
        if M @ G @ M.T != G:
            raise IsometryError(f"{self.name}: does not preserve the form")
        H = self.on_host
        if not H.is_integral() or abs(H.det()) != 1:
            raise IsometryError(f"{self.name}: does not map the lattice onto itself")

    @cached_property
    def on_host(self) -> Matrix:
        """The matrix in the host basis (integral, unimodular)."""
        B = self.host.basis
        return B @ self.matrix @ B.inverse()

    def apply(self, v: Sequence):
        return self.matrix.apply(v)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        """Composition: (self @ other)(v) = self(other(v))."""
        if other.host.basis != self.host.basis:
            raise IsometryError("isometries act on different lattices")
        return Isometry(f"{self.name}{other.name}", other.matrix @ self.matrix, self.host)

    @property
    def order(self) -> int:
        Id = Matrix.identity(self.matrix.nrows)
        P = self.matrix
        k = 1
        while P != Id:
            P = P @ self.matrix
            k += 1
            if k > 24:
                raise IsometryError(f"{self.name}: order exceeds 24")
        return k

    def fixes(self, v: Sequence) -> bool:
        return self.apply(v) == tuple(v)


def _h2x_isometry(name: str, swaps, negate) -> Isometry:
    entry = cat.build("H2X")
    M = cat.swap_map(entry.space, swaps, negate)
    return Isometry(name, M, entry.embedding)


@lru_cache(maxsize=None)
def tau_star() -> Isometry:
    return _h2x_isometry("tau", cat.TAU_SWAPS, cat.TAU_NEGATE)


@lru_cache(maxsize=None)
def phi_star() -> Isometry:
    return _h2x_isometry("phi", cat.PHI_SWAPS, cat.PHI_NEGATE)


@lru_cache(maxsize=None)
def rho_star() -> Isometry:
    g = tau_star() @ phi_star()
    return Isometry("rho", g.matrix, g.host)


@lru_cache(maxsize=None)
def phi_hat() -> Isometry:
    """Residual involution on H^2(Z_tau)."""
    entry = cat.build("H2Ztau")
    M = cat.swap_map(entry.space, cat.PHIHAT_SWAPS, cat.PHIHAT_NEGATE, cat.PHIHAT_PAIRING)
    return Isometry("phihat", M, entry.embedding)


@lru_cache(maxsize=None)
def tau_hat() -> Isometry:
    """Residual involution on H^2(Z_phi)."""
    entry = cat.build("H2Zphi")
    M = cat.swap_map(entry.space, cat.TAUHAT_SWAPS, cat.TAUHAT_NEGATE, cat.TAUHAT_PAIRING)
    return Isometry("tauhat", M, entry.embedding)


GENERATORS = {"tau": tau_star, "phi": phi_star, "rho": rho_star}


def invariant_sublattice(isos: Sequence[Isometry], host: Embedding | None = None) -> Embedding:
    """Vectors of host fixed by every isometry (primitive in host)."""
    if host is None:
        if not isos:
            raise ValueError("host required when no isometries are given")
        host = isos[0].host
    B = host.basis
    if not isos:
        return Embedding(host.ambient, B, "invariant")
    Id = Matrix.identity(B.ncols)
    cols = [B @ (g.matrix - Id) for g in isos]
    stacked = Matrix([sum((c.rows[i] for c in cols), ()) for i in range(B.nrows)])
    K = integer_nullspace(stacked.T)
    basis = K @ B if K.nrows else Matrix.zeros(0, B.ncols)
    return Embedding(host.ambient, basis, "invariant")


def coinvariant_sublattice(isos: Sequence[Isometry], host: Embedding | None = None) -> Embedding:
    if host is None:
        if not isos:
            raise ValueError("host required when no isometries are given")
        host = isos[0].host
    inv = invariant_sublattice(isos, host)
    if inv.rank == host.rank:
        return Embedding(host.ambient, Matrix.zeros(0, host.basis.ncols), "coinvariant")
    out = orthogonal_complement(inv, host)
    return Embedding(out.ambient, out.basis, "coinvariant")


def generator_images(g: Isometry) -> dict[str, tuple]:
    """Images of the named generators of the host under g, in host coordinates."""
    entry = cat.build("H2X")
    out = {}
    for name in list(entry.space.coords) + cat.GREEK:
        img = g.apply(entry.space[name])
        c = g.host.coordinates(img)
        if c is None:
            raise IsometryError(f"{g.name}({name}) is not integral")
        out[name] = c
    return out
