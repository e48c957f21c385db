"""Pushforward and pullback maps for the quotients of X by tau, phi and (Z/2)^2.

Maps are stored on ambient coordinates with the row convention ``v -> v @ matrix``.
A pushforward is defined on coordinates by a block table; its extension to the
overlattice is automatic because glue vectors are rational combinations of
coordinates.  Pullbacks are derived from ``pullback(push(c)) = sum_g g(c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from . import catalog as cat
from .action import coinvariant_sublattice, invariant_sublattice, phi_hat, phi_star, tau_hat, tau_star
from .expr import Space, add
from .lattice import Embedding, orthogonal_complement, same_subgroup, saturation, sublattice_index
from .linalg import Matrix

ROUTES = ("tau", "phi")


class RouteError(ValueError):
    pass


def _check_route(route: str):
    if route not in ROUTES:
        raise RouteError(f"unknown route {route!r}; expected one of {ROUTES}")


@dataclass(frozen=True)
class LatticeMap:
    """A linear map between lattices, on ambient coordinates."""

    name: str
    source: Embedding
    target: Embedding
    matrix: Matrix
    kind: str
    degree: int
    group: tuple[Matrix, ...] = ()  # ambient matrices of the covering group, identity included

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        return self.matrix.apply(v)

    @cached_property
    def image(self) -> Embedding:
        rows = [self.apply(r) for r in self.source.basis.rows]
        return Embedding.from_generators(self.target.ambient, rows, f"{self.name}(image)")

    def lands_in_target(self) -> bool:
        return all(self.target.contains(self.apply(r)) for r in self.source.basis.rows)

    def kills(self, v: Sequence) -> bool:
        return not any(self.apply(v))

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        """Composition self after other."""
        if self.kind != other.kind:
            raise ValueError("cannot compose a pushforward with a pullback")
        return LatticeMap(f"{self.name}.{other.name}", other.source, self.target,
                          other.matrix @ self.matrix, self.kind, self.degree * other.degree)


def orbit_sum(group: Sequence[Matrix]) -> Matrix:
    out = group[0]
    for g in group[1:]:
        out = out + g
    return out


def push_pull_defect(F: LatticeMap) -> Matrix:
    """F G_t F^T - (1/deg) S G_s S^T on the ambient basis, where S is the orbit sum.

    Zero exactly when the pushforward satisfies the push-pull formula.
    """
    Gs = F.source.ambient.gram
    Gt = F.target.ambient.gram
    S = orbit_sum(F.group)
    expected = (S @ Gs @ S.T).scale(Fraction(1, F.degree))
    return F.matrix @ Gt @ F.matrix.T - expected


def derived_target_gram(F: LatticeMap) -> tuple[list[str], Matrix, Matrix]:
    """Gram on the target coordinates hit by F, from push-pull versus as transcribed.

    Returns (coordinate names, derived Gram, transcribed Gram).
    """
    src, tgt = _space_of(F.source), _space_of(F.target)
    pre = _preimages(F, src, tgt)
    names = [t for t in tgt.coords if t in pre]
    Gs = F.source.ambient.gram
    S = orbit_sum(F.group)
    vecs = [S.apply(src[pre[t]]) for t in names]
    derived = Matrix([[Gs.bilinear(src[pre[a]], v) for v in vecs] for a in names])
    idx = [tgt.index[t] for t in names]
    transcribed = F.target.ambient.gram.select_rows(idx).select_cols(idx)
    return names, derived, transcribed


def _preimages(F: LatticeMap, src: Space, tgt: Space) -> dict[str, str]:
    """Target coordinate -> a source coordinate mapped onto exactly that coordinate."""
    out = {}
    for c in src.coords:
        row = F.matrix.rows[src.index[c]]
        hits = [j for j, x in enumerate(row) if x]
        if len(hits) == 1 and row[hits[0]] == 1:
            t = tgt.coords[hits[0]]
            out.setdefault(t, c)
    return out


_CATALOG_SPACES = (cat.x_space, cat.ztau_space, cat.zphi_space, cat.ytau_space, cat.yphi_space)


def _space_of(E: Embedding) -> Space:
    # Ytau and Yphi share a Gram matrix, so match on the label too
    for fn in _CATALOG_SPACES:
        S = fn()
        if E.ambient.label == S.name and E.ambient.gram == S.lattice.gram:
            return S
    raise ValueError("embedding does not live in a catalog space")


def _identity(n: int) -> Matrix:
    return Matrix.identity(n)


@lru_cache(maxsize=None)
def pushforward_tau() -> LatticeMap:
    X, Z = cat.build("H2X"), cat.build("H2Ztau")
    P = cat.table_map(X.space, Z.space, cat.PUSH_TAU)
    g = tau_star().matrix
    return LatticeMap("pi_tau_*", X.embedding, Z.embedding, P, "pushforward", 2, (_identity(g.nrows), g))


@lru_cache(maxsize=None)
def pushforward_phi() -> LatticeMap:
    X, Z = cat.build("H2X"), cat.build("H2Zphi")
    P = cat.table_map(X.space, Z.space, cat.PUSH_PHI)
    g = phi_star().matrix
    return LatticeMap("pi_phi_*", X.embedding, Z.embedding, P, "pushforward", 2, (_identity(g.nrows), g))


def _residual_data(route: str):
    _check_route(route)
    if route == "tau":
        return cat.build("H2Ztau"), cat.build("H2Y_via_tau"), cat.PUSH_PHIHAT, cat.PHIHAT_PAIRING, phi_hat()
    return cat.build("H2Zphi"), cat.build("H2Y_via_phi"), cat.PUSH_TAUHAT, cat.TAUHAT_PAIRING, tau_hat()


@lru_cache(maxsize=None)
def pushforward_residual(route: str) -> LatticeMap:
    """Quotient of Z_route by the residual involution (phi-hat on Z_tau, tau-hat on Z_phi)."""
    Z, Y, letters, pairing, inv = _residual_data(route)
    P = cat.table_map(Z.space, Y.space, letters, pairing)
    g = inv.matrix
    name = "pihat_phi_*" if route == "tau" else "pihat_tau_*"
    return LatticeMap(name, Z.embedding, Y.embedding, P, "pushforward", 2, (_identity(g.nrows), g))


def pushforward_first(route: str) -> LatticeMap:
    _check_route(route)
    return pushforward_tau() if route == "tau" else pushforward_phi()


@lru_cache(maxsize=None)
def pushforward_total(route: str = "tau") -> LatticeMap:
    """pi_22_* as residual after first quotient; route ``tau`` is the reference route."""
    first, second = pushforward_first(route), pushforward_residual(route)
    F = second @ first
    t, p = tau_star().matrix, phi_star().matrix
    group = (_identity(t.nrows), t, p, t @ p)
    return LatticeMap("pi_22_*", F.source, F.target, F.matrix, "pushforward", 4, group)


def matchings(items: Sequence[str]) -> Iterator[list[tuple[str, str]]]:
    """All perfect matchings of an even-sized list (105 for eight items)."""
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = list(items[1:i]) + list(items[i + 1:])
        for m in matchings(rest):
            yield [(a, items[i])] + m


def pairing_is_admissible(route: str, pairing: Sequence[tuple[str, str]]) -> bool:
    """Whether the push-pull form on the image of H^2(Z_route) is integral and even."""
    _check_route(route)
    Z = cat.build("H2Ztau" if route == "tau" else "H2Zphi")
    swaps, negate = ((cat.PHIHAT_SWAPS, cat.PHIHAT_NEGATE) if route == "tau"
                     else (cat.TAUHAT_SWAPS, cat.TAUHAT_NEGATE))
    g = cat.swap_map(Z.space, swaps, negate, pairing)
    B = Z.embedding.basis
    Q = B @ (_identity(g.nrows) + g)
    R = (Q @ Z.space.lattice.gram @ Q.T).scale(Fraction(1, 2))
    return R.is_integral() and all(R.rows[i][i].numerator % 2 == 0 for i in range(R.nrows))


def admissible_pairings(route: str) -> list[list[tuple[str, str]]]:
    """Brute force over all matchings of n1..n8; the residual pairing must be the only survivor."""
    return [m for m in matchings(cat.EXC) if pairing_is_admissible(route, m)]


def printed_pairing(route: str) -> list[tuple[str, str]]:
    _check_route(route)
    return [tuple(p) for p in (cat.PHIHAT_PAIRING if route == "tau" else cat.TAUHAT_PAIRING)]


def _normalize(m) -> frozenset:
    return frozenset(frozenset(p) for p in m)


def residual_pairing_is_unique(route: str) -> bool:
    found = admissible_pairings(route)
    return len(found) == 1 and _normalize(found[0]) == _normalize(printed_pairing(route))


# -- pullbacks ----------------------------------------------------------------

def _pullback_matrix(F: LatticeMap) -> Matrix:
    src, tgt = _space_of(F.source), _space_of(F.target)
    pre = _preimages(F, src, tgt)
    S = orbit_sum(F.group)
    zero = (Fraction(0),) * src.dim
    rows = [S.apply(src[pre[t]]) if t in pre else zero for t in tgt.coords]
    return Matrix(rows)


@lru_cache(maxsize=None)
def pullback(map_name: str, route: str = "tau") -> LatticeMap:
    """Dual maps: ``tau``/``phi`` (Z -> X), ``residual`` (Y -> Z_route), ``total`` (Y -> X)."""
    if map_name in ROUTES:
        F = pushforward_first(map_name)
    elif map_name == "residual":
        F = pushforward_residual(route)
    elif map_name == "total":
        return pullback(route) @ pullback("residual", route)
    else:
        raise ValueError(f"unknown map {map_name!r}")
    Q = _pullback_matrix(F)
    return LatticeMap(F.name.replace("_*", "^*"), F.target, F.source, Q, "pullback", F.degree, F.group)


def pushforward(map_name: str, route: str = "tau") -> LatticeMap:
    """Dispatch: ``tau``/``phi`` (X -> Z), ``residual`` (Z_route -> Y), ``total`` (X -> Y)."""
    if map_name in ROUTES:
        return pushforward_first(map_name)
    if map_name == "residual":
        return pushforward_residual(route)
    if map_name == "total":
        return pushforward_total(route)
    raise ValueError(f"unknown map {map_name!r}")


def push_then_pull(map_name: str, route: str = "tau") -> Matrix:
    """Pullback after pushforward on the source ambient; equals the orbit sum."""
    return pushforward(map_name, route).matrix @ pullback(map_name, route).matrix


# -- index claims ---------------------------------------------------------------

def residual_image(route: str = "tau") -> Embedding:
    """pi-hat_* of H^2(Z_route) inside H^2(Y)."""
    return pushforward_residual(route).image


def total_image(route: str = "tau") -> Embedding:
    return pushforward_total(route).image


def total_image_index(route: str = "tau") -> int:
    """Index of the total image in its primitive closure inside the residual image."""
    closure = saturation(total_image(route), residual_image(route))
    return sublattice_index(total_image(route), closure)


def gamma_half_witness(route: str = "tau") -> dict[str, bool]:
    """gamma-bar/2 lies in the residual image but not in the total image."""
    Y = cat.build("H2Y_via_tau" if route == "tau" else "H2Y_via_phi")
    w = Y.space["gamma_half"]
    return {"in_residual_image": residual_image(route).contains(w),
            "in_total_image": total_image(route).contains(w)}


S134_IDENTITY = "gamma/2+(a1-a2+e1+2*e2-epsilon+2*n2+n4+2*n3-5*n1)"


def s134_identity_holds() -> bool:
    """The residual pushforward of s1+s3+s4 on the tau route, as listed."""
    Y = cat.ytau_space()
    lhs = add(Y["s1"], Y["s3"], Y["s4"])
    return lhs == Y.parse(S134_IDENTITY)


PULLBACK_WITNESSES = {
    "(k4+k6)/2": "(k4+k6)/2",
    "(a1+epsilon+eta)/2": "(a1+epsilon+eta)/2",
    "gamma/4": "gamma/4",
}
PULLBACK_IMAGE_BASIS = ["a1", "gamma_half", "epsilon", "eta", "k1", "k2", "k3", "k4", "k5", "k6"]


@lru_cache(maxsize=None)
def invariant_lattice() -> Embedding:
    return invariant_sublattice([tau_star(), phi_star()])


@lru_cache(maxsize=None)
def pullback_image() -> Embedding:
    """Image of H^2(Y) under the total pullback (tau route), inside H^2(X)."""
    Q = pullback("total", "tau")
    Y = cat.build("H2Y_via_tau")
    rows = [Q.apply(r) for r in Y.embedding.basis.rows]
    return Embedding.from_generators(cat.build("H2X").embedding.ambient, rows, "pi_22^*(H2Y)")


def pullback_basis_matches() -> bool:
    """The listed Z-basis spans the whole pullback image."""
    Q = pullback("total", "tau")
    Y = cat.ytau_space()
    rows = [Q.apply(Y[n]) for n in PULLBACK_IMAGE_BASIS]
    listed = Embedding.from_generators(pullback_image().ambient, rows, "listed")
    return same_subgroup(listed, pullback_image())


def pullback_index() -> int:
    return sublattice_index(pullback_image(), invariant_lattice())


def pullback_witnesses() -> dict[str, dict[str, bool]]:
    Q = pullback("total", "tau")
    Y = cat.ytau_space()
    H2X = cat.build("H2X").embedding
    out = {}
    for label, expr in PULLBACK_WITNESSES.items():
        v = Q.apply(Y.parse(expr))
        out[label] = {"integral": H2X.contains(v), "in_image": pullback_image().contains(v)}
    return out


# -- Gamma22, D4(2), M22 -------------------------------------------------------------

def _z_entry(route: str):
    _check_route(route)
    return cat.build("H2Ztau" if route == "tau" else "H2Zphi")


def pushed_omega(route: str) -> Embedding:
    """pi_route_*(Omega22) as a sublattice of H^2(Z_route)."""
    F = pushforward_first(route)
    om = cat.build("Omega22").embedding
    rows = [F.apply(r) for r in om.basis.rows]
    return Embedding.from_generators(F.target.ambient, rows, f"pi_{route}_*(Omega22)")


def exceptional_lattice(route: str) -> Embedding:
    Z = _z_entry(route)
    rows = [Z.space[n] for n in cat.EXC] + [Z.space["nu"]]
    return Embedding.from_generators(Z.space.lattice, rows, "N")


@lru_cache(maxsize=None)
def gamma22(route: str) -> Embedding:
    """Primitive closure of N + pi_*(Omega22) in H^2(Z_route)."""
    Z = _z_entry(route)
    rows = list(exceptional_lattice(route).basis.rows) + list(pushed_omega(route).basis.rows)
    E = Embedding.from_generators(Z.space.lattice, rows, f"Gamma22_{route}")
    return saturation(E, Z.embedding)


def gamma22_matches_catalog(route: str) -> bool:
    ref = cat.build("GammaTau" if route == "tau" else "GammaPhi").embedding
    return same_subgroup(gamma22(route), ref)


def d4_matches_catalog(route: str = "tau") -> bool:
    """pi_*(Omega22) is spanned by the listed D4(2) generators."""
    names = list(cat.ZTAU_D4 if route == "tau" else cat.ZPHI_D4)
    Z = _z_entry(route)
    E = Embedding.from_generators(Z.space.lattice, [Z.space[n] for n in names], "D4(2)")
    return same_subgroup(E, pushed_omega(route))


def _y_entry(route: str):
    _check_route(route)
    return cat.build("H2Y_via_tau" if route == "tau" else "H2Y_via_phi")


M22_RATIONAL_GENERATORS = {
    "tau": ["n1", "n2", "n3", "n4"] + cat.NEW_EXC,
    "phi": ["n1", "n2", "n3", "n6"] + cat.NEW_EXC,
}
M22_GLUE = {"tau": ["mu1", "mu2"], "phi": ["mu1", "mu2p"]}


@lru_cache(maxsize=None)
def m22(route: str) -> Embedding:
    """Primitive closure of the exceptional classes in H^2(Y)."""
    Y = _y_entry(route)
    rows = [Y.space[n] for n in M22_RATIONAL_GENERATORS[route]]
    E = Embedding.from_generators(Y.space.lattice, rows, f"M22_{route}")
    return saturation(E, Y.embedding)


def m22_from_listed_glue(route: str) -> Embedding:
    Y = _y_entry(route)
    names = M22_RATIONAL_GENERATORS[route] + M22_GLUE[route]
    return Embedding.from_generators(Y.space.lattice, [Y.space[n] for n in names], f"M22_{route}(listed)")


def m22_glue_integral(route: str) -> dict[str, bool]:
    Y = _y_entry(route)
    return {g: Y.embedding.contains(Y.space[g]) for g in M22_GLUE[route]}


OMEGA2_SPANNERS = ["n1+n8", "n2+n5", "n3+n7", "n4+n6", "e1+f1", "e2+f2", "a1+c1", "a2+c2"]


def omega2_in_gamma22() -> Embedding:
    """Orthogonal complement inside Gamma22 (tau route) of the listed phi-hat invariant classes."""
    Z = cat.build("H2Ztau")
    E = Embedding.from_generators(Z.space.lattice, [Z.space.parse(s) for s in OMEGA2_SPANNERS], "spanners")
    out = orthogonal_complement(E, gamma22("tau"))
    return Embedding(out.ambient, out.basis, "Omega2")


def phihat_coinvariant() -> Embedding:
    return coinvariant_sublattice([phi_hat()])


def m22_from_gamma22(route: str) -> Embedding:
    """Primitive closure in H^2(Y) of N' plus the residual image of Gamma22."""
    Y = _y_entry(route)
    F = pushforward_residual(route)
    rows = [F.apply(r) for r in gamma22(route).basis.rows] + [Y.space[m] for m in cat.NEW_EXC]
    E = Embedding.from_generators(Y.space.lattice, rows, "N+pihat(Gamma22)")
    return saturation(E, Y.embedding)


def listed_images_mismatches(stage: str) -> dict[str, tuple[str, str]]:
    """Listed images of the X glue against the computed pushforward images.

    ``stage`` is one of ``tau``, ``phi``, ``total``.  Returns the names where the
    listed formula differs from the computed image (empty when all agree).
    """
    table, space, F = {
        "tau": (cat.ZTAU_LISTED, cat.ztau_space(), pushforward_tau()),
        "phi": (cat.ZPHI_LISTED, cat.zphi_space(), pushforward_phi()),
        "total": (cat.Y_LISTED, cat.ytau_space(), pushforward_total("tau")),
    }[stage]
    X = cat.x_space()
    out = {}
    for name, expr in table.items():
        computed = F.apply(X[name])
        listed = space.parse(expr)
        if computed != listed:
            out[name] = (space.format(listed), space.format(computed))
    return out
