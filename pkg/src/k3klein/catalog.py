"""Every named lattice of the construction, in fixed coordinates.

Coordinate systems
------------------
``X``      H^2(X) presented over W: a1..h2 (eight A2), z,w (A2(2)), x,y (U(3)),
           v1,v2 ([[4,2],[2,4]]).
``Ztau``   pi_tau* W on a,c,e,f,g,x,y,v plus exceptional classes n1..n8.
``Zphi``   pi_phi* W on a,b,e,g,z,w,x,y,v plus n1..n8.
``Ytau``   residual-quotient coordinates a,e,g,x,y,v, the images n1..n4 of the
           exceptional pairs, and the new exceptional classes m1..m8.
``Yphi``   as ``Ytau`` with images n1,n2,n3,n6.

Inside each space unadorned names refer to that space's coordinates; a
symbol defined upstairs (alpha, s1, ...) denotes its image downstairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .expr import Space, Vector
from .lattice import Embedding, Lattice, direct_sum, lattice, root_lattice, twist
from .linalg import Matrix

A2 = [[-2, 1], [1, -2]]
A2_2 = [[-4, 2], [2, -4]]
A2_4 = [[-8, 4], [4, -8]]
V4 = [[4, 2], [2, 4]]
A1 = [[-2]]


def _hyperbolic(n: int):
    return [[0, n], [n, 0]]


def _scaled(block, n):
    return [[n * x for x in row] for row in block]


def _blocks(*bs) -> Matrix:
    return Matrix.block_diagonal([Matrix(b) for b in bs])


X_COORDS = "a1 a2 b1 b2 c1 c2 d1 d2 e1 e2 f1 f2 g1 g2 h1 h2 z w x y v1 v2".split()
EXC = [f"n{i}" for i in range(1, 9)]
NEW_EXC = [f"m{i}" for i in range(1, 9)]
ZTAU_COORDS = "a1 a2 c1 c2 e1 e2 f1 f2 g1 g2 x y v1 v2".split() + EXC
ZPHI_COORDS = "a1 a2 b1 b2 e1 e2 g1 g2 z w x y v1 v2".split() + EXC
Y_BASE = "a1 a2 e1 e2 g1 g2 x y v1 v2".split()
YTAU_COORDS = Y_BASE + ["n1", "n2", "n3", "n4"] + NEW_EXC
YPHI_COORDS = Y_BASE + ["n1", "n2", "n3", "n6"] + NEW_EXC

X_GRAM = _blocks(*[A2] * 8, A2_2, _hyperbolic(3), V4)
ZTAU_GRAM = _blocks(A2, A2, A2_2, A2_2, A2, _hyperbolic(6), _scaled(V4, 2), *[A1] * 8)
ZPHI_GRAM = _blocks(A2, A2, A2, A2, A2_4, _hyperbolic(6), _scaled(V4, 2), *[A1] * 8)
Y_GRAM = _blocks(A2, A2_2, A2_2, _hyperbolic(12), _scaled(V4, 4), *[A1] * 12)

# H^2(X) over W
X_GLUE = {
    "alpha": "(-a1+a2+d1-d2-e1+e2+f1-f2-g1+g2+h1-h2)/3",
    "beta": "(-b1+b2+c1-c2-e1+e2+f1-f2+g1-g2-h1+h2)/3",
    "gamma": "(x-y-e1+e2-f1+f2)/3",
    "delta": "(x-c1+c2-d1+d2-e1+e2)/3",
    "epsilon": "(x-z+w+c1-c2-e1+e2-g1+g2+h1-h2)/3",
    "zeta": "(x+z+c1+c2+e1+e2+g1+g2+h1+h2+epsilon)/2+v2/2",
    "eta": "(x+c1+c2+e1+e2+epsilon)/2+(g1-g2+h1-h2)/6+v1/6-v2/3",
}
GREEK = list(X_GLUE)

INVARIANT_BASE = ["a1+b1+c1+d1", "a2+b2+c2+d2", "e1+f1", "e2+f2", "g1+h1", "g2+h2", "x", "y", "v1", "v2"]
INVARIANT_GLUE = ["(v1+v2+g1+h1-g2-h2)/3", "(a1+b1+c1+d1-(a2+b2+c2+d2)+e1+f1-e2-f2+x)/3", "gamma"]
DELTA_BASE = ["z", "w", "f1-e1", "f2-e2", "h1-g1", "h2-g2", "b1-a1", "a1-c1", "c1-d1", "a2-b2", "c2-a2", "d2-c2"]
OMEGA_GLUE = [
    "(a1-b1-c1+d1-a2+b2+c2-d2+z-w)/3",
    "(-a1+d1+a2-d2-e1+f1+e2-f2-g1+h1+g2-h2)/3",
    "(a1+b1-c1-d1-a2-b2+c2+d2-e1+f1+e2-f2)/3",
]

# involutions on X, as coordinate swaps (index suffixes 1,2 implied) and negations
TAU_SWAPS = [("a", "b"), ("c", "d"), ("g", "h")]
TAU_NEGATE = ["z", "w"]
PHI_SWAPS = [("a", "d"), ("b", "c"), ("e", "f"), ("g", "h")]
PHI_NEGATE: list[str] = []

# pushforward block tables: source coordinate letter -> target coordinate letter (None: killed)
PUSH_TAU = {"a": "a", "b": "a", "c": "c", "d": "c", "e": "e", "f": "f", "g": "g", "h": "g",
            "z": None, "w": None, "x": "x", "y": "y", "v": "v"}
PUSH_PHI = {"a": "a", "d": "a", "b": "b", "c": "b", "e": "e", "f": "e", "g": "g", "h": "g",
            "z": "z", "w": "w", "x": "x", "y": "y", "v": "v"}
# residual involutions on the intermediate quotients
PHIHAT_SWAPS = [("a", "c"), ("e", "f")]
PHIHAT_NEGATE: list[str] = []
PHIHAT_PAIRING = [("n1", "n8"), ("n2", "n5"), ("n3", "n7"), ("n4", "n6")]
TAUHAT_SWAPS = [("a", "b")]
TAUHAT_NEGATE = ["z", "w"]
TAUHAT_PAIRING = [("n1", "n5"), ("n2", "n4"), ("n3", "n8"), ("n6", "n7")]
PUSH_PHIHAT = {"a": "a", "c": "a", "e": "e", "f": "e", "g": "g", "x": "x", "y": "y", "v": "v"}
PUSH_TAUHAT = {"a": "a", "b": "a", "e": "e", "g": "g", "z": None, "w": None, "x": "x", "y": "y", "v": "v"}

# images of the X glue listed for the intermediate quotients (cross-checked, not used to build)
ZTAU_LISTED = {
    "alpha": "(-a1+a2+c1-c2-e1+e2+f1-f2)/3",
    "gamma": "(x-y-e1+e2-f1+f2)/3",
    "delta": "(x-2*c1+2*c2-e1+e2)/3",
    "epsilon": "(x+c1-c2-e1+e2)/3",
    "zeta": "(x+c1+c2+e1+e2+epsilon)/2+v2/2+g1+g2",
    "eta": "(x+c1+c2+e1+e2+epsilon)/2+(g1-g2-v2)/3+v1/6",
}
ZPHI_LISTED = {
    "gamma": "(x-y-2*e1+2*e2)/3",
    "delta": "(x-b1+b2-a1+a2-e1+e2)/3",
    "epsilon": "(x-z+w+b1-b2-e1+e2)/3",
    "zeta": "(x+z+b1+b2+e1+e2+epsilon)/2+v2/2+g1+g2",
    "eta": "(x+b1+b2+e1+e2+epsilon)/2+(g1-g2-v2)/3+v1/6",
}
Y_LISTED = {
    "gamma": "(x-y-2*e1+2*e2)/3",
    "epsilon": "(x+a1-a2-e1+e2)/3",
    "zeta": "(x+a1+a2+e1+e2+v2+epsilon)/2+g1+g2",
    # the printed formula has an unbarred x in the first bracket
    "eta": "(x+a1+a2+e1+e2+epsilon)/2+(g1-g2-v2)/3+v1/6",
}

ZTAU_GLUE = {
    "nu": "(n1+n2+n3+n4+n5+n6+n7+n8)/2",
    "s1": "(c1-c2+e2+f2+gamma-epsilon+n5-n8+n3+n2)/2-n8",
    "s2": "(a1-a2-alpha+f1+f2-epsilon+n4-n8+n3+n2)/2-n8",
    "s3": "(e2+f1+n7+n5+n4+n3)/2-2*n8",
    "s4": "(c1-c2+e2+f1-epsilon+n7-n8+n5+n4)/2-n8",
    "s5": "(a1-a2+c1-c2-alpha+n6+n5+n4+n2)/2-2*n8",
    "s6": "(a1-a2+c1-c2-alpha+f1+n7-n8+n6+n3)/2-n8",
}
ZPHI_GLUE = {
    "nu": "(n1+n2+n3+n4+n5+n6+n7+n8)/2",
    "t1": "(b1+e2+g1+g2-epsilon+gamma+y+eta)/2+(n2+n3+n5+n8)/2",
    "t2": "(a1+a2+delta+z-epsilon)/2+(n2+n3+n4+n8)/2",
    "t3": "(gamma+y)/2+(n3+n4+n5+n7)/2",
    "t4": "(a1+a2+delta+epsilon+y)/2+(n4+n5+n7+n8)/2",
    "t5": "(b1+e2+g1+g2+epsilon+zeta)/2+(n2+n4+n5+n6)/2",
    "t6": "(a1+a2+delta+epsilon)/2+(n3+n6+n7+n8)/2",
}
ZTAU_D4 = {
    "d1": "(e2-f2+f1-e1+c1-a1-c2+a2)/3-f1+e1",
    "d2": "(e2-f2+f1-e1+c1-a1-c2+a2)/3",
    "d3": "a1-c1",
    "d4": "c1-a1+c2-a2",
}
ZPHI_D4 = {
    "dp1": "(2*b2-2*a2+z-w+b1-a1)/3",
    "dp2": "w+(2*b2-2*a2+z-w+b1-a1)/3",
    "dp3": "a2-b2",
    "dp4": "a1-b1",
}
GAMMA_TAU_GLUE = {"x1": "(d4-d2+n2+n4+n5+n6)/2", "x2": "(d1-d2+n3+n7+n2+n5)/2"}
GAMMA_PHI_GLUE_PRINTED = {"xp1": "(dp2-dp1+n2+n3+n4+n8)/2", "xp2": "(dp2+dp4+n3+n6+n7+n8)/2"}
# xp2 as printed is not in H^2(Z_phi); the only half-class of this shape completing
# N + D4(2) to its primitive closure (up to the lattice) is the one below
GAMMA_PHI_GLUE = {"xp1": GAMMA_PHI_GLUE_PRINTED["xp1"], "xp2": "(dp2+dp4+n1+n3+n5+n8)/2"}

YTAU_GLUE = {
    "mu1": "(m1+m2+m3+m4+m5+m6+m7+m8)/2",
    "k1": "(a2+e1+g2+eta)/2+(m2+m3+m5+m8)/2",
    "k2": "(g1+eta+zeta)/2+(m2+m3+m4+m8)/2",
    "k3": "(a1+a2+g1+s1+epsilon+s3+s4+n8)/2+(m3+m4+m5+m7)/2",
    "k4": "(a2+e1+zeta)/2+(m4+m5+m7+m8)/2",
    "k5": "(a2+e2+s1+zeta+s3+s4+n8)/2+(m2+m4+m5+m6)/2",
    "k6": "(a1+e2+epsilon+zeta)/2+(m3+m6+m7+m8)/2",
    "mu2": "(n1+n2+n3+n4+m1+m2+m7+m8)/2",
}
YPHI_GLUE_PRINTED = {
    "mu1": "(m1+m2+m3+m4+m5+m6+m7+m8)/2",
    "h1": "(e2+a1-t4-epsilon-zeta-n1-t3)/2+(m5+m3+m2+m8)/2",
    "h2": "(a2-t4-zeta-n1-t3)/2+(m4+m3+m2+m8)/2",
    "h3": "(g2+e2+e1+a2-t4-zeta-n1-t3)/2+(m7+m5+m4+m3)/2",
    "h4": "(g2+e2+a2-t4-zeta-n1-t3)/2+(m7+m5+m4+m8)/2",
    "h5": "(g1+e2+a1-epsilon+a2)/2+(m6+m5+m4+m2)/2",
    "h6": "(g1+g2+e1)/2+(m7+m6+m3+m8)/2",
    "mu2p": "(n1+n2+n3+n6+m3+m4+m5+m8)/2",
}
# h1..h4 as printed pair half-integrally with the pushed lattice; adding a1
# inside their common half-sum is the unique one-term repair (see tests)
YPHI_GLUE = {k: (v.replace("-t3)/2", "-t3+a1)/2") if k in ("h1", "h2", "h3", "h4") else v)
             for k, v in YPHI_GLUE_PRINTED.items()}
Y_EXTRA_GLUE = {"gamma_half": "gamma/2"}

# NS(X_omega): trivial lattice coordinates
NS_COORDS = ["F", "s"] + [f"C{i}" for i in range(1, 11)] + [f"D{i}" for i in range(1, 6)] + ["E1", "E2", "E3"]
NS_SECTIONS = {
    "t": "2*F+s-(C1+C2+C3+C4+C5+C6+C7+C8+D2+D3+D4)-(C9+C10+D1+D3+D5+E1+E2+E3)/2",
    "r": "2*F+s-(C1+2*C2+3*C3+4*C4+5*C5+6*C6+7*C7+8*C8+4*C9+5*C10+E1+E2+E3)/2",
    "q": "2*F+s-(C1+2*C2+3*C3+4*C4+5*C5+6*C6+7*C7+8*C8+5*C9+4*C10+D1+2*D2+3*D3+2*D4+D5)/2",
}
NS_DERIVED = {
    "C0": "F-C1-2*(C2+C3+C4+C5+C6+C7+C8)-C9-C10",
    "D0": "F-(D1+D2+D3+D4+D5)",
    "S1": "C3+2*C4+3*C5+2*C6+C7",
    "S2": "4*F+2*t+2*s-(2*C2+3*C3+4*C4+5*C5+6*C6+7*C7+8*C8+4*C9+4*C10)",
    "S3": "E1-E2",
    "S4": "-3*(E1+E2)-4*(2*r-2*F-t-s+C2+2*C3+3*C4+4*C5+5*C6+6*C7+7*C8)"
          "+2*(-7*C9-9*C10+D1+2*D2+3*D3+2*D4+D5)",
}
NS_GLUE = {
    "u1": "(q-s+C0-C3+C4-C6+C7-C9-D1+D2+D4-D5)/3",
    "u2": "(r-t+C1-C3+C4-C6+C7-C10+D1-D2-D4+D5)/3",
    "u3": "(S1-C3+C4+C6-C7)/3",
    "u4": "((S1+S2)/2-q-r-C3+C4+C9+C10)/3",
    "u5": "((S1+S2+S3+S4)/2+r-C3+C4-C10-D1+D2+D4-D5+S3)/3",
}
NS_BASIS = ["F", "s", "t", "r"] + [f"C{i}" for i in range(2, 11)] + [f"D{i}" for i in range(1, 6)] + ["E1", "E2"]
NS_A2_PAIRS = [("s", "C0"), ("t", "C1"), ("r", "C10"), ("q", "C9"), ("C3", "C4"), ("C7", "C6"), ("D1", "D2"), ("D4", "D5")]


class CatalogError(ValueError):
    pass


@dataclass
class CatalogEntry:
    name: str
    space: Space
    embedding: Embedding
    generator_names: list[str]
    glue_names: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def lattice(self) -> Lattice:
        return self.embedding.lattice

    def symbol(self, name: str) -> Vector:
        return self.space[name]

    def to_json(self) -> dict:
        out = self.embedding.to_json()
        out["name"] = self.name
        out["coordinates"] = list(self.space.coords)
        out["generators"] = list(self.generator_names)
        out["symbols"] = self.space.symbol_table()
        out["rank"] = self.lattice.rank
        out["signature"] = list(self.lattice.signature)
        out["det"] = self.lattice.det
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def symbol(entry: CatalogEntry, name: str) -> Vector:
    return entry.space[name]


# -- coordinate maps --------------------------------------------------------

def swap_map(space: Space, swaps: Sequence[tuple[str, str]], negate: Sequence[str] = (),
             pairing: Sequence[tuple[str, str]] = ()) -> Matrix:
    """Signed permutation matrix (row convention) on the coordinates of ``space``."""
    target = {c: c for c in space.coords}
    for a, b in swaps:
        for c in space.coords:
            if c[0] == a and c[1:].isdigit() and (b + c[1:]) in space.index:
                target[c] = b + c[1:]
                target[b + c[1:]] = c
    for a, b in pairing:
        target[a], target[b] = b, a
    neg = set()
    for n in negate:
        neg.update(c for c in space.coords if c == n or (c[0] == n and c[1:].isdigit()))
    n = space.dim
    rows = [[Fraction(0)] * n for _ in range(n)]
    for c, t in target.items():
        rows[space.index[c]][space.index[t]] = Fraction(-1 if c in neg else 1)
    return Matrix(rows)


def table_map(source: Space, target: Space, letters: dict, pairing: Sequence[tuple[str, str]] = ()) -> Matrix:
    """Coordinate map from a block table: letter -> letter (None: killed).

    Exceptional coordinates not covered by ``pairing`` are killed; each pair
    is sent to whichever of its two names is a target coordinate.
    """
    rows = [[Fraction(0)] * target.dim for _ in range(source.dim)]
    for c in source.coords:
        i = source.index[c]
        if c in EXC:
            continue
        letter, idx = (c[0], c[1:]) if c[1:].isdigit() else (c, "")
        if letter not in letters:
            raise CatalogError(f"{source.name}: no image listed for {c}")
        t = letters[letter]
        if t is None:
            continue
        tname = t + idx
        if tname not in target.index:
            raise CatalogError(f"{target.name}: no coordinate {tname}")
        rows[i][target.index[tname]] = Fraction(1)
    for a, b in pairing:
        t = a if a in target.index else b
        if t not in target.index:
            raise CatalogError(f"{target.name}: pair ({a},{b}) has no image coordinate")
        rows[source.index[a]][target.index[t]] = Fraction(1)
        rows[source.index[b]][target.index[t]] = Fraction(1)
    return Matrix(rows)


def _push_symbols(source: Space, target: Space, P: Matrix, names: Sequence[str]):
    for name in names:
        img = P.apply(source[name])
        if name in target.index:
            if target[name] != img:
                raise CatalogError(f"{target.name}: image of {name} is not the coordinate {name}")
            continue
        target.define(name, img)


def _define_all(space: Space, table: dict):
    for k, v in table.items():
        space.define(k, v)


def _span_entry(name: str, space: Space, gens: list[str], glue: list[str], exprs: Sequence[str] | None = None,
                notes=None) -> CatalogEntry:
    vecs = [space[g] for g in gens] if exprs is None else [space.parse(e) for e in exprs]
    vecs += [space[g] for g in glue]
    emb = Embedding.from_generators(space.lattice, Matrix(vecs), name)
    return CatalogEntry(name, space, emb, list(gens) if exprs is None else list(exprs), list(glue), notes or [])


# -- spaces -----------------------------------------------------------------

@lru_cache(maxsize=None)
def x_space() -> Space:
    S = Space("X", X_COORDS, X_GRAM)
    _define_all(S, X_GLUE)
    return S


@lru_cache(maxsize=None)
def ztau_space() -> Space:
    S = Space("Ztau", ZTAU_COORDS, ZTAU_GRAM)
    _push_symbols(x_space(), S, table_map(x_space(), S, PUSH_TAU), GREEK)
    _define_all(S, ZTAU_GLUE)
    _define_all(S, ZTAU_D4)
    _define_all(S, GAMMA_TAU_GLUE)
    return S


@lru_cache(maxsize=None)
def zphi_space() -> Space:
    S = Space("Zphi", ZPHI_COORDS, ZPHI_GRAM)
    _push_symbols(x_space(), S, table_map(x_space(), S, PUSH_PHI), GREEK)
    _define_all(S, ZPHI_GLUE)
    _define_all(S, ZPHI_D4)
    _define_all(S, GAMMA_PHI_GLUE)
    return S


@lru_cache(maxsize=None)
def ytau_space() -> Space:
    S = Space("Ytau", YTAU_COORDS, Y_GRAM)
    Z = ztau_space()
    P = table_map(Z, S, PUSH_PHIHAT, PHIHAT_PAIRING)
    _push_symbols(Z, S, P, GREEK + list(ZTAU_GLUE) + EXC)
    _define_all(S, YTAU_GLUE)
    _define_all(S, Y_EXTRA_GLUE)
    return S


@lru_cache(maxsize=None)
def yphi_space() -> Space:
    S = Space("Yphi", YPHI_COORDS, Y_GRAM)
    Z = zphi_space()
    P = table_map(Z, S, PUSH_TAUHAT, TAUHAT_PAIRING)
    _push_symbols(Z, S, P, GREEK + list(ZPHI_GLUE) + EXC)
    _define_all(S, YPHI_GLUE)
    _define_all(S, Y_EXTRA_GLUE)
    return S


@lru_cache(maxsize=None)
def ns_space() -> Space:
    n = len(NS_COORDS)
    g = [[0] * n for _ in range(n)]
    idx = {c: i for i, c in enumerate(NS_COORDS)}

    def put(a, b, val):
        g[idx[a]][idx[b]] = g[idx[b]][idx[a]] = val

    put("F", "s", 1)
    put("s", "s", -2)
    for c in NS_COORDS[2:]:
        g[idx[c]][idx[c]] = -2
    # I*_6 components C1..C10 (C0 meets s and is eliminated through the fibre)
    put("C1", "C2", 1)
    for i in range(2, 8):
        put(f"C{i}", f"C{i + 1}", 1)
    put("C8", "C9", 1)
    put("C8", "C10", 1)
    # I_6 components D1..D5 (chain; D0 meets s)
    for i in range(1, 5):
        put(f"D{i}", f"D{i + 1}", 1)
    S = Space("NS_Xomega", NS_COORDS, Matrix(g))
    _define_all(S, NS_SECTIONS)
    _define_all(S, NS_DERIVED)
    _define_all(S, NS_GLUE)
    return S


# -- builders ---------------------------------------------------------------

def _overlattice_entry(name, space, base, glue, notes=None) -> CatalogEntry:
    return _span_entry(name, space, list(base), list(glue), notes=notes)


def _build_lambda_k3() -> CatalogEntry:
    E8 = root_lattice("E", 8)
    U = lattice(_hyperbolic(1), "U")
    L = direct_sum(U, U, U, E8, E8, label="Lambda_K3")
    coords = ["u1", "u2", "u3", "u4", "u5", "u6"] + [f"e{i}" for i in range(1, 17)]
    S = Space("Lambda_K3", coords, L.gram)
    return _span_entry("Lambda_K3", S, coords, [])


def _build_w() -> CatalogEntry:
    S = x_space()
    return _span_entry("W", S, X_COORDS, [])


def _build_h2x() -> CatalogEntry:
    return _span_entry("H2X", x_space(), X_COORDS, GREEK)


def _build_invariant() -> CatalogEntry:
    S = x_space()
    exprs = INVARIANT_BASE + INVARIANT_GLUE
    return _span_entry("InvariantI", S, [], [], exprs=exprs)


def _build_delta() -> CatalogEntry:
    return _span_entry("Delta", x_space(), [], [], exprs=DELTA_BASE)


def _build_omega() -> CatalogEntry:
    return _span_entry("Omega22", x_space(), [], [], exprs=DELTA_BASE + OMEGA_GLUE)


def _build_nikulin() -> CatalogEntry:
    S = Space("N", EXC, Matrix.block_diagonal([Matrix(A1)] * 8))
    S.define("nu", ZTAU_GLUE["nu"])
    return _span_entry("N", S, EXC, ["nu"])


def _build_m22_model() -> CatalogEntry:
    coords = [f"v{i}" for i in range(1, 13)]
    S = Space("M22", coords, Matrix.block_diagonal([Matrix(A1)] * 12))
    S.define("mu1", "(v1+v2+v3+v4+v5+v6+v7+v8)/2")
    S.define("mu2", "(v5+v6+v7+v8+v9+v10+v11+v12)/2")
    return _span_entry("M22", S, coords, ["mu1", "mu2"])


def _build_d4_2() -> CatalogEntry:
    L = twist(root_lattice("D", 4), 2, "D4(2)")
    S = Space("D4_2", ["r1", "r2", "r3", "r4"], L.gram)
    return _span_entry("D4_2", S, list(S.coords), [])


def _ztau_generators() -> list[str]:
    return [f"pi({g})" for g in X_COORDS + GREEK]


def _pushed_lattice_rows(source_entry: CatalogEntry, P: Matrix) -> list[Vector]:
    return [P.apply(r) for r in source_entry.embedding.basis.rows]


def _build_h2z(name: str, space: Space, letters: dict, glue: dict) -> CatalogEntry:
    P = table_map(x_space(), space, letters)
    rows = _pushed_lattice_rows(_build_h2x(), P)
    rows += [space[n] for n in EXC] + [space[g] for g in glue]
    emb = Embedding.from_generators(space.lattice, Matrix(rows), name)
    return CatalogEntry(name, space, emb, _ztau_generators() + EXC, list(glue))


def _build_h2y(name: str, space: Space, zentry: CatalogEntry, letters: dict, pairing, glue: dict) -> CatalogEntry:
    P = table_map(zentry.space, space, letters, pairing)
    rows = _pushed_lattice_rows(zentry, P)
    rows += [space[m] for m in NEW_EXC] + [space[g] for g in glue]
    emb = Embedding.from_generators(space.lattice, Matrix(rows), name)
    return CatalogEntry(name, space, emb, [f"pi({g})" for g in zentry.space.coords] + NEW_EXC, list(glue))


def _build_gamma(name: str, space: Space, d4: dict, glue: dict) -> CatalogEntry:
    return _span_entry(name, space, list(d4) + EXC + ["nu"], list(glue))


def _build_ns_xomega() -> CatalogEntry:
    S = ns_space()
    G = S.lattice.gram
    for sec in ("t", "r", "q"):
        sq = G.bilinear(S[sec], S[sec])
        if sq != -2:
            raise CatalogError(f"NS_Xomega: {sec}^2 = {sq}, expected -2")
    B = Matrix([S[b] for b in NS_BASIS])
    emb = Embedding(S.lattice, B, "NS_Xomega")
    return CatalogEntry("NS_Xomega", S, emb, list(NS_BASIS), [])


_BUILDERS = {
    "Lambda_K3": _build_lambda_k3,
    "W": _build_w,
    "H2X": _build_h2x,
    "Omega22": _build_omega,
    "InvariantI": _build_invariant,
    "Delta": _build_delta,
    "N": _build_nikulin,
    "M22": _build_m22_model,
    "GammaTau": lambda: _build_gamma("GammaTau", ztau_space(), ZTAU_D4, GAMMA_TAU_GLUE),
    "GammaPhi": lambda: _build_gamma("GammaPhi", zphi_space(), ZPHI_D4, GAMMA_PHI_GLUE),
    "D4_2": _build_d4_2,
    "NS_Xomega": _build_ns_xomega,
    "H2Ztau": lambda: _build_h2z("H2Ztau", ztau_space(), PUSH_TAU, ZTAU_GLUE),
    "H2Zphi": lambda: _build_h2z("H2Zphi", zphi_space(), PUSH_PHI, ZPHI_GLUE),
    "H2Y_via_tau": lambda: _build_h2y("H2Y_via_tau", ytau_space(), build("H2Ztau"), PUSH_PHIHAT,
                                      PHIHAT_PAIRING, {k: v for k, v in YTAU_GLUE.items() if k != "mu2"}),
    "H2Y_via_phi": lambda: _build_h2y("H2Y_via_phi", yphi_space(), build("H2Zphi"), PUSH_TAUHAT,
                                      TAUHAT_PAIRING, {k: v for k, v in YPHI_GLUE.items() if k != "mu2p"}),
}

NAMES = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def build(name: str) -> CatalogEntry:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}") from None
    return builder()


def build_ns_xomega() -> CatalogEntry:
    return build("NS_Xomega")
