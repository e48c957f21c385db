"""Neron-Severi overlattices, ample classes and the X / Z / Y family correspondence.

Degrees follow one convention throughout: a family over base S in degree n is
an overlattice of S + <2n>.  For X the degree is d (L^2 = 2d), for the
intermediate quotients it is x, for Y it is e.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence

from . import catalog as cat
from .classes import ClassRecord, class_of, enumerate_classes
from .lattice import (
    Embedding,
    Fingerprint,
    Lattice,
    direct_sum,
    discriminant_group,
    genus_fingerprint,
    mod2,
    overlattice_from_glue,
    saturation,
)
from .linalg import Matrix
from .quotients import _y_entry, _z_entry, gamma22, m22, pushforward

BASES = ("Omega22", "M22", "Gamma22")
MAX_DEGREE = 64


class FamilyError(ValueError):
    pass


class DihedralCase(FamilyError):
    pass


# -- labels -------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyLabel:
    base: str
    degree: int
    decoration: str  # plain | prime | prime1 | prime2 | star
    variant: str | None = None  # a | b for the two embeddings of the unique index-2 overlattice

    def text(self) -> str:
        core = f"{self.base}+<{2 * self.degree}>"
        if self.decoration == "plain":
            return core
        mark = {"prime": "'", "prime1": "'(1)", "prime2": "'(2)", "star": "*"}[self.decoration]
        out = f"({core}){mark}"
        return out + (f" [{self.variant}]" if self.variant else "")

    def to_json(self) -> dict:
        return {"base": self.base, "degree": self.degree, "decoration": self.decoration,
                "variant": self.variant, "text": self.text()}


@dataclass
class NSFamily:
    label: FamilyLabel
    lattice: Lattice
    index: int
    glue_classes: list[ClassRecord]
    fingerprint: Fingerprint

    def to_json(self) -> dict:
        return {**self.label.to_json(), "index": self.index,
                "glue_classes": [r.label() for r in self.glue_classes],
                "abs_det": self.fingerprint.abs_det}


@lru_cache(maxsize=None)
def base_lattice(base: str) -> Lattice:
    if base == "Omega22":
        return cat.build("Omega22").lattice
    if base == "M22":
        return m22("tau").lattice
    if base == "Gamma22":
        return gamma22("tau").lattice
    raise FamilyError(f"unknown base {base!r}; expected one of {', '.join(BASES)}")


@lru_cache(maxsize=None)
def _classify(base: str, degree: int) -> tuple[NSFamily, ...]:
    if degree < 1:
        raise FamilyError("degree must be positive")
    S = base_lattice(base)
    A = discriminant_group(S)
    T = direct_sum(S, Lattice(Matrix([[2 * degree]])), label=f"{base}+<{2 * degree}>")
    plain = NSFamily(FamilyLabel(base, degree, "plain"), T, 1, [], genus_fingerprint(T))
    by_index: dict[int, dict[Fingerprint, list]] = {}
    for r in enumerate_classes(S):
        k = r.order
        if k == 1 or (2 * degree) % k:
            continue
        # (kappa + s)/k is isotropic iff 2n/k^2 + q(s/k) = 0 mod 2
        if mod2(r.square + Fraction(2 * degree, k * k)) != 0:
            continue
        glue = list(A.element(r.representative)) + [Fraction(1, k)]
        M, idx, _ = overlattice_from_glue(T, [glue])
        if idx != k:
            raise AssertionError("glue has the wrong index")
        fp = genus_fingerprint(M)
        slot = by_index.setdefault(k, {}).setdefault(fp, [M, []])
        slot[1].append(r)
    out = [plain]
    for k in sorted(by_index):
        groups = sorted(by_index[k].items(), key=lambda t: -sum(r.size for r in t[1][1]))
        if k == 2:
            names = ["prime"] if len(groups) == 1 else [f"prime{i + 1}" for i in range(len(groups))]
        else:
            names = ["star"] if len(groups) == 1 else [f"star{i + 1}" for i in range(len(groups))]
        for deco, (fp, (M, recs)) in zip(names, groups):
            out.append(NSFamily(FamilyLabel(base, degree, deco), M, k, recs, fp))
    return tuple(out)


def classify_ns(base: str, degree: int) -> list[NSFamily]:
    """Cyclic even overlattices of base + <2*degree> up to genus, labelled plain/prime*/star.

    Of two index-2 families the one glued along the larger classes is prime1.
    """
    return list(_classify(base, degree))


def label_of(base: str, degree: int, L: Lattice) -> FamilyLabel:
    fp = genus_fingerprint(L)
    for fam in _classify(base, degree):
        if fam.fingerprint == fp:
            return fam.label
    raise FamilyError(f"lattice matches no family over {base}+<{2 * degree}>")


# -- ample classes ------------------------------------------------------------

L0_FORMULA = "(x+2*y-e1-f1+e2+f2)/3"


@dataclass(frozen=True)
class AmpleRow:
    multiple: int  # coefficient of L0
    extra: str
    degree: Callable[[int], int]
    glue: str | None  # representative of the Omega22 class that L/k glues to
    glue_class: str | None
    decoration: str
    variant: str | None = None


AMPLE_ROWS: dict[str, AmpleRow] = {
    "L0": AmpleRow(1, "0", lambda d: d, None, None, "plain"),
    "L20_1": AmpleRow(2, "e1+f1+g1+h1", lambda h: 4 * h, "(f1-e1+h1-g1)/2", "(2,0,108)", "prime1"),
    "L20_2": AmpleRow(2, "a1+b1+c1+d1", lambda h: 4 * (h - 1), "(b1+c1+d1-3*a1)/2", "(2,0,3)", "prime2"),
    "L22a": AmpleRow(2, "v2+f1+e1+h1+g1", lambda h: 4 * h + 2, "(w+f1-e1+h1-g1)/2", "(2,1,108)", "prime", "a"),
    "L22b": AmpleRow(2, "v2", lambda h: 4 * h + 2, "w/2", "(2,1,36)", "prime", "b"),
    "L4m4": AmpleRow(4, "a1+b1+c1+d1", lambda h: 16 * h - 4, "(b1+c1+d1-3*a1)/4", "(4,1/2,384)", "star"),
    "L44": AmpleRow(4, "2*v2+a2+b2+c2+d2", lambda h: 16 * h + 4, "(b2+c2+d2-3*a2)/4+w/2", "(4,3/2,384)", "star"),
}
AMPLE_NAMES = tuple(AMPLE_ROWS)


@dataclass
class AmpleClass:
    name: str
    parameter: int
    degree: int
    coords: tuple[Fraction, ...]
    square: Fraction
    glue: tuple[Fraction, ...] | None  # v with L/k + v in H^2(X), v in the Omega22 dual
    glue_class: str | None

    @property
    def row(self) -> AmpleRow:
        return AMPLE_ROWS[self.name]

    def to_json(self) -> dict:
        return {"name": self.name, "parameter": self.parameter, "d": self.degree,
                "L": cat.x_space().format(self.coords), "square": str(self.square),
                "glue_class": self.glue_class}


def _lin(*terms):
    n = len(terms[0][1])
    return tuple(sum((c * v[i] for c, v in terms), Fraction(0)) for i in range(n))


def ample_class(name: str, parameter: int) -> AmpleClass:
    """The class L of the named row, verified: square 2d, orthogonal to Omega22, primitive, glue class."""
    if name not in AMPLE_ROWS:
        raise FamilyError(f"unknown ample class {name!r}")
    row = AMPLE_ROWS[name]
    d = row.degree(parameter)
    if d < 1:
        raise FamilyError(f"{name}({parameter}) has degree {d} < 1")
    X = cat.build("H2X")
    S = X.space
    base = S.parse(f"{L0_FORMULA}+{parameter}*y")
    L = _lin((row.multiple, base), (1, S.parse(row.extra)))
    G = S.lattice.gram
    sq = G.bilinear(L, L)
    if sq != 2 * d:
        raise AssertionError(f"{name}({parameter})^2 = {sq}, expected {2 * d}")
    omega = cat.build("Omega22").embedding
    if any(G.bilinear(L, b) for b in omega.basis.rows):
        raise AssertionError(f"{name}({parameter}) is not orthogonal to Omega22")
    c = X.embedding.coordinates(L)
    if c is None or _content(c) != 1:
        raise AssertionError(f"{name}({parameter}) is not primitive in H^2(X)")
    glue = None
    if row.glue is not None:
        x = S.parse(row.glue)
        k = row.multiple
        for s in (1, -1):
            cand = _lin((Fraction(1, k), L), (s, x))
            if X.embedding.contains(cand):
                glue = tuple(s * t for t in x)
                break
        if glue is None:
            raise AssertionError(f"{name}({parameter}) does not glue to {row.glue}")
        got = class_of(omega, glue).label()
        if got != row.glue_class:
            raise AssertionError(f"{name}: glue class {got}, expected {row.glue_class}")
    return AmpleClass(name, parameter, d, L, sq, glue, row.glue_class)


def parameter_for_degree(name: str, d: int) -> int:
    """The table parameter giving degree d, or FamilyError if d is not in the row's class."""
    row = AMPLE_ROWS[name]
    if name == "L0":
        return d
    for p in range(-1, d + 2):
        if row.degree(p) == d:
            return p
    raise FamilyError(f"degree {d} is not attained by {name}")


def degrees_of(name: str, max_degree: int = MAX_DEGREE) -> list[int]:
    out = []
    for d in range(1, max_degree + 1):
        try:
            parameter_for_degree(name, d)
        except FamilyError:
            continue
        out.append(d)
    return out


def _content(v: Sequence) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


# -- correspondence -----------------------------------------------------------

@dataclass
class QuotientFamily:
    label: FamilyLabel
    divisor: int  # n with class = pi_* L / n primitive
    square: Fraction
    generator: tuple[Fraction, ...]

    def to_json(self, space=None) -> dict:
        out = {**self.label.to_json(), "divisor": self.divisor, "square": str(self.square)}
        if space is not None:
            out["generator"] = space.format(self.generator)
        return out


@dataclass
class Correspondence:
    name: str
    parameter: int
    route: str
    ns_x: FamilyLabel
    ns_z: QuotientFamily
    ns_y: QuotientFamily

    def to_json(self) -> dict:
        return {"name": self.name, "parameter": self.parameter, "d": self.ns_x.degree,
                "route": self.route, "X": self.ns_x.to_json(),
                "Z": self.ns_z.to_json(_z_entry(self.route).space),
                "Y": self.ns_y.to_json(_y_entry(self.route).space)}


def _saturated_sum(host: Embedding, base: Embedding, v) -> Lattice:
    E = Embedding.from_generators(host.ambient, list(base.basis.rows) + [tuple(v)])
    return saturation(E, host).lattice


def ns_x(L: AmpleClass) -> tuple[FamilyLabel, Lattice]:
    X = cat.build("H2X")
    NS = _saturated_sum(X.embedding, cat.build("Omega22").embedding, L.coords)
    lab = label_of("Omega22", L.degree, NS)
    return FamilyLabel(lab.base, lab.degree, lab.decoration, L.row.variant), NS


def _quotient_family(host: Embedding, base: Embedding, base_name: str, v) -> QuotientFamily:
    c = host.coordinates(v)
    if c is None:
        raise AssertionError("pushforward left the target lattice")
    n = _content(c)
    g = tuple(Fraction(x, n) for x in v)
    sq = host.ambient.gram.bilinear(g, g)
    if sq <= 0 or (sq / 2).denominator != 1:
        raise AssertionError(f"primitive pushforward has square {sq}")
    NS = _saturated_sum(host, base, g)
    return QuotientFamily(label_of(base_name, int(sq / 2), NS), n, sq, g)


def correspondence(name: str, parameter: int, route: str = "tau") -> Correspondence:
    """Families of X, Z_route and Y determined by the ample class ``name(parameter)``."""
    L = ample_class(name, parameter)
    lx, _ = ns_x(L)
    Z = _z_entry(route)
    z = _quotient_family(Z.embedding, gamma22(route), "Gamma22", pushforward(route).apply(L.coords))
    Y = _y_entry(route)
    y = _quotient_family(Y.embedding, m22(route), "M22", pushforward("total", route).apply(L.coords))
    return Correspondence(name, parameter, route, lx, z, y)


def _d_class(d: int) -> str:
    if d % 2:
        return "odd"
    if d % 4 == 2:
        return "2mod4"
    return "0mod8" if d % 8 == 0 else "4mod8"


# expected cells: (decoration, square of the generator as a multiple of d, divisor);
# "prime" where the
# table leaves the decoration off also accepts prime1/prime2
Cell = tuple[str, Fraction, int]
EXPECTED_Z: dict[tuple[str, str], dict[str, Cell]] = {}
EXPECTED_Y: dict[tuple[str, str], Cell] = {}


def _z(name, classes, tau, phi=None):
    for c in classes:
        EXPECTED_Z[(name, c)] = {"tau": tau, "phi": phi or tau}


def _y(name, classes, cell):
    for c in classes:
        EXPECTED_Y[(name, c)] = cell


_z("L0", ["odd"], ("prime", Fraction(4), 1))
_z("L0", ["2mod4", "0mod8", "4mod8"], ("prime1", Fraction(4), 1))
_z("L22a", ["2mod4"], ("prime2", Fraction(4), 1))
_z("L22b", ["2mod4"], ("plain", Fraction(1), 2), ("star", Fraction(4), 1))
_z("L20_1", ["0mod8", "4mod8"], ("prime2", Fraction(4), 1), ("plain", Fraction(1), 2))
_z("L20_2", ["0mod8", "4mod8"], ("prime", Fraction(1), 2))
_z("L4m4", ["4mod8"], ("prime", Fraction(1), 2))
_z("L44", ["4mod8"], ("prime", Fraction(1), 2))
_y("L0", ["odd"], ("prime", Fraction(2), 2))
_y("L0", ["2mod4", "0mod8", "4mod8"], ("prime", Fraction(8), 1))
_y("L22a", ["2mod4"], ("prime", Fraction(2), 2))
_y("L22b", ["2mod4"], ("prime", Fraction(2), 2))
_y("L20_1", ["0mod8"], ("prime", Fraction(2), 2))
_y("L20_1", ["4mod8"], ("prime1", Fraction(2), 2))
_y("L20_2", ["0mod8"], ("plain", Fraction(1, 2), 4))
_y("L20_2", ["4mod8"], ("prime2", Fraction(2), 2))
_y("L4m4", ["4mod8"], ("plain", Fraction(1, 2), 4))
_y("L44", ["4mod8"], ("plain", Fraction(1, 2), 4))


def _cell_matches(cell: Cell, fam: QuotientFamily, d: int) -> bool:
    deco, mult, div = cell
    ok_deco = fam.label.decoration == deco or (deco == "prime" and fam.label.decoration.startswith("prime"))
    return ok_deco and fam.square == mult * d and fam.divisor == div


def expected_cells(name: str, d: int, route: str) -> tuple[Cell, Cell]:
    key = (name, _d_class(d))
    if key not in EXPECTED_Z:
        raise FamilyError(f"no table row for {name} in degree {d}")
    return EXPECTED_Z[key][route], EXPECTED_Y[key]


def correspondence_matches(c: Correspondence) -> dict[str, bool]:
    d = c.ns_x.degree
    zc, yc = expected_cells(c.name, d, c.route)
    return {"X": c.ns_x.decoration == AMPLE_ROWS[c.name].decoration,
            "Z": _cell_matches(zc, c.ns_z, d), "Y": _cell_matches(yc, c.ns_y, d)}


# -- divisors and Euler characteristics ---------------------------------------

# Z tables: (column predicate on the parameter, {divisor: subtracted part}); P = pi_* L / 2
EF_TABLES: dict[str, list[tuple[str, dict[str, dict[str, str]]]]] = {
    "L0": [
        ("even", {"Ztau": {"E1": "(n3+n5+n6+n8)/2", "E2": "(n1+n2+n4+n7)/2"},
                  "Zphi": {"F1": "(n1+n2+n6+n8)/2", "F2": "(n3+n4+n5+n7)/2"}}),
        ("odd", {"Ztau": {"E1": "(n1+n8)/2", "E2": "(n2+n3+n4+n5+n6+n7)/2"},
                 "Zphi": {"F1": "(n6+n7)/2", "F2": "(n1+n2+n3+n4+n5+n8)/2"}}),
    ],
    "L20_1": [("any", {"Ztau": {"E1": "(n1+n4+n6+n8)/2", "E2": "(n2+n3+n5+n7)/2"},
                       "Zphi": {"F1": "0", "F2": "nu"}})],
    "L20_2": [("any", {"Ztau": {"E1": "0", "E2": "nu"}, "Zphi": {"F1": "0", "F2": "nu"}})],
    # the F-row is read with pi_phi (the printed pi_tau does not land in H^2(Z_phi))
    "L22a": [("any", {"Ztau": {"E1": "(n1+n4+n6+n8)/2", "E2": "(n2+n3+n5+n7)/2"},
                      "Zphi": {"F1": "(n1+n5+n6+n7)/2", "F2": "(n2+n3+n4+n8)/2"}})],
    "L22b": [("any", {"Ztau": {"E1": "0", "E2": "nu"},
                      "Zphi": {"F1": "(n1+n5+n6+n7)/2", "F2": "(n2+n3+n4+n8)/2"}})],
    "L4m4": [("any", {"Ztau": {"E1": "0", "E2": "nu"}, "Zphi": {"F1": "0", "F2": "nu"}})],
    "L44": [("any", {"Ztau": {"E1": "0", "E2": "nu"}, "Zphi": {"F1": "0", "F2": "nu"}})],
}

# Y tables: D_i = pi_{2,2*} L / 4 - part, on the tau route; keyed by (name, column)
_NSUM = "n1+n2+n3+n4"
_MSUM = "m1+m2+m3+m4+m5+m6+m7+m8"
D_TABLES_PRINTED: dict[tuple[str, str], list[str]] = {
    ("L0", "1mod4"): ["(n1+m1+m3+m4+m5)/2", "(n1+m2+m6+m7+m8)/2",
                      "(n2+n3+n4+m2+m3+m4+m5+m7+m8)/2", "(n2+n3+n4+m1+m6)/2"],
    ("L0", "3mod4"): ["(n1+m1+m6)/2", "(n1+m2+m3+m4+m5+m7+m8)/2",
                      "(n2+n3+n4+m2+m6+m7+m8)/2", "(n2+n3+n4+m1+m3+m4+m5)/2"],
    ("L20_1", "even"): ["(n1+n4+m1+m7)/2", "(n1+n4+m2+m3+m4+m5+m6+m8)/2",
                        "(n2+n3+m2+m8)/2", "(n2+n3+m1+m3+m4+m5+m6+m7)/2"],
    ("L20_1", "odd"): ["(n1+n4+m1+m3+m4+m5+m6+m7)/2", "(n1+n4+m2+m8)/2",
                       "(n2+n3+m2+m3+m4+m5+m6+m8)/2", "(n2+n3+m1+m7)/2"],
    ("L20_2", "even"): ["(m3+m4+m5+m6)/2", "(m1+m2+m7+m8)/2",
                        f"({_NSUM}+{_MSUM})/2", f"({_NSUM})/2"],
    ("L20_2", "odd"): ["0", "mu1", "mu2", "mu1+mu2"],
    ("L22a", "even"): ["(n1+n4+m1+m4+m5+m7)/2", "(n1+n4+m2+m3+m6+m8)/2",
                       "(n2+n3+m2+m4+m5+m8)/2", "(n2+n3+m1+m3+m6+m7)/2"],
    ("L22a", "odd"): ["(n1+n4+m1+m3+m6+m7)/2", "(n1+n4+m2+m4+m5+m8)/2",
                      "(n2+n3+m2+m3+m6+m8)/2", "(n2+n3+m1+m4+m5+m7)/2"],
    ("L22b", "even"): ["(m3+m6)/2", "(m1+m2+m4+m5+m7+m8)/2",
                       f"({_NSUM}+m1+m2+m3+m6+m7+m8)/2", f"({_NSUM}+m4+m5)/2"],
    ("L22b", "odd"): ["(m4+m5)/2", "(m1+m2+m3+m6+m7+m8)/2",
                      f"({_NSUM}+m1+m2+m4+m5+m7+m8)/2", f"({_NSUM}+m3+m6)/2"],
    ("L4m4", "any"): ["0", "mu1", "mu2", "mu1+mu2"],
    ("L44", "any"): ["0", "mu1", "mu2", "mu1+mu2"],
}


# pi/4 - mu1 - mu2 has chi = d/4 - 4; the class congruent to mu1 + mu2 modulo m1+m2+m7+m8
# with square -4 restores chi = d/4 and the sum d + 2
D4_REPAIRED = f"({_NSUM}+m3+m4+m5+m6)/2"
D_TABLES = {k: [D4_REPAIRED if p == "mu1+mu2" else p for p in v] for k, v in D_TABLES_PRINTED.items()}


def _quarter(offset: int) -> Callable[[int], Fraction]:
    return lambda d: Fraction(d, 4) + offset


# Euler characteristic table: row number, ample class, degree class, chi(D_1..D_4)
TABLE2: list[tuple[int, str, str, list[Callable[[int], Fraction]]]] = [
    (1, "L0", "1mod4", [_quarter(Fraction(3, 4)), _quarter(Fraction(3, 4)), _quarter(Fraction(-1, 4)), _quarter(Fraction(3, 4))]),
    (2, "L0", "3mod4", [_quarter(Fraction(5, 4)), _quarter(Fraction(1, 4)), _quarter(Fraction(1, 4)), _quarter(Fraction(1, 4))]),
    (3, "L22a", "2mod4", [_quarter(Fraction(1, 2))] * 4),
    (4, "L22b", "2mod4", [_quarter(Fraction(3, 2)), _quarter(Fraction(1, 2)), _quarter(Fraction(-1, 2)), _quarter(Fraction(1, 2))]),
    (5, "L20_1", "0mod8", [_quarter(1), _quarter(0), _quarter(1), _quarter(0)]),
    (6, "L20_2", "0mod8", [_quarter(2), _quarter(0), _quarter(0), _quarter(0)]),
    (7, "L20_1", "4mod8", [_quarter(0), _quarter(1), _quarter(0), _quarter(1)]),
    (8, "L20_2", "4mod8", [_quarter(1), _quarter(1), _quarter(-1), _quarter(1)]),
    (9, "L4", "4mod8", [_quarter(2), _quarter(0), _quarter(0), _quarter(0)]),
]


def _table2_row(name: str, d: int):
    key = "L4" if name in ("L4m4", "L44") else name
    cls = _d_class(d) if d % 2 == 0 else ("1mod4" if d % 4 == 1 else "3mod4")
    for row in TABLE2:
        if row[1] == key and row[2] == cls:
            return row
    return None


def dihedral_flag(name: str, parameter: int) -> bool:
    """True for L0 in even degree, where phi exchanges the eigenspaces of tau on H^0(X, L)."""
    return name == "L0" and parameter % 2 == 0


def default_column(name: str, parameter: int, context: str) -> str:
    if context == "Y":
        if name == "L0":
            return "1mod4" if parameter % 4 == 1 else "3mod4"
        if name in ("L4m4", "L44"):
            return "any"
        return "even" if parameter % 2 == 0 else "odd"
    if name == "L0":
        return "even" if parameter % 2 == 0 else "odd"
    return "any"


@dataclass
class DivisorSet:
    context: str
    name: str
    parameter: int
    column: str
    divisors: dict[str, tuple[Fraction, ...]]
    integral: dict[str, bool]
    chis: list[Fraction]
    expected: list[Fraction] | None = None
    table_row: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def all_integral(self) -> bool:
        return all(self.integral.values())

    def to_json(self) -> dict:
        return {"context": self.context, "name": self.name, "parameter": self.parameter,
                "column": self.column, "integral": self.integral,
                "chi": [str(c) for c in self.chis],
                "expected": None if self.expected is None else [str(c) for c in self.expected],
                "table_row": self.table_row}


CONTEXTS = ("Ztau", "Zphi", "Y")


def divisor_set(name: str, parameter: int, context: str, column: str | None = None,
                printed: bool = False) -> DivisorSet:
    """Build the listed divisors for ``name(parameter)`` on Z_tau, Z_phi or Y.

    ``column`` overrides the parity column (used to show that the parity hypotheses matter).
    """
    if context not in CONTEXTS:
        raise FamilyError(f"unknown context {context!r}")
    if context == "Y" and dihedral_flag(name, parameter):
        raise DihedralCase(
            f"{name}({parameter}): the action on H^0(X, L) is dihedral of order 8 and does not "
            "split into four joint eigenspaces, so no D_1..D_4 exist"
        )
    col = column or default_column(name, parameter, context)
    L = ample_class(name, parameter)
    if context == "Y":
        entry = _y_entry("tau")
        try:
            parts = (D_TABLES_PRINTED if printed else D_TABLES)[(name, col)]
        except KeyError:
            raise FamilyError(f"no divisor table for {name}, column {col}")
        base = pushforward("total", "tau").apply(L.coords)
        scale = Fraction(1, 4)
        names = [f"D{i + 1}" for i in range(4)]
    else:
        route = "tau" if context == "Ztau" else "phi"
        entry = _z_entry(route)
        cols = dict(EF_TABLES[name])
        if col not in cols:
            raise FamilyError(f"no divisor table for {name}, column {col}")
        table = cols[col][context]
        names, parts = list(table), list(table.values())
        base = pushforward(route).apply(L.coords)
        scale = Fraction(1, 2)
    S = entry.space
    divisors, integral, chis = {}, {}, []
    for n, part in zip(names, parts):
        v = _lin((scale, base), (-1, S.parse(part)))
        divisors[n] = v
        integral[n] = entry.embedding.contains(v)
        chis.append(2 + S.square(v) / 2)
    out = DivisorSet(context, name, parameter, col, divisors, integral, chis)
    if context == "Y":
        row = _table2_row(name, L.degree)
        if row is not None:
            out.table_row = row[0]
            out.expected = [f(L.degree) for f in row[3]]
    return out


def table2(max_degree: int = MAX_DEGREE, per_row: int = 4) -> list[dict]:
    """Each Euler-characteristic row evaluated at its first ``per_row`` degrees."""
    out = []
    for number, key, cls, formulas in TABLE2:
        names = ["L4m4", "L44"] if key == "L4" else [key]
        for name in names:
            degs = [d for d in degrees_of(name, max_degree) if _table2_row(name, d) and _table2_row(name, d)[0] == number]
            for d in degs[:per_row]:
                ds = divisor_set(name, parameter_for_degree(name, d), "Y")
                out.append({"row": number, "name": name, "d": d, "chi": ds.chis, "expected": ds.expected,
                            "integral": ds.all_integral, "sum": sum(ds.chis)})
    return out
