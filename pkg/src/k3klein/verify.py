"""The acceptance checks, grouped into numbered criteria and collected in a Report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import catalog as cat
from . import families as fam
from . import quotients as qt
from .action import coinvariant_sublattice, invariant_sublattice, phi_star, rho_star, tau_star
from .classes import class_of, enumerate_classes
from .isometry import find_isometry, is_isometric
from .lattice import Embedding, Lattice, discriminant_group, root_lattice, same_subgroup, sublattice_index, twist
from .linalg import Matrix

SCHEMA_VERSION = 1


@dataclass
class Check:
    id: str
    description: str
    status: str  # pass | fail | skip
    expected: object
    actual: object
    anchor: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"id": self.id, "description": self.description, "status": self.status,
                "expected": _jsonable(self.expected), "actual": _jsonable(self.actual),
                "anchor": self.anchor}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    return x


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check):
        if any(c.id == check.id for c in self.checks):
            raise ValueError(f"duplicate check id {check.id!r}")
        self.checks.append(check)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "suite": self.suite,
                "summary": {s: sum(c.status == s for c in self.checks) for s in ("pass", "fail", "skip")},
                "checks": [c.to_json() for c in self.checks]}


def _check(id: str, description: str, expected, actual, anchor: str = "") -> Check:
    return Check(id, description, "pass" if expected == actual else "fail", expected, actual, anchor)


def _is_even_integral(L: Lattice) -> bool:
    G = L.gram
    return G.is_integral() and all(G[i, i].numerator % 2 == 0 for i in range(G.nrows))


def _contains_all(host: Embedding, sub: Embedding) -> bool:
    return all(host.contains(r) for r in sub.basis.rows)


# -- criteria -----------------------------------------------------------------

def criterion_1() -> list[Check]:
    H = cat.build("H2X").lattice
    W = cat.build("W").embedding
    idx = sublattice_index(W, cat.build("H2X").embedding)
    root = math.isqrt(abs(W.lattice.det))
    a = "H^2(X) as W plus the glue alpha..eta"
    return [
        _check("1.even", "H^2(X) is even", True, _is_even_integral(H), a),
        _check("1.unimodular", "H^2(X) is unimodular", 1, abs(H.det), a),
        _check("1.signature", "H^2(X) has signature (3,19)", (3, 19), H.signature, a),
        _check("1.index", "[H^2(X) : W] = sqrt|det W| = 2916", (2916, 2916), (idx, root), a),
    ]


def criterion_2() -> list[Check]:
    t, p = tau_star(), phi_star()
    inv = invariant_sublattice([t, p])
    coinv = coinvariant_sublattice([t, p])
    A = discriminant_group(cat.build("Omega22").lattice)
    a = "the (Z/2)^2 action on H^2(X)"
    return [
        _check("2.commute", "tau* and phi* commute", True, (t @ p).matrix == (p @ t).matrix, a),
        _check("2.orders", "tau* and phi* have order 2", (2, 2), (t.order, p.order), a),
        _check("2.ranks", "invariant rank 10, co-invariant rank 12", (10, 12), (inv.rank, coinv.rank), a),
        _check("2.omega", "co-invariant lattice equals Omega22", True,
               same_subgroup(coinv, cat.build("Omega22").embedding), a),
        _check("2.discriminant", "A_Omega22 = (Z/2)^6 x (Z/4)^2", (2,) * 6 + (4, 4), tuple(sorted(A.orders)), a),
    ]


def criterion_3() -> list[Check]:
    e8_2 = twist(root_lattice("E", 8), 2, "E8(2)")
    omega = cat.build("Omega22").embedding
    subs = {g.name: coinvariant_sublattice([g]) for g in (tau_star(), phi_star(), rho_star())}
    a = "co-invariant lattices of the three involutions"
    out = []
    for name, E in subs.items():
        U = find_isometry(E.lattice, e8_2)
        out.append(_check(f"3.{name}.e8", f"co-invariant of {name} is isometric to E8(2)",
                          (True, True), (U is not None, _contains_all(omega, E)), a))
    names = list(subs)
    distinct = all(not same_subgroup(subs[x], subs[y]) for i, x in enumerate(names) for y in names[i + 1:])
    out.append(_check("3.distinct", "the three co-invariants are distinct subgroups", True, distinct, a))
    return out


def criterion_4() -> list[Check]:
    maps = {"pi_tau": qt.pushforward("tau"), "pi_phi": qt.pushforward("phi"),
            "pihat_phi": qt.pushforward("residual", "tau"), "pihat_tau": qt.pushforward("residual", "phi")}
    a = "pushforward tables of the quotient maps"
    out = []
    for name, F in maps.items():
        defect = qt.push_pull_defect(F)
        _, derived, transcribed = qt.derived_target_gram(F)
        out.append(_check(f"4.{name}.pushpull", f"{name}: push-pull defect vanishes", True, not any(
            any(r) for r in defect.rows), a))
        out.append(_check(f"4.{name}.gram", f"{name}: derived target Gram equals the transcribed one",
                          True, derived == transcribed, a))
        out.append(_check(f"4.{name}.lands", f"{name}: image lies in the target lattice", True, F.lands_in_target(), a))
    for stage in ("tau", "phi", "total"):
        out.append(_check(f"4.listed.{stage}", f"listed images under the {stage} pushforward are reproduced",
                          {}, qt.listed_images_mismatches(stage), a))
    for route in qt.ROUTES:
        found = qt.admissible_pairings(route)
        out.append(_check(f"4.pairing.{route}", f"residual pairing on the {route} route is the unique admissible "
                          "matching of 105", [sorted(qt.printed_pairing(route))],
                          [sorted(tuple(sorted(p)) for p in m) for m in found], a))
    return out


def criterion_5() -> list[Check]:
    out = []
    for name in ("H2Ztau", "H2Zphi", "H2Y_via_tau", "H2Y_via_phi"):
        L = cat.build(name).lattice
        out.append(_check(f"5.{name}", f"{name} is even unimodular of signature (3,19)",
                          (True, 1, (3, 19)), (_is_even_integral(L), abs(L.det), L.signature),
                          f"{name} after adjoining its glue"))
    return out


def criterion_6() -> list[Check]:
    a1 = "residual image against the total image in H^2(Y)"
    a2 = "pullback of H^2(Y) inside the invariant lattice"
    out = [
        _check("6.total_index", "[residual image : total image] = 2", 2, qt.total_image_index("tau"), a1),
        _check("6.gamma_half", "gamma-bar/2 is in the residual image, not the total image",
               {"in_residual_image": True, "in_total_image": False}, qt.gamma_half_witness("tau"), a1),
        _check("6.pullback_index", "[invariant lattice : pullback image] = 8", 8, qt.pullback_index(), a2),
    ]
    expected = {k: {"integral": True, "in_image": False} for k in qt.PULLBACK_WITNESSES}
    out.append(_check("6.pullback_witnesses", "the three witnesses are integral but outside the image",
                      expected, qt.pullback_witnesses(), a2))
    return out


def criterion_7() -> list[Check]:
    d4 = cat.build("D4_2").lattice
    a = "Gamma22 on both intermediate quotients"
    out = []
    for route in qt.ROUTES:
        G = qt.gamma22(route)
        P = qt.pushed_omega(route)
        out.append(_check(f"7.{route}.rank", f"Gamma22 ({route}) has rank 12", 12, G.rank, a))
        out.append(_check(f"7.{route}.catalog", f"Gamma22 ({route}) equals the listed generators", True,
                          qt.gamma22_matches_catalog(route), a))
        out.append(_check(f"7.{route}.d4", f"pushed Omega22 ({route}) lies in Gamma22 and is D4(2)",
                          (True, True), (_contains_all(G, P), is_isometric(P.lattice, d4)), a))
    U = find_isometry(cat.build("GammaTau").lattice, cat.build("GammaPhi").lattice)
    out.append(_check("7.isometric", "Gamma22 (tau) and Gamma22 (phi) are isometric", True, U is not None, a))
    return out


def criterion_8() -> list[Check]:
    model = cat.build("M22").lattice
    a = "M22 as A1^12 plus two glue vectors"
    out = []
    for route in qt.ROUTES:
        M = qt.m22(route)
        glue = qt.m22_glue_integral(route)
        out.append(_check(f"8.{route}.det", f"M22 ({route}) has |det| 256", 256, abs(M.lattice.det), a))
        out.append(_check(f"8.{route}.model", f"M22 ({route}) is isometric to the A1^12 model", True,
                          is_isometric(M.lattice, model), a))
        out.append(_check(f"8.{route}.glue", f"M22 ({route}) is spanned by the listed glue", (dict.fromkeys(glue, True), True),
                          (glue, same_subgroup(qt.m22_from_listed_glue(route), M)), a))
    return out


# (k, g, n) tables and printed representatives of each class
CLASS_TABLES = {
    "Omega22": [(1, "0", 1), (2, "0", 3), (2, "0", 108), (2, "1", 36), (2, "1", 108), (4, "1/2", 384), (4, "3/2", 384)],
    "M22": [(1, "0", 1), (2, "0", 1), (2, "0", 54), (2, "1/2", 64), (2, "1", 18), (2, "1", 54), (2, "3/2", 64)],
    "Gamma22": [(1, "0", 1), (2, "0", 3), (2, "0", 8), (2, "0", 12), (2, "1", 4), (2, "1", 12), (2, "1", 24),
                (4, "1/2", 96), (4, "3/2", 96)],
}

REPRESENTATIVES = {
    "Omega22": {"(2,0,108)": "(f1-e1+h1-g1)/2", "(2,0,3)": "(b1+c1+d1-3*a1)/2", "(2,1,108)": "(w+f1-e1+h1-g1)/2",
                "(2,1,36)": "w/2", "(4,1/2,384)": "(b1+c1+d1-3*a1)/4", "(4,3/2,384)": "(b2+c2+d2-3*a2)/4+w/2"},
    "M22": {"(2,0,54)": "(n1+n4+m1+m7)/2", "(2,0,1)": "(m3+m4+m5+m6)/2", "(2,1/2,64)": "(n1+m1+m6)/2",
            "(2,1,54)": "(n1+n4+m1+m4+m5+m7)/2", "(2,1,18)": "(m3+m6)/2", "(2,3/2,64)": "(n1+m1+m3+m4+m5)/2"},
    "Gamma22_tau": {"(2,0,3)": "(f1-e1)/2", "(2,0,8)": "(n3+n5+n6+n8)/2", "(2,0,12)": "(f1-e1+n4+n6+c1-a1)/2",
                    "(2,1,4)": "(f1-e1+n4+n6)/2", "(2,1,12)": "(c1-a1)/2", "(2,1,24)": "(n3+n6+n5+n8+c1-a1)/2",
                    "(4,1/2,96)": "3*(f1-e1)/4+(n6+n8)/2", "(4,3/2,96)": "(f1-e1)/4+(n3+n4+n5+n6)/2"},
    "Gamma22_phi": {"(2,0,3)": "(n2+n3+n4+n8)/2", "(2,0,8)": "(n3+n4+n5+n7)/2", "(2,0,12)": "(b1-a1+n6+n7)/2",
                    "(2,1,4)": "(n6+n7)/2", "(2,1,12)": "(b1-a1)/2", "(2,1,24)": "(b1-a1+n3+n4+n5+n7)/2",
                    "(4,1/2,96)": "(n2+n3+3*n4+3*n8)/4+xp1/2", "(4,3/2,96)": "(n2+3*n3+n4+3*n8)/4+(xp1+n5+n6)/2"},
}


def _class_host(key: str):
    """(embedding of the lattice, symbol space its representatives are written in)."""
    if key == "Omega22":
        e = cat.build("Omega22")
        return e.embedding, e.space
    if key == "M22":
        return qt.m22("tau"), qt._y_entry("tau").space
    route = key.split("_")[1]
    return qt.gamma22(route), qt._z_entry(route).space


def criterion_9() -> list[Check]:
    out = []
    for base, rows in CLASS_TABLES.items():
        keys = ["Gamma22_tau", "Gamma22_phi"] if base == "Gamma22" else [base]
        for key in keys:
            E, space = _class_host(key)
            recs = enumerate_classes(E.lattice)
            a = f"discriminant classes of {base}"
            got = sorted((r.order, str(r.square), r.size) for r in recs)
            out.append(_check(f"9.{key}.table", f"{key}: fingerprint classes reproduce the (k,g,n) table",
                              sorted(rows), got, a))
            out.append(_check(f"9.{key}.order", f"{key}: class sizes sum to |A|", discriminant_group(E.lattice).order,
                              sum(r.size for r in recs), a))
            landed = {lbl: class_of(E, space.parse(expr)).label() for lbl, expr in REPRESENTATIVES[key].items()}
            out.append(_check(f"9.{key}.representatives", f"{key}: printed representatives land in their classes",
                              {k: k for k in landed}, landed, a))
    return out


def expected_labels(base: str, degree: int) -> set[str]:
    """Decorations of the NS families over base + <2*degree>."""
    out = {"plain"}
    if base == "Omega22":
        if degree % 4 == 2:
            out.add("prime")
        if degree % 4 == 0:
            out |= {"prime1", "prime2"}
        if degree % 16 in (4, 12):
            out.add("star")
    elif base == "M22":
        if degree % 4 == 0:
            out |= {"prime1", "prime2"}
        else:
            out.add("prime")
    else:
        if degree % 4 == 2:
            out.add("prime")
        if degree % 4 == 0:
            out |= {"prime1", "prime2"}
        if degree % 8 == 4:
            out.add("star")
    return out


def criterion_10(max_degree: int = fam.MAX_DEGREE) -> list[Check]:
    out = []
    for base in fam.BASES:
        bad = {}
        for d in range(1, max_degree + 1):
            got = {f.label.decoration for f in fam.classify_ns(base, d)}
            want = expected_labels(base, d)
            if got != want:
                bad[d] = (sorted(want), sorted(got))
        out.append(_check(f"10.{base}", f"NS families over {base} for degrees up to {max_degree}", {}, bad,
                          f"classification of NS lattices with base {base}"))
    return out


def criterion_11(max_degree: int = fam.MAX_DEGREE, per_class: int = 4, routes=qt.ROUTES) -> list[Check]:
    a = "correspondence of X, Z and Y families"
    out = []
    z_labels: dict[tuple[str, int, str], fam.FamilyLabel] = {}
    for name in fam.AMPLE_NAMES:
        by_class: dict[str, list[int]] = {}
        for d in fam.degrees_of(name, max_degree):
            by_class.setdefault(fam._d_class(d), []).append(d)
        bad = {}
        counted = {}
        for cls, degs in sorted(by_class.items()):
            degs = degs[:per_class]
            counted[cls] = len(degs)
            for d in degs:
                p = fam.parameter_for_degree(name, d)
                for route in routes:
                    c = fam.correspondence(name, p, route)
                    z_labels[(name, d, route)] = c.ns_z.label
                    m = fam.correspondence_matches(c)
                    if not all(m.values()):
                        bad[f"d={d},{route}"] = {"ns_x": c.ns_x.text(), "ns_z": c.ns_z.label.text(),
                                                 "ns_y": c.ns_y.label.text()}
        out.append(_check(f"11.{name}", f"{name}: correspondence rows reproduced", {}, bad, a))
        out.append(_check(f"11.{name}.coverage", f"{name}: at least {per_class} degrees per class",
                          True, all(n >= per_class for n in counted.values()), a))
    if set(routes) == set(qt.ROUTES):
        for name in ("L20_1", "L22b"):
            split = [d for (n, d, r) in z_labels if n == name and r == "tau"
                     and z_labels[(n, d, "tau")] != z_labels[(n, d, "phi")]]
            degs = sorted({d for (n, d, r) in z_labels if n == name})
            out.append(_check(f"11.split.{name}", f"{name}: the tau and phi routes give different Z labels",
                              degs, sorted(split), a))
    collide = {}
    for (n, d, r), lbl in z_labels.items():
        if n != "L20_2" or d % 8 != 4:
            continue
        for other in ("L4m4", "L44"):
            if (other, d, r) in z_labels:
                collide[f"{other},d={d},{r}"] = (lbl == z_labels[(other, d, r)] and lbl.decoration == "prime")
    out.append(_check("11.collision", "L20_2 and L4 families share one primed Z family for d = 4 mod 8",
                      (True, dict.fromkeys(collide, True)), (bool(collide), collide), a))
    return out


PARITY_FLIP = {"1mod4": "3mod4", "3mod4": "1mod4", "even": "odd", "odd": "even"}


def criterion_12(max_degree: int = fam.MAX_DEGREE) -> list[Check]:
    a = "divisors E, F on Z and D on Y"
    out = []
    rows = fam.table2(max_degree)
    bad = {f"row {r['row']} {r['name']} d={r['d']}": {"chi": r["chi"], "expected": r["expected"],
                                                      "integral": r["integral"], "sum": r["sum"]}
           for r in rows if r["chi"] != r["expected"] or not r["integral"] or r["sum"] != r["d"] + 2}
    out.append(_check("12.table2", "chi(D_i) matches all nine rows, with integral D_i and sum d+2", {}, bad, a))
    out.append(_check("12.table2.rows", "every Euler characteristic row is exercised", list(range(1, 10)),
                      sorted({r["row"] for r in rows}), a))
    nonint = {}
    flips = {}
    for name in fam.AMPLE_NAMES:
        for p in (1, 2, 3, 4):
            try:
                fam.ample_class(name, p)
            except fam.FamilyError:
                continue
            for ctx in ("Ztau", "Zphi"):
                ds = fam.divisor_set(name, p, ctx)
                if not ds.all_integral:
                    nonint[f"{name}({p}) {ctx}"] = ds.integral
                if ds.column in PARITY_FLIP:
                    flips[f"{name}({p}) {ctx}"] = fam.divisor_set(name, p, ctx, PARITY_FLIP[ds.column]).all_integral
            if not fam.dihedral_flag(name, p):
                col = fam.default_column(name, p, "Y")
                if col in PARITY_FLIP:
                    flips[f"{name}({p}) Y"] = fam.divisor_set(name, p, "Y", PARITY_FLIP[col]).all_integral
    out.append(_check("12.ef", "every E_i, F_j cell is integral", {}, nonint, a))
    out.append(_check("12.parity_flip", "parity-flipped tables are not integral", dict.fromkeys(flips, False), flips, a))
    return out


def criterion_13() -> list[Check]:
    e = cat.build("NS_Xomega")
    L = e.lattice
    T = Matrix([[4, 2], [2, 4]])
    a = "NS(X_omega) from the elliptic fibration"
    return [
        _check("13.signature", "NS(X_omega) has signature (1,19)", (1, 19), L.signature, a),
        _check("13.det", "|det NS(X_omega)| = |det T(X_omega)| = 12", (12, 12), (abs(L.det), abs(int(T.det()))), a),
        _check("13.sections", "t^2 = r^2 = q^2 = -2", (-2, -2, -2),
               tuple(int(e.space.square(e.space[s])) for s in ("t", "r", "q")), a),
    ]


CRITERIA: dict[int, Callable[[], list[Check]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
    13: criterion_13,
}


def run_criterion(n: int) -> list[Check]:
    return CRITERIA[n]()


def verify_all(max_degree: int = fam.MAX_DEGREE, routes=qt.ROUTES) -> Report:
    report = Report("all")
    for n, fn in CRITERIA.items():
        if n == 10 or n == 12:
            checks = fn(max_degree)
        elif n == 11:
            checks = fn(max_degree, routes=routes)
        else:
            checks = fn()
        for c in checks:
            report.add(c)
    return report


def quotient_report() -> Report:
    """The quotient-map identity suite (criteria 4 to 8)."""
    report = Report("quotient")
    for n in (4, 5, 6, 7, 8):
        for c in CRITERIA[n]():
            report.add(c)
    return report
