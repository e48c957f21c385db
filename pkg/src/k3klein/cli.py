"""Command-line front end: catalog dumps, maps, class tables, families and the verification suite."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import catalog as cat
from . import families as fam
from . import quotients as qt
from .action import GENERATORS
from .classes import enumerate_classes
from .verify import SCHEMA_VERSION, Report, quotient_report, verify_all


class UsageError(Exception):
    pass


def _emit(data, path: str | None = None):
    text = json.dumps(data, indent=2)
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _routes(value: str) -> tuple[str, ...]:
    return qt.ROUTES if value == "both" else (value,)


# -- subcommands ----------------------------------------------------------------

def cmd_catalog(args) -> int:
    try:
        entry = cat.build(args.name)
    except cat.CatalogError as e:
        raise UsageError(str(e)) from None
    _emit({"schema_version": SCHEMA_VERSION, **entry.to_json()}, args.json)
    return 0


def cmd_action(args) -> int:
    g = GENERATORS[args.gen]()
    M = g.on_host
    if args.json is not None:
        _emit({"schema_version": SCHEMA_VERSION, "generator": args.gen, "basis": "H2X",
               "order": g.order, "matrix": M.to_json()}, args.json)
    else:
        print(f"{args.gen}* on the H^2(X) basis (rows are images), order {g.order}")
        for r in M.rows:
            print(" ".join(f"{int(x):3d}" for x in r))
    return 0


def _map(args):
    route = "tau" if args.route == "both" else args.route
    F = (qt.pullback if args.cmd2 == "pull" else qt.pushforward)(args.map, route)
    return F, qt._space_of(F.source), qt._space_of(F.target)


def cmd_quotient(args) -> int:
    if args.cmd2 == "verify":
        return _finish(quotient_report(), args.json)
    if not args.map or args.cls is None:
        raise UsageError(f"quotient {args.cmd2} needs --map and --class")
    try:
        F, src, tgt = _map(args)
        v = src.parse(args.cls)
    except (ValueError, KeyError) as e:
        raise UsageError(str(e)) from None
    image = F.apply(v)
    if args.json is not None:
        _emit({"schema_version": SCHEMA_VERSION, "map": F.name, "source": src.name, "target": tgt.name,
               "class": args.cls, "image": tgt.format(image),
               "coordinates": [str(x) for x in image]}, args.json)
    else:
        print(f"{F.name}({args.cls}) = {tgt.format(image)}")
    return 0


def _class_lattices(name: str, routes):
    if name == "Omega22":
        return [("Omega22", cat.build("Omega22").lattice)]
    if name == "M22":
        return [(f"M22 ({r})", qt.m22(r).lattice) for r in routes]
    if name == "Gamma22":
        return [(f"Gamma22 ({r})", qt.gamma22(r).lattice) for r in routes]
    raise UsageError(f"unknown lattice {name!r}; expected Omega22, M22 or Gamma22")


def cmd_classes(args) -> int:
    tables = []
    for label, L in _class_lattices(args.lattice, _routes(args.route)):
        recs = enumerate_classes(L)
        tables.append({"lattice": label, "order": sum(r.size for r in recs),
                       "classes": [r.to_json() for r in recs]})
    if args.json is not None:
        _emit({"schema_version": SCHEMA_VERSION, "tables": tables}, args.json)
        return 0
    for t in tables:
        print(f"{t['lattice']}: |A| = {t['order']}")
        print(f"  {'k':>2} {'g':>4} {'n':>5}")
        for c in t["classes"]:
            print(f"  {c['k']:>2} {c['g']:>4} {c['n']:>5}")
    return 0


def cmd_families(args) -> int:
    try:
        if args.cmd2 == "classify":
            return _classify(args)
        if args.cmd2 == "correspond":
            return _correspond(args)
        return _table2(args)
    except fam.FamilyError as e:
        raise UsageError(str(e)) from None


def _classify(args) -> int:
    if args.base not in fam.BASES:
        raise UsageError(f"unknown base {args.base!r}; expected one of {', '.join(fam.BASES)}")
    fams = fam.classify_ns(args.base, args.degree)
    if args.json is not None:
        _emit({"schema_version": SCHEMA_VERSION, "base": args.base, "degree": args.degree,
               "families": [f.to_json() for f in fams]}, args.json)
    else:
        for f in fams:
            glue = ", ".join(r.label() for r in f.glue_classes) or "-"
            print(f"{f.label.text():32} index {f.index}  glue {glue}  |det| {f.fingerprint.abs_det}")
    return 0


def _correspond(args) -> int:
    if args.cls not in fam.AMPLE_NAMES:
        raise UsageError(f"unknown ample class {args.cls!r}; expected one of {', '.join(fam.AMPLE_NAMES)}")
    rows = []
    for route in _routes(args.route):
        c = fam.correspondence(args.cls, args.param, route)
        rows.append({**c.to_json(), "matches": fam.correspondence_matches(c)})
    if args.json is not None:
        _emit({"schema_version": SCHEMA_VERSION, "rows": rows}, args.json)
    else:
        for r in rows:
            print(f"{r['name']}({r['parameter']}) d={r['d']} route {r['route']}")
            for k in ("X", "Z", "Y"):
                extra = "" if k == "X" else f"  pi_*L / {r[k]['divisor']}"
                ok = "ok" if r["matches"][k] else "MISMATCH"
                print(f"  {k}: {r[k]['text']:32}{extra}  [{ok}]")
    return 0 if all(all(r["matches"].values()) for r in rows) else 1


def _table2(args) -> int:
    rows = fam.table2(args.max_degree)
    good = all(r["chi"] == r["expected"] and r["integral"] and r["sum"] == r["d"] + 2 for r in rows)
    if args.json is not None:
        _emit({"schema_version": SCHEMA_VERSION, "rows": [
            {**r, "chi": [str(x) for x in r["chi"]], "expected": [str(x) for x in r["expected"]],
             "sum": str(r["sum"])} for r in rows]}, args.json)
        return 0 if good else 1
    last = None
    for r in rows:
        if r["row"] != last:
            print(f"row {r['row']}: {r['name']}")
            last = r["row"]
        chi = ", ".join(str(x) for x in r["chi"])
        flag = "" if r["chi"] == r["expected"] and r["integral"] else "  MISMATCH"
        print(f"  d={r['d']:>3}  chi = ({chi})  sum {r['sum']}{flag}")
    return 0 if good else 1


def cmd_verify(args) -> int:
    return _finish(verify_all(args.max_degree, _routes(args.route)), args.json)


def _finish(report: Report, path: str | None) -> int:
    # JSON on stdout replaces the text listing
    if path != "-":
        for c in report.checks:
            print(f"[{c.status.upper():4}] {c.id}: {c.description}")
        n = len(report.checks)
        print(f"{n - len(report.failures)}/{n} checks passed")
    for c in report.failures:
        print(f"FAILED {c.id}\n  expected: {c.expected}\n  actual:   {c.actual}", file=sys.stderr)
    if path is not None:
        _emit(report.to_json(), path)
    return 0 if report.ok else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3klein", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, json_help="write JSON (to stdout if no path is given)"):
        sp.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH", help=json_help)
        sp.add_argument("--route", choices=["tau", "phi", "both"], default="both")
        sp.add_argument("--max-degree", type=int, default=fam.MAX_DEGREE)

    c = sub.add_parser("catalog", help="dump a catalog entry as JSON")
    csub = c.add_subparsers(dest="cmd2", required=True)
    d = csub.add_parser("dump")
    d.add_argument("name", help=", ".join(cat.NAMES))
    d.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH")

    a = sub.add_parser("action", help="matrices of the involutions")
    asub = a.add_subparsers(dest="cmd2", required=True)
    m = asub.add_parser("matrix")
    m.add_argument("--gen", choices=sorted(GENERATORS), required=True)
    m.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH")

    q = sub.add_parser("quotient", help="pushforwards, pullbacks and their identities")
    qsub = q.add_subparsers(dest="cmd2", required=True)
    for name in ("push", "pull"):
        sp = qsub.add_parser(name)
        sp.add_argument("--map", choices=["tau", "phi", "residual", "total"], required=True)
        sp.add_argument("--class", dest="cls", required=True, help="symbol or expression in the source space")
        common(sp)
    common(qsub.add_parser("verify"))

    cl = sub.add_parser("classes", help="discriminant class tables")
    cl.add_argument("--lattice", required=True)
    common(cl)

    f = sub.add_parser("families", help="NS families, correspondence and Euler characteristics")
    fsub = f.add_subparsers(dest="cmd2", required=True)
    fc = fsub.add_parser("classify")
    fc.add_argument("--base", required=True)
    fc.add_argument("--degree", type=int, required=True)
    common(fc)
    fr = fsub.add_parser("correspond")
    fr.add_argument("--class", dest="cls", required=True)
    fr.add_argument("--param", type=int, required=True)
    common(fr)
    common(fsub.add_parser("table2"))

    v = sub.add_parser("verify", help="run the acceptance checks")
    vsub = v.add_subparsers(dest="cmd2", required=True)
    common(vsub.add_parser("all"))
    return p


HANDLERS = {"catalog": cmd_catalog, "action": cmd_action, "quotient": cmd_quotient,
            "classes": cmd_classes, "families": cmd_families, "verify": cmd_verify}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return HANDLERS[args.cmd](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"k3klein: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
