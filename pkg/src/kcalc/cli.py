"""Command-line front end: ``kcalc <area> <action> ...``.

Every command builds a report (text and JSON) and a mismatch count; the exit
status is 0 iff the count is zero. Input errors exit with status 2.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .ahss import K, KO, CohomologyTable, build_e2, e2_to_json, sphere_ko_trivial
from .charclass import ring_from_json
from .charring import Character, GroupData, group_data_from_json
from .criteria import (NOT_SURJECTIVE, SURJECTIVE, catalog_lookup, dim7_verdicts, enumerate_flag_products,
                       factor_from_group_data,
                       flag_counts, flag_surjective, load_flag_catalog, sphere_tuple_mechanism,
                       sphere_tuple_scsq)
from .datafiles import dumps, load_validated, read_json, validate
from .errors import DataError, KCalcError, StructuralError
from .exactlin import FinAbGroup
from .quotient import DEFAULT_WINDOW, LaurentIdealPresentation, additive_structure
from .tate import InvolutiveModule, InvolutiveRing, h_minus, h_plus


@dataclass
class Report:
    title: str
    lines: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"title": self.title, "data": self.data, "mismatches": self.mismatches}

    def to_text(self) -> str:
        out = [self.title] + [f"  {x}" for x in self.lines]
        out += [f"  MISMATCH {m}" for m in self.mismatches]
        out.append(f"mismatches: {len(self.mismatches)}")
        return "\n".join(out)


# ---------------------------------------------------------------------------
# inputs

def _poly(nvars: int, terms: Sequence) -> Character:
    out: dict[tuple[int, ...], int] = {}
    for exps, c in terms:
        if len(exps) != nvars:
            raise DataError(f"term {exps} has {len(exps)} exponents, expected {nvars}")
        key = tuple(int(e) for e in exps)
        out[key] = out.get(key, 0) + int(c)
    return Character(nvars, out)


def parse_presentation(obj: dict) -> LaurentIdealPresentation:
    validate(obj, "laurent_presentation")
    names = tuple(obj["names"])
    n = len(names)
    if len(obj["invertible"]) != n:
        raise DataError("invertible: one flag per variable expected")
    rels = tuple(_poly(n, r) for r in obj["relations"])
    elim = tuple((e["name"], _poly(n, e["expression"])) for e in obj.get("eliminable", ()))
    return LaurentIdealPresentation(names, tuple(obj["invertible"]), rels, elim)


def parse_involutive(obj: dict) -> InvolutiveModule | InvolutiveRing:
    validate(obj, "involutive_module")
    m = InvolutiveModule.of(FinAbGroup.from_json(obj["group"]), obj["t"])
    if "mult" in obj:
        mult = tuple(tuple(tuple(c) for c in row) for row in obj["mult"])
        unit = tuple(obj.get("unit") or [int(i == 0) for i in range(m.rank)])
        return InvolutiveRing(m, mult, unit)
    return m


def parse_cohomology(obj: dict) -> CohomologyTable:
    if "generators" in obj:
        validate(obj, "cohomology_ring")
        return CohomologyTable.from_ring(ring_from_json(obj))
    validate(obj, "cohomology_groups")
    groups = {int(k): FinAbGroup.from_json(v) for k, v in obj["cohomology"].items()}
    return CohomologyTable.from_groups(obj["name"], int(obj["dimension"]), groups, bool(obj.get("sq2_zero")))


def parse_group(obj: dict) -> GroupData:
    validate(obj, "group_data")
    return group_data_from_json(obj)


_PARSERS: dict[str, Callable[[dict], Any]] = {
    "group_data": parse_group,
    "laurent_presentation": parse_presentation,
    "involutive_module": parse_involutive,
    "cohomology": parse_cohomology,
}


def parse_inputs(path: str | Path, kind: str) -> Any:
    """Read, validate and convert an input file; errors name the path and field."""
    if kind not in _PARSERS:
        raise DataError(f"unknown input kind {kind!r}")
    if kind in ("laurent_presentation", "involutive_module", "group_data"):
        obj = load_validated(path, kind)
    else:
        obj = read_json(path)
    if not isinstance(obj, dict):
        raise DataError(f"{path}: top level must be an object")
    try:
        return _PARSERS[kind](obj)
    except (DataError, StructuralError) as e:
        raise DataError(f"{path}: {e}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_spheres_check(args) -> Report:
    dims = list(args.dims)
    rep = Report(f"spheres {' x '.join(f'S^{d}' for d in dims)}")
    v = sphere_tuple_scsq(dims)
    m = sphere_tuple_mechanism(dims)
    trivial = sphere_ko_trivial(dims)
    if trivial:
        rep.lines.append("reduced KO trivial; alpha_O surjective (KO-triviality case list, "
                         "confirmed on the E2 diagonal)")
    rep.lines.append(f"residue table: {v.verdict} [{v.rule}] {v.citation}".rstrip())
    rep.lines.append(f"mechanism:     {m.verdict} [{m.rule}] {m.citation}".rstrip())
    rep.data = {"dims": dims, "ko_trivial": trivial, "table": v.to_json(), "mechanism": m.to_json()}
    if v.verdict != m.verdict:
        rep.mismatches.append(f"residue table says {v.verdict}, mechanism says {m.verdict}")
    return rep


def cmd_flag_check(args) -> Report:
    if args.group_data:
        g = parse_inputs(args.group_data, "group_data")
        if g.central:
            raise DataError(f"{args.group_data}: circle factors have no full flag criterion; use a semisimple group")
        factors = [factor_from_group_data(g)]
        args.factors = [g.name]
    elif args.factors:
        factors = catalog_lookup(args.factors)
    else:
        raise DataError("give factor names or --group-data FILE")
    v = flag_surjective(factors)
    bc, br, bh = flag_counts(factors)
    rep = Report(f"full flag of {' x '.join(args.factors)}")
    rep.lines.append(f"b_C = {bc}, b_R = {br}, b_H = {bh}")
    rep.lines.append(f"{v.verdict} [{v.rule}] {v.citation}")
    rep.data = {"factors": args.factors, "counts": [bc, br, bh], "verdict": v.to_json()}
    return rep


def cmd_flag_enumerate(args) -> Report:
    names = enumerate_flag_products(load_flag_catalog(), args.max_factors)
    rep = Report(f"full flags with alpha_O onto, at most {args.max_factors} factor(s)")
    rep.lines += [" x ".join(t) for t in names]
    rep.data = {"max_factors": args.max_factors, "products": [list(t) for t in names]}
    return rep


# non-surjective cases in dimension <= 7
DIM7_EXCEPTIONS = ("Wu", "S2xWu")


def cmd_dim7_table(args) -> Report:
    verdicts = dim7_verdicts()
    rep = Report("reduced realification, simply connected homogeneous spaces of dimension <= 7")
    for name, v in verdicts.items():
        rep.lines.append(f"{name:12} {v.verdict:15} [{v.rule}]")
        want = NOT_SURJECTIVE if name in DIM7_EXCEPTIONS else SURJECTIVE
        if v.verdict != want:
            rep.mismatches.append(f"{name}: expected {want}, got {v.verdict}")
    rep.data = {name: v.to_json() for name, v in verdicts.items()}
    return rep


def cmd_tate_compute(args) -> Report:
    obj = parse_inputs(args.file, "involutive_module")
    m = obj.module if isinstance(obj, InvolutiveRing) else obj
    hp, hm = h_plus(m), h_minus(m)
    rep = Report(f"Tate cohomology of {args.file}")
    rep.lines += [f"group = {m.group()}", f"h+ = {hp}", f"h- = {hm}"]
    if isinstance(obj, InvolutiveRing):
        rep.lines.append("ring axioms and t multiplicative: verified")
    rep.data = {"group": m.group().to_json(), "h_plus": hp.to_json(), "h_minus": hm.to_json()}
    for name, g in (("h+", hp), ("h-", hm)):
        if g.free_rank or any(o != 2 for o in g.torsion):
            rep.mismatches.append(f"{name} = {g} is not killed by 2")
    return rep


def cmd_quotient_run(args) -> Report:
    p = parse_inputs(args.file, "laurent_presentation")
    obj = read_json(args.file)
    window = args.window or obj.get("window") or DEFAULT_WINDOW
    s = additive_structure(p, window)
    names = s.presentation.names
    reps = [Character.monomial(m).format(names) for m in s.basis_reps]
    rep = Report(f"additive structure of {obj.get('name', args.file)}")
    rep.lines += [f"group = {s.group}", f"basis = {', '.join(reps)}",
                  f"window {window} stable against window {window + 1}: {s.certificate}"]
    rep.data = {"group": s.group.to_json(), "basis": reps, "window": window,
                "remaining_variables": list(names)}
    return rep


def cmd_ahss_pages(args) -> Report:
    table = parse_inputs(args.file, "cohomology")
    theory = args.theory
    page = build_e2(table, theory)
    qmin = -args.rows + 1
    rep = Report(f"{theory} AHSS for {table.name}")
    rep.lines.append("E2 (q down, p across):")
    width = table.dimension + 1
    for q in range(0, qmin - 1, -1):
        rep.lines.append(f"{q:4} " + " ".join(f"{str(page.group(p, q)):6}" for p in range(width)))
    rep.lines.append("E3 ((...) vanished, *n: Z replaced by an index-n subgroup):")
    vanished, shrunk = [], []
    for q in range(0, qmin - 1, -1):
        cells = []
        for p in range(width):
            e = page.e3(p, q)
            if e.vanished:
                cells.append(f"({e.e2})")
                vanished.append([p, q])
            elif e.cycle_index not in (1, None):
                cells.append(f"{e.group}*{e.cycle_index}")
                shrunk.append([p, q, e.cycle_index])
            else:
                cells.append(str(e.group))
        rep.lines.append(f"{q:4} " + " ".join(f"{c:8}" for c in cells))
    rep.data = {"e2": e2_to_json(page, qmin), "e3": e2_to_json(page, qmin, 3),
                "vanished": vanished, "index": shrunk}
    return rep


def cmd_berger_run(args) -> Report:
    from .berger import run_all
    r = run_all(args.window, args.seed)
    rep = Report("Berger space B^13")
    rep.lines += r.to_text().splitlines()[:-1]
    idx = [c for c in r.sections["image of alpha_O"] if c.name == "index 2"][0]
    rep.lines.append(f"image of alpha_O has index {2 if idx.ok else idx.detail} in KO(B^13)")
    rep.data = r.to_json()
    rep.mismatches = r.mismatches
    return rep


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kcalc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--json", action="store_true", help="emit the JSON report instead of text")
    top = ap.add_subparsers(dest="area", required=True)

    sp = top.add_parser("spheres").add_subparsers(dest="action", required=True)
    c = sp.add_parser("check", help="decide alpha_O for a product of spheres")
    c.add_argument("dims", nargs="+", type=int)
    c.set_defaults(func=cmd_spheres_check)

    fl = top.add_parser("flag").add_subparsers(dest="action", required=True)
    c = fl.add_parser("check", help="decide alpha_O for a full flag G/T")
    c.add_argument("factors", nargs="*", help="e.g. SU(3) G2 Spin(7)")
    c.add_argument("--group-data", metavar="FILE", help="read the group from a group_data JSON file instead")
    c.set_defaults(func=cmd_flag_check)
    c = fl.add_parser("enumerate", help="list all full flags with alpha_O onto")
    c.add_argument("--max-factors", type=int, default=3)
    c.set_defaults(func=cmd_flag_enumerate)

    d7 = top.add_parser("dim7").add_subparsers(dest="action", required=True)
    d7.add_parser("table", help="realification verdicts in dimension <= 7").set_defaults(func=cmd_dim7_table)

    ta = top.add_parser("tate").add_subparsers(dest="action", required=True)
    c = ta.add_parser("compute", help="h+ and h- of an involutive group or ring")
    c.add_argument("file")
    c.set_defaults(func=cmd_tate_compute)

    qu = top.add_parser("quotient").add_subparsers(dest="action", required=True)
    c = qu.add_parser("run", help="additive structure of a Laurent quotient ring")
    c.add_argument("file")
    c.add_argument("--window", type=int, default=None)
    c.set_defaults(func=cmd_quotient_run)

    ah = top.add_parser("ahss").add_subparsers(dest="action", required=True)
    c = ah.add_parser("pages", help="E2 and E3 pages of the K or KO spectral sequence")
    c.add_argument("file")
    c.add_argument("--theory", choices=(K, KO), default=KO)
    c.add_argument("--rows", type=int, default=14, help="number of q-rows to show")
    c.set_defaults(func=cmd_ahss_pages)

    be = top.add_parser("berger").add_subparsers(dest="action", required=True)
    c = be.add_parser("run", help="verify K(B^13), KO(B^13), phi, im(alpha_O) and w")
    c.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_berger_run)
    return ap


def run_command(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rep = args.func(args)
    except (KCalcError, OSError) as e:
        print(f"kcalc: error: {e}", file=sys.stderr)
        return 2
    out.write(dumps(rep.to_json()) if args.json else rep.to_text() + "\n")
    return 0 if not rep.mismatches else 1


def main(argv: Sequence[str] | None = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
