"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import weyl
from .bdcomplex import (
    DERIVED,
    FULL,
    K2,
    K3,
    assemble_cohomology,
    build_column,
    compute_E1,
)
from .classify import assemble_bg
from .invariants import cubic_invariant_basis, quadratic_invariant_basis
from .rootdata import SpecError, count_nbdg, nbdg_subdiagrams, parse_spec
from .zchain import atomic_write, export_complex, parse_field

SCHEMA = 1

EPILOG = """\
groups are written like A2xB3xT2 (case-insensitive, no spaces).
fields: 'symbolic' keeps K-groups as named modules, 'Fq:<q>' uses the
finite-field values.  Loop groups and their transgression maps are out of
scope and not computed by any subcommand.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]], title: str = "") -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]

    def line(r):
        return "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()

    out = [title] if title else []
    out.append(line(cells[0]))
    out.append("  ".join("-" * w for w in widths))
    out.extend(line(r) for r in cells[1:])
    return "\n".join(out) + "\n"


def _document(command: str, cfg: dict, result: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "config": cfg, "result": result}


def _config(args, **extra) -> dict:
    cfg = {"group": str(args.spec), "field": args.field_name}
    cfg.update(extra)
    return cfg


def _cell_key(cell: tuple[int, int]) -> str:
    return f"{cell[0]},{cell[1]}"


# ---------------------------------------------------------------------------
# subcommands; each returns (document, table text, exit code)
# ---------------------------------------------------------------------------


def _report_rows(report) -> list[list[str]]:
    return [[f"H^{e.degree}", e.describe(), ",".join(e.flags)] for e in report.entries]


def cmd_cohomology(args):
    spec, model = args.spec, args.model
    result = {}
    if args.space == "G":
        report = assemble_cohomology(spec, args.sheaf, model)
        result["E1"] = {_cell_key(c): g.to_dict() for c, g in sorted(compute_E1(spec, args.sheaf).items())}
    else:
        bg = assemble_bg(spec, args.sheaf, model)
        report = bg.report
        result["consistency"] = dict(sorted(bg.consistency.items()))
    result["report"] = report.to_dict()
    title = f"H^n({'B' if args.space == 'BG' else ''}{spec}, {args.sheaf}) over {args.field_name}"
    table = render_table(["degree", "group", "flags"], _report_rows(report), title)
    return _document("cohomology", _config(args, sheaf=args.sheaf, space=args.space), result), table, 0


def cmd_extensions(args):
    sheaf = args.by or args.sheaf
    bg = assemble_bg(args.spec, sheaf, args.model)
    exts = [e for e in bg.extensions if args.kind is None or e.kind == args.kind]
    result = {"extensions": [e.to_dict() for e in exts]}
    rows = []
    for e in exts:
        rows.append([e.kind, str(e.lattice), e.description, f"{len(e.generators)} generators"])
        for n, gen in enumerate(e.generators):
            rows.append(["", f"  g{n}", json.dumps(gen, sort_keys=True), ""])
    table = render_table(["kind", "lattice", "group", "basis"], rows,
                         f"extensions of {args.spec} by {sheaf} over {args.field_name}")
    cfg = _config(args, by=sheaf, kind=args.kind)
    return _document("extensions", cfg, result), table, 0


def cmd_forms(args):
    quad = quadratic_invariant_basis(args.spec, args.lattice)
    cub = cubic_invariant_basis(args.spec, args.lattice)
    result = {
        "quadratic": {"rank": len(quad), "basis": [q.to_dict() for q in quad]},
        "cubic": {"rank": len(cub), "basis": [c.to_dict() for c in cub]},
    }
    rows = [["quadratic", str(len(quad))], ["cubic", str(len(cub))]]
    table = render_table(["forms", "rank"], rows, f"W-invariant forms on Y for {args.spec} ({args.lattice} lattice)")
    return _document("forms", _config(args, lattice=args.lattice), result), table, 0


def cmd_chow3(args):
    spec = args.spec
    torsion = compute_E1(spec, K3)[(-3, 6)]
    subs = nbdg_subdiagrams(spec)
    result = {
        "torsion": torsion.to_dict(),
        "subdiagrams": [{"type": t, "nodes": list(nodes)} for t, nodes in subs],
        "count": count_nbdg(spec),
    }
    rows = [[t, " ".join(map(str, nodes))] for t, nodes in subs]
    table = render_table(["type", "nodes"], rows, f"CH^3({spec}) torsion = {torsion}")
    return _document("chow3", _config(args), result), table, 0


def cmd_wsets(args):
    spec = args.spec
    levels = []
    rows = []
    for p in range(args.max_level + 1):
        ws = weyl.enumerate_wset(spec, p)
        entry = {"level": p, "count": len(ws), "elements": [w.label() for w in ws]}
        if args.brute_force:
            entry["brute_force"] = weyl.brute_force_wset_count(spec, p)
        levels.append(entry)
        rows.append([f"W^({p})", str(len(ws)), " ".join(entry["elements"])])
    table = render_table(["set", "size", "elements"], rows, f"Weyl index sets for {spec} (0-based simple roots)")
    cfg = _config(args, max_level=args.max_level)
    return _document("wsets", cfg, {"levels": levels}), table, 0


def cmd_export(args):
    if args.out is None:
        raise UsageError("export-complex needs --out <directory>")
    col = build_column(args.spec, args.sheaf, args.column, args.lattice)
    meta = {"group": str(args.spec), "sheaf": args.sheaf, "column": args.column, "lattice": args.lattice}
    manifest = export_complex(col.complex, args.out, meta)
    result = {"manifest": str(manifest), "ranks": list(col.complex.ranks), "start": col.complex.start}
    table = render_table(["degree", "rank"], [[str(n), str(col.complex.rank(n))] for n in col.complex.degrees],
                         f"column p={args.column} of {args.sheaf} for {args.spec} written to {args.out}")
    cfg = _config(args, sheaf=args.sheaf, column=args.column, lattice=args.lattice)
    return _document("export-complex", cfg, result), table, 0


def cmd_verify(args):
    from .verify import run_battery

    results = run_battery(args.battery)
    ok = all(r.passed for r in results)
    doc = _document("verify", {"battery": args.battery}, {
        "passed": ok,
        "checks": [{"criterion": r.criterion, "name": r.name, "passed": r.passed,
                    "detail": r.detail, "seconds": round(r.seconds, 2)} for r in results],
    })
    rows = [[str(r.criterion), "PASS" if r.passed else "FAIL", r.name, f"{r.seconds:.1f}s", r.detail] for r in results]
    table = render_table(["#", "result", "check", "time", "detail"], rows, f"battery {args.battery}")
    return doc, table, 0 if ok else 2


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--out", help="write output here (directory for export-complex)")

    grp = _Parser(add_help=False)
    grp.add_argument("--group", required=True, help="group spec such as A2xB3xT2")
    grp.add_argument("--field", default="symbolic", help="symbolic or Fq:<q>")

    sheaf = _Parser(add_help=False)
    sheaf.add_argument("--sheaf", choices=[K2, K3], default=K3)

    parser = _Parser(prog="bdspectra", description="K-cohomology of split reductive groups and their classifying spaces.",
                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cohomology", parents=[common, grp, sheaf], help="H^n(G, K) or H^n(BG, K)")
    p.add_argument("--space", choices=["G", "BG"], default="G")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("extensions", parents=[common, grp, sheaf], help="central and gerbal extensions")
    p.add_argument("--by", choices=[K2, K3], help="extending sheaf (overrides --sheaf)")
    p.add_argument("--kind", choices=["central", "gerbal"])
    p.set_defaults(func=cmd_extensions)

    p = sub.add_parser("forms", parents=[common, grp], help="W-invariant quadratic and cubic forms")
    p.add_argument("--lattice", choices=[DERIVED, FULL], default=FULL)
    p.set_defaults(func=cmd_forms)

    p = sub.add_parser("chow3", parents=[common, grp], help="torsion of CH^3 and the subdiagrams behind it")
    p.set_defaults(func=cmd_chow3)

    p = sub.add_parser("wsets", parents=[common, grp], help="the index sets W^(p)")
    p.add_argument("--max-level", type=int, choices=[0, 1, 2, 3], default=3)
    p.add_argument("--brute-force", action="store_true", help="also count by enumerating W")
    p.set_defaults(func=cmd_wsets)

    p = sub.add_parser("export-complex", parents=[common, grp, sheaf], help="write an E_0 column as zmatrix files")
    p.add_argument("--column", type=int, required=True, help="column index p (negative)")
    p.add_argument("--lattice", choices=[DERIVED, FULL], default=DERIVED)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", parents=[common], help="run the verification battery")
    p.add_argument("--battery", choices=["standard", "quick"], default="standard")
    p.set_defaults(func=cmd_verify)
    return parser


def _resolve(args) -> None:
    if hasattr(args, "group"):
        args.spec = parse_spec(args.group)
        args.model = parse_field(args.field)
        args.field_name = "symbolic" if args.model is None else args.model.name


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve(args)
        doc, table, code = args.func(args)
    except (SpecError, UsageError, ValueError) as exc:
        print(f"bdspectra: error: {exc}", file=sys.stderr)
        return 1
    text = dumps(doc) if args.format == "json" else table
    if args.out is not None and args.command != "export-complex":
        atomic_write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
