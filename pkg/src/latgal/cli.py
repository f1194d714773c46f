"""Command-line front end.

Exit codes: 0 success, 1 domain/validation failure, 2 IO or parse failure.
Errors go to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import aggregation as agg
from . import decomposition as dec
from . import fca
from . import io as lio
from . import lattice as lat
from .errors import ArityMismatch, LatticeError, ParseError


class UsageError(Exception):
    pass


def _color_enabled(to_stdout: bool) -> bool:
    flag = os.environ.get("LATGAL_COLOR")
    if flag == "0" or not to_stdout:
        return False
    return flag == "1" or sys.stdout.isatty()


def _bold(s: str, color: bool) -> str:
    return f"\x1b[1m{s}\x1b[0m" if color else s


def _text_table(rows: list, color: bool) -> str:
    widths = [max(len(str(r[j])) for r in rows) for j in range(len(rows[0]))]
    out = []
    for i, row in enumerate(rows):
        cells = []
        for j, c in enumerate(row):
            cell = str(c).rjust(widths[j])
            cells.append(_bold(cell, color) if i == 0 or j == 0 else cell)
        out.append("  ".join(cells))
    return "\n".join(out) + "\n"


def _csv(rows: list) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _load(loader, path):
    """Run a file loader, mapping IO/format problems onto UsageError (exit 2)."""
    try:
        return loader(path)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError, ParseError) as exc:
        raise UsageError(str(exc)) from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


# --- lattice ------------------------------------------------------------


def cmd_lattice(args, color):
    L = _load(lio.load_lattice, args.file)
    if args.action == "validate":
        return "OK\n"
    if args.action == "dot":
        return lat.to_dot(L)
    lab = L.labels
    join_rows = [["∨", *lab]] + [[lab[x], *(lab[v] for v in L.join_table[x].tolist())] for x in L]
    meet_rows = [["∧", *lab]] + [[lab[x], *(lab[v] for v in L.meet_table[x].tolist())] for x in L]
    fmt = args.format or "table"
    if fmt == "json":
        return _json({"elements": list(lab), "bottom": lab[L.bottom], "top": lab[L.top],
                      "join": [r[1:] for r in join_rows[1:]], "meet": [r[1:] for r in meet_rows[1:]]})
    if fmt == "csv":
        return _csv(join_rows) + "\n" + _csv(meet_rows)
    return (f"elements: {' '.join(lab)}  bottom: {lab[L.bottom]}  top: {lab[L.top]}\n\n"
            + _text_table(join_rows, color) + "\n" + _text_table(meet_rows, color))


# --- aggregation --------------------------------------------------------


def _build(spec):
    if isinstance(spec, agg.InfAggSpec):
        return agg.build_inf(spec)
    return agg.build(spec)


def _table(f, max_elements):
    if isinstance(f, agg.InfAggregation):
        return agg.full_table_inf(f, max_elements)
    return agg.full_table(f, max_elements)


def cmd_agg(args, color):
    spec = _load(lio.load_spec, args.spec)
    f = _build(spec)
    L = f.host
    inf = isinstance(f, agg.InfAggregation)
    if args.action == "build":
        bound = lat.meet(L, [S.least for _, S, _ in spec.slots]) if inf else \
            lat.join(L, [T.greatest for _, T, _ in spec.slots])
        return _json({
            "kind": "inf" if inf else "sup",
            "arity": f.arity,
            "boundary": L.labels[bound],
            "components": [c.to_labels() for c in f.components],
        })
    if args.action == "eval":
        if len(args.elements) != f.arity:
            raise ArityMismatch(f"expected {f.arity} arguments, got {len(args.elements)}",
                                witness=len(args.elements))
        try:
            x = [L.index(e) for e in args.elements]
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
        v = agg.evaluate_inf(f, x) if inf else agg.evaluate(f, x)
        return L.labels[v] + "\n"
    if args.action == "table":
        rows = _table(f, args.max_elements).to_rows()
        fmt = args.format or "csv"
        if fmt == "json":
            return _json(rows)
        if fmt == "table":
            return _text_table(rows, color)
        return _csv(rows)
    if args.action == "decompose":
        t = _table(f, args.max_elements)
        comps = agg.decompose_inf(t) if inf else agg.decompose(t)
        return _json([c.to_labels() for c in comps])
    # subdirect
    if inf:
        raise UsageError("subdirect decomposition is defined for sup-preserving specs")
    order = args.irreducibles.split(",") if args.irreducibles else None
    e = dec.birkhoff_subdirect(L, order)
    d = dec.subdirect_decompose_aggregation(f, e)
    if dec.subdirect_recompose(d) != agg.full_table(f, args.max_elements):
        raise LatticeError("recomposition does not reproduce the aggregation")
    return _json({
        "irreducibles": [L.labels[j] for j in e.irreducibles],
        "embedding": e.to_labels(),
        "matrices": [m.to_labels() for m in d.matrices],
    })


# --- fca ----------------------------------------------------------------


def cmd_fca(args, color):
    ctx = _load(fca.load_context, args.context)
    if args.action == "crisp":
        out = fca.crisp_concepts(ctx)
        order_o = {o: i for i, o in enumerate(ctx.objects)}
        order_a = {a: i for i, a in enumerate(ctx.attributes)}
        return _json([{"objects": sorted(X, key=order_o.get), "attributes": sorted(Y, key=order_a.get)}
                      for X, Y in out])
    if not args.family:
        raise UsageError("--family is required for monotone concept analysis")
    fam = _load(lio.load_family, args.family)
    cs = fca.concepts(ctx, fam, args.max_concepts)
    if args.action == "concepts":
        return _json([c.to_labels(ctx, fam.lattice) for c in cs])
    cl = fca.concept_lattice(cs, fam.lattice)
    return fca.concept_lattice_dot(cl, ctx)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "dot", "table"])
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--max-elements", type=int, default=lat.MAX_ELEMENTS)
    common.add_argument("--max-concepts", type=int, default=fca.MAX_CONCEPTS)

    p = argparse.ArgumentParser(prog="latgal", description="Finite lattices, Galois connections, "
                                "sup-preserving aggregation and monotone concept analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    pl = sub.add_parser("lattice", parents=[common], help="validate, show or draw a lattice")
    pl.add_argument("action", choices=["validate", "show", "dot"])
    pl.add_argument("file")
    pl.set_defaults(run=cmd_lattice)

    pa = sub.add_parser("agg", parents=[common], help="aggregation functions from slot specs")
    pa.add_argument("action", choices=["build", "eval", "table", "decompose", "subdirect"])
    pa.add_argument("spec")
    pa.add_argument("elements", nargs="*")
    pa.add_argument("--irreducibles", help="comma-separated join-irreducible order for subdirect")
    pa.set_defaults(run=cmd_agg)

    pf = sub.add_parser("fca", parents=[common], help="formal concepts of a data table")
    pf.add_argument("action", choices=["concepts", "lattice", "crisp"])
    pf.add_argument("context")
    pf.add_argument("--family")
    pf.set_defaults(run=cmd_fca)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    color = _color_enabled(args.out is None)
    try:
        text = args.run(args, color)
    except UsageError as exc:
        sys.stderr.write(json.dumps({"error": "UsageError", "message": str(exc)}, ensure_ascii=False) + "\n")
        return 2
    except LatticeError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), ensure_ascii=False, default=str) + "\n")
        return 1
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError", "message": str(exc)}) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
