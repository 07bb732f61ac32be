"""Command line interface: ``pfc <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .apps.grid import GridRegion, StepPolicy, evaluate_region
from .apps.tutte import LatticePathMatroid, tutte_lattice_path
from .apps.xmatch import XGraph, x_matching_value
from .circuit import brute_force_value, evaluate, fold_leaves, planar_embed, prepare
from .coefficients import format_poly, ring_of
from .errors import FitError, PfcError
from .io import read_circuit
from .pfaffian import format_matrix
from .predicate_fit import realize
from .tensor import BasisChange, format_ket, parse_predicate


def _show(v) -> str:
    return ring_of(v).format(v)


def _point(text: str) -> tuple[int, int]:
    x, y = text.split(",")
    return int(x), int(y)


def cmd_eval(args) -> int:
    f = read_circuit(args.file)
    order = f.order if args.order == "file" else None
    if args.order == "file" and order is None:
        raise PfcError("the file gives no pos order")
    print(_show(evaluate(f.circuit, order=order)))
    return 0


def cmd_brute(args) -> int:
    f = read_circuit(args.file)
    print(_show(brute_force_value(f.circuit)))
    return 0


def cmd_check(args) -> int:
    c = read_circuit(args.file).circuit
    rot = planar_embed(c)
    print(f"ok: {len(c.nodes)} nodes, {len(c.edges)} edges, planar")
    for name, node in c.nodes.items():
        print(f"  {name}: {node.predicate.orientation.value} arity {node.predicate.arity}, rotation {rot[name]}")
    folded, _ = fold_leaves(c)
    for name in c.nodes:
        if name not in folded.nodes:
            print(f"  {name}: folded into its neighbour (not Pfaffian in its basis)")
    p = prepare(folded)
    for name, (r, _) in p.fitted.items():
        kind = r.gadget.kind if r.gadget else "simple"
        print(f"  {name}: realized ({kind}), scalar {_show(r.scalar)}")
    return 0


def cmd_fit(args) -> int:
    p = parse_predicate(Path(args.file).read_text(encoding="utf-8"))
    bases = None
    if args.basis:
        A = BasisChange.parse(args.basis, p.ring)
        bases = {e: A for e in p.edges}
    try:
        r = realize(p, bases)
    except FitError as exc:
        print(exc.report())
        return 1
    print(f"{r.orientation.value}, scalar {_show(r.scalar)}")
    if r.gadget is not None:
        print(f"gadget {r.gadget.kind}: stars {list(r.gadget.stars)} against {format_ket(r.gadget.partner)}")
    print(format_matrix(r.matrix))
    return 0


def cmd_paths(args) -> int:
    policy = StepPolicy.parse(args.policy)
    if args.region:
        boxes = set()
        for line in Path(args.region).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].split()
            if line:
                boxes.add((int(line[0]), int(line[1])))
        start = _point(args.start) if args.start else None
        end = _point(args.end) if args.end else None
        r = GridRegion(frozenset(boxes), start, end, policy)
    else:
        if not args.grid:
            raise PfcError("give --grid MxN or --region FILE")
        m, n = (int(t) for t in args.grid.lower().split("x"))
        kw = {}
        if args.start:
            kw["start"] = _point(args.start)
        if args.end:
            kw["end"] = _point(args.end)
        r = GridRegion.rectangle(m, n, policy, **kw)
    print(_show(evaluate_region(r)))
    return 0


def cmd_tutte(args) -> int:
    print(format_poly(tutte_lattice_path(LatticePathMatroid(args.upper.upper(), args.lower.upper()))))
    return 0


def cmd_xmatch(args) -> int:
    g = XGraph.parse(Path(args.file).read_text(encoding="utf-8"))
    print(_show(x_matching_value(g)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pfc", description="Pfaffian circuit evaluation")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval", help="value of a closed circuit via one Pfaffian")
    p.add_argument("file")
    p.add_argument("--order", choices=("tree", "file"), default="tree",
                   help="spanning-tree curve order (default) or the file's pos order")
    p.set_defaults(func=cmd_eval)
    p = sub.add_parser("brute", help="value by summing over all edge assignments")
    p.add_argument("file")
    p.set_defaults(func=cmd_brute)
    p = sub.add_parser("check", help="validate, embed and realize every node")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("fit", help="realize one predicate as a subPfaffian")
    p.add_argument("file")
    p.add_argument("--basis", help="basis name or a00,a01,a10,a11, applied on every edge")
    p.set_defaults(func=cmd_fit)
    p = sub.add_parser("paths", help="count lattice paths on a square grid")
    p.add_argument("--grid", help="MxN boxes")
    p.add_argument("--region", help="file with one box 'x y' per line")
    p.add_argument("--policy", default="monotone", help="monotone, general or loops")
    p.add_argument("--start")
    p.add_argument("--end")
    p.set_defaults(func=cmd_paths)
    p = sub.add_parser("tutte", help="Tutte polynomial of a lattice path matroid")
    p.add_argument("--upper", required=True, help="upper path Q as N/E steps")
    p.add_argument("--lower", required=True, help="lower path P as N/E steps")
    p.set_defaults(func=cmd_tutte)
    p = sub.add_parser("xmatch", help="X-matching sum of a weighted bipartite graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_xmatch)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PfcError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
