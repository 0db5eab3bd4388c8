"""ursell-lab: verification suites and small exact computations from the command line."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import leeyang
from .corpus import current_corpus
from .graphs import GraphError
from .io import ParseError, fmt_float, fmt_rational, read_file
from .ising import CapError, Ising
from .partitions import count_partitions, enumerate_partitions
from .series import lemma_u2krcr_check
from .suites import SUITES, Config, report_json, run_all


class _Out:
    """Write to --out when given, else stdout."""

    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        self.fh = open(self.path, "w", newline="\n") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


def cmd_verify(args) -> int:
    cfg = Config(seed=args.seed, count=args.count, max_vertices=args.max_vertices,
                 max_edges=args.max_edges, max_current=args.max_current, tolerance=args.tolerance)
    print(f"{'suite':24s} {'crit':>4s} {'instances':>10s} {'violations':>10s} {'time':>8s}")

    def echo(key, res, dt):
        print(f"{key:24s} {res.criterion:>4s} {res.instances:10d} {res.violations:10d} {dt:7.2f}s", flush=True)
        for note in res.notes[:3] if res.violations else ():
            print(f"    {note}")

    results = run_all(cfg, only=args.suite, echo=echo)
    bad = sum(res.violations for _, res, _ in results)
    if args.out:
        Path(args.out).write_text(report_json(cfg, results))
    print(f"total violations: {bad}")
    return 1 if bad else 0


def cmd_rgraph(args) -> int:
    doc = read_file(args.file)
    g = doc.multigraph()
    r, n = count_partitions(g)
    print(f"R={r} partitions={n}")
    if args.list:
        for p in enumerate_partitions(g):
            print(p.describe(g))
    return 0


def cmd_ursell(args) -> int:
    doc = read_file(args.file)
    G = doc.base_graph()
    spins = args.spins or doc.spins
    if not spins:
        raise ParseError("no spins given (use a 'spins' line or --spins)", path=doc.path)
    missing = [e for e in G.edge_ids if e not in doc.t]
    if missing:
        raise ParseError(f"no 't' line for edges {missing}", path=doc.path)
    model = Ising(G, doc.t)
    print(f"u={fmt_rational(model.ursell(spins))}")
    if args.edge is not None:
        if len(spins) % 2:
            raise ValueError("the derivative needs an even number of spins")
        print(f"du/dJ={fmt_rational(model.ursell_derivative(spins, args.edge))}")
    return 0


def cmd_oracle(args) -> int:
    bad = 0
    if args.file:
        doc = read_file(args.file)
        g = doc.multigraph()
        G = doc.base_graph()
        m = doc.current_on(G)
        ok, lhs, rhs = lemma_u2krcr_check(G, g.sources, g.marked, m, detail=True)
        print(f"{'pass' if ok else 'FAIL'} coefficient={fmt_rational(lhs)} R/m!={fmt_rational(rhs)}")
        return 0 if ok else 1
    for i, inst in enumerate(current_corpus(args.seed, args.count or 30, max_vertices=args.max_vertices,
                                            max_edges=min(args.max_edges, 5), max_current=min(args.max_current, 6))):
        ok, lhs, rhs = lemma_u2krcr_check(inst.base, inst.sources, inst.marked, inst.m, detail=True)
        bad += not ok
        print(f"{i} {'pass' if ok else 'FAIL'} k={inst.k} m={list(inst.m.as_tuple())} coefficient={fmt_rational(lhs)} R/m!={fmt_rational(rhs)}")
    return 1 if bad else 0


def _couplings(doc, G, J):
    out = {}
    for e in G.edge_ids:
        if J is not None:
            out[e] = J
        elif e in doc.J:
            out[e] = doc.J[e]
        elif e in doc.t:
            out[e] = math.atanh(float(doc.t[e]))
        else:
            raise ParseError(f"no coupling for edge {e} (add a 'J' line or pass --J)", path=doc.path)
    return out


def cmd_zeros(args) -> int:
    doc = read_file(args.file)
    G = doc.base_graph()
    J = _couplings(doc, G, args.J)
    p = leeyang.partition_polynomial(G, J, doc.lam or None)
    spectrum = leeyang.roots(p, tol=args.tolerance or leeyang.UNIT_CIRCLE_TOL)
    with _Out(args.out) as fh:
        fh.write("re,im,alpha\n")
        for z in sorted(spectrum.roots, key=lambda z: (abs(math.atan2(z.imag, z.real)), z.imag)):
            fh.write(f"{fmt_float(z.real)},{fmt_float(z.imag)},{fmt_float(p.q / 2 * abs(math.atan2(z.imag, z.real)))}\n")
    return 0


def cmd_scan(args) -> int:
    doc = read_file(args.file)
    G = doc.base_graph()
    J = _couplings(doc, G, args.J)
    edges = [args.edge] if args.edge is not None else list(G.edge_ids)
    with _Out(args.out) as fh:
        fh.write("edge,J,alpha1\n")
        for e in edges:
            for i in range(args.steps):
                x = args.J_max * i / (args.steps - 1) if args.steps > 1 else 0.0
                JJ = dict(J)
                JJ[e] = x
                fh.write(f"{e},{fmt_float(x)},{fmt_float(leeyang.alpha1_scan(G, JJ, doc.lam or None))}\n")
    return 0


def cmd_explore(args) -> int:
    with _Out(args.out) as fh:
        hits = leeyang.principal_zero_explorer(args.seed, args.count or 200,
                                               max_vertices=min(args.max_vertices, 8), out=fh)
    print(f"instances with a growing higher zero: {len(hits)}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ursell-lab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--count", type=int, default=None)
    common.add_argument("--max-vertices", type=int, default=8)
    common.add_argument("--max-edges", type=int, default=6)
    common.add_argument("--max-current", type=int, default=7)
    common.add_argument("--out", default=None)
    common.add_argument("--tolerance", type=float, default=None)
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", parents=[common], help="run every verification suite")
    p.add_argument("--suite", action="append", choices=[k for k, _ in SUITES], help="run only this suite (repeatable)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("rgraph", parents=[common], help="R of a multigraph file")
    p.add_argument("file")
    p.add_argument("--list", action="store_true", help="also print every partition")
    p.set_defaults(fn=cmd_rgraph)

    p = sub.add_parser("ursell", parents=[common], help="exact Ursell function")
    p.add_argument("file")
    p.add_argument("--spins", type=int, nargs="+")
    p.add_argument("--edge", type=int, default=None, help="also print the derivative in J of this edge")
    p.set_defaults(fn=cmd_ursell)

    p = sub.add_parser("oracle", parents=[common], help="series check of R(m) on a file or a random corpus")
    p.add_argument("file", nargs="?")
    p.set_defaults(fn=cmd_oracle)

    for verb, fn, hlp in [("zeros", cmd_zeros, "field-polynomial zeros as CSV re,im,alpha"),
                          ("scan", cmd_scan, "coupling sweep CSV edge,J,alpha1")]:
        p = sub.add_parser(verb, parents=[common], help=hlp)
        p.add_argument("file")
        p.add_argument("--J", type=float, default=None, help="use this coupling on every edge")
        if verb == "scan":
            p.add_argument("--edge", type=int, default=None)
            p.add_argument("--steps", type=int, default=31)
            p.add_argument("--J-max", type=float, default=leeyang.J_MAX)
        p.set_defaults(fn=fn)

    p = sub.add_parser("explore", parents=[common], help="search for a higher zero that grows with a coupling")
    p.set_defaults(fn=cmd_explore)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, GraphError, CapError, leeyang.LeeYangError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
