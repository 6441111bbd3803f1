"""The `dist` command line tool."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import families
from .counting import DistinguishingCounter
from .decomposition_tree import T
from .errors import CapExceeded, DistError, GraphFormatError, InvariantViolation, NotConnectedError
from .graph_core import Graph, parse_graph
from .isomorphism import DEFAULT_AUT_CAP, cycle_notation
from .oracle import LABELING_CAP, N_CAP, oracle_automorphisms, oracle_counts

log = logging.getLogger("distcount")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVARIANT, EXIT_MISMATCH = 0, 1, 2, 3, 4
FAMILIES = ("ALL", "PLANAR", "TREES", "CYCLES")
BENCH_FAMILIES = ("cycles", "wheels", "sp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this tool reserves 2 for unreadable graphs."""

    def error(self, message):
        raise UsageError(message)


def _frac(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _read_graph(args) -> Graph:
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {args.file}: {exc.strerror}") from exc
    return parse_graph(text, args.format)


def _counter(g: Graph, args) -> DistinguishingCounter:
    return DistinguishingCounter(g, cap_aut=args.cap_aut, jobs=args.jobs)


# ---------------------------------------------------------------- commands

def cmd_compute(args) -> Tuple[dict, int]:
    if args.k is None:
        raise UsageError("compute needs --k")
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    g = _read_graph(args)
    r = _counter(g, args).count(args.k)
    return {"k": args.k, "L": str(r.L), "D": str(r.D), "aut": str(r.aut)}, EXIT_OK


def cmd_number(args) -> Tuple[dict, int]:
    g = _read_graph(args)
    return {"D_number": _counter(g, args).distinguishing_number()}, EXIT_OK


def cmd_poly(args) -> Tuple[dict, int]:
    g = _read_graph(args)
    coeffs = _counter(g, args).polynomial()
    return {"degree": len(coeffs) - 1, "coefficients": [_frac(c) for c in coeffs]}, EXIT_OK


def cmd_tree(args) -> Tuple[dict, int]:
    g = _read_graph(args)
    c = _counter(g, args)
    trees = [prep.tree.to_json() for prep, _ in c.parts]
    multiplicity = [m for _, m in c.parts]
    if len(trees) == 1 and multiplicity == [1]:
        return {"tree": trees[0]}, EXIT_OK
    return {"components": [{"multiplicity": m, "tree": t} for t, m in zip(trees, multiplicity)]}, EXIT_OK


def cmd_aut(args) -> Tuple[dict, int]:
    g = _read_graph(args)
    names = [g.name_of(v) for v in range(g.n)]
    if g.n <= N_CAP:
        perms = oracle_automorphisms(g)
        return {"method": "oracle", "order": str(len(perms)),
                "automorphisms": [cycle_notation(p, names) for p in perms]}, EXIT_OK
    c = _counter(g, args)
    comps = []
    for prep, m in c.parts:
        nodes = []
        for v, tp in sorted(prep.t_prep.items()):
            for flavour, var in sorted(tp.variants.items()):
                nodes.append({"node": v, "stabilizer": flavour, "order": var.order,
                              "case": var.engine})
        comps.append({"multiplicity": m, "t_nodes": nodes})
    return {"method": "decomposition", "order": str(c.count(1).aut), "components": comps}, EXIT_OK


def _verify_graphs(family: str, max_n: int) -> Iterator[Graph]:
    import networkx as nx
    if family in ("ALL", "PLANAR"):
        if max_n > 7:
            raise UsageError("ALL and PLANAR sweeps enumerate the graph atlas, which stops at n = 7")
        for h in nx.graph_atlas_g()[1:]:
            if h.number_of_nodes() > max_n or not nx.is_connected(h):
                continue
            if family == "PLANAR" and not nx.check_planarity(h)[0]:
                continue
            yield Graph.from_edges(h.number_of_nodes(), h.edges())
    elif family == "TREES":
        yield Graph.from_edges(1, [])
        for n in range(2, max_n + 1):
            for h in nx.nonisomorphic_trees(n):
                yield Graph.from_edges(n, h.edges())
    else:
        for n in range(3, max_n + 1):
            yield families.cycle(n)


def _verify_one(job) -> dict:
    edges, n, max_k = job
    g = Graph.from_edges(n, edges)
    c = DistinguishingCounter(g)
    out = {"n": n, "edges": [list(e) for e in sorted(edges)], "checked": 0, "skipped": 0,
           "mismatches": []}
    for k in range(1, max_k + 1):
        if k ** n > LABELING_CAP:
            out["skipped"] += 1
            continue
        got = c.count(k)
        want = oracle_counts(g, k)
        out["checked"] += 1
        if (got.D, got.aut, got.L) != (want.D, want.aut_order, want.L):
            out["mismatches"].append({"k": k, "pipeline": [str(got.D), str(got.aut)],
                                      "oracle": [str(want.D), str(want.aut_order)]})
    return out


def cmd_verify(args) -> Tuple[dict, int]:
    if args.max_n > N_CAP:
        raise UsageError(f"--max-n is capped at {N_CAP} by the brute-force oracle")
    jobs = [(sorted(g.edges), g.n, args.max_k) for g in _verify_graphs(args.family, args.max_n)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_one, jobs, chunksize=8))
    else:
        results = [_verify_one(j) for j in jobs]
    bad = [r for r in results if r["mismatches"]]
    report = {"family": args.family, "max_n": args.max_n, "max_k": args.max_k,
              "graphs": len(results), "cases": sum(r["checked"] for r in results),
              "skipped": sum(r["skipped"] for r in results), "mismatches": bad,
              "status": "PASS" if not bad else "FAIL"}
    return report, EXIT_MISMATCH if bad else EXIT_OK


def _bench_graph(family: str, n: int, seed: Optional[int]) -> Graph:
    if family == "wheels":
        return families.wheel(n)
    if family == "sp":
        return families.sp_chain(n, seed)
    return families.random_cycle_with_pendants(max(3, (3 * n) // 4), seed)


def cmd_bench(args) -> Tuple[dict, int]:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}")
    k = 10 if args.k is None else args.k
    fams = BENCH_FAMILIES if args.family == "all" else (args.family,)
    rows = []
    for fam in fams:
        for n in sizes:
            g = _bench_graph(fam, n, args.seed)
            t0 = time.perf_counter()
            r = DistinguishingCounter(g, cap_aut=args.cap_aut, jobs=args.jobs).count(k)
            rows.append({"family": fam, "n": g.n, "m": g.m, "k": k,
                         "seconds": round(time.perf_counter() - t0, 4),
                         "D_digits": len(str(r.D)), "aut": str(r.aut)})
    return {"runs": rows}, EXIT_OK


# ---------------------------------------------------------------- plumbing

def _plain(report: dict) -> str:
    lines = []
    for key, val in report.items():
        if isinstance(val, (dict, list)):
            val = json.dumps(val)
        lines.append(f"{key}: {val}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("auto", "edgelist", "graph6"), default="auto")
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--cap-aut", type=int, default=DEFAULT_AUT_CAP)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--plain", action="store_true", help="human-readable text instead of JSON")

    p = _Parser(prog="dist", description="Count distinguishing labelings of graphs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, helptext in (("compute", "L(G,k), D(G,k) and |Aut(G)|"),
                           ("number", "distinguishing number D(G)"),
                           ("poly", "distinguishing polynomial coefficients"),
                           ("tree", "decomposition tree as JSON"),
                           ("aut", "automorphisms in cycle notation")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file", help="graph file, or - for standard input")
    v = sub.add_parser("verify", parents=[common], help="pipeline against brute force")
    v.add_argument("--max-n", type=int, default=6)
    v.add_argument("--max-k", type=int, default=3)
    v.add_argument("--family", choices=FAMILIES, default="ALL")
    b = sub.add_parser("bench", parents=[common], help="timing on generated families")
    b.add_argument("--family", choices=BENCH_FAMILIES + ("all",), default="all")
    b.add_argument("--sizes", default="100,200,500")
    return p


COMMANDS = {"compute": cmd_compute, "number": cmd_number, "poly": cmd_poly, "tree": cmd_tree,
            "aut": cmd_aut, "verify": cmd_verify, "bench": cmd_bench}


def _emit_error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("DIST_LOG", "").lower()
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level={"debug": logging.DEBUG, "info": logging.INFO}.get(level, logging.WARNING))
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        t0 = time.perf_counter()
        report, code = COMMANDS[args.command](args)
    except UsageError as exc:
        return _emit_error("usage", str(exc), EXIT_USAGE)
    except GraphFormatError as exc:
        return _emit_error("parse", str(exc), EXIT_PARSE)
    except InvariantViolation as exc:
        return _emit_error("invariant", str(exc), EXIT_INVARIANT)
    except (CapExceeded, NotConnectedError) as exc:
        return _emit_error("unsupported", str(exc), EXIT_USAGE)
    except DistError as exc:
        return _emit_error("error", str(exc), EXIT_INVARIANT)
    full = {"command": args.command}
    if getattr(args, "file", None) is not None:
        full["input"] = args.file
    full.update(report)
    full["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    log.info("%s finished in %.1f ms", args.command, full["timing_ms"])
    print(_plain(full) if args.plain else json.dumps(full))
    return code


if __name__ == "__main__":
    sys.exit(main())
