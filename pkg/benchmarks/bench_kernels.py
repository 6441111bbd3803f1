"""Compiled vs pure-Python kernels on the inputs the pipeline actually feeds them.

    python3 benchmarks/bench_kernels.py [--n 2000] [--repeat 5]
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from distcount import _kernels_py as pure
from distcount.families import wheel
from distcount.isomorphism import PinnedGraph, automorphism_array

try:
    from distcount import _kernels as compiled
except ImportError:
    compiled = None


def _csr(g):
    indptr = np.zeros(g.n + 1, dtype=np.intp)
    cols = []
    for v in range(g.n):
        cols.extend(g.adj[v])
        indptr[v + 1] = len(cols)
    return indptr, np.array(cols, dtype=np.intp)


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    g = wheel(args.n)
    perms = automorphism_array(PinnedGraph.of(g))
    rows = list(range(0, perms.shape[0], 7))
    indptr, indices = _csr(g)
    order = list(range(g.n))

    cases = {
        "orbit_labels": lambda k: k.orbit_labels(perms, rows),
        "perm_orders": lambda k: k.perm_orders(perms),
        "find_separating_pair": lambda k: k.find_separating_pair(indptr, indices, order),
    }
    report = []
    for name, call in cases.items():
        row = {"kernel": name, "pure_s": round(_time(lambda: call(pure), args.repeat), 5)}
        if compiled is not None:
            a, b = call(pure), call(compiled)
            same = (np.array_equal(a, b) if isinstance(a, np.ndarray)
                    else (a[0] == b[0] and list(a[1]) == list(b[1])))
            row["compiled_s"] = round(_time(lambda: call(compiled), args.repeat), 5)
            row["speedup"] = round(row["pure_s"] / max(row["compiled_s"], 1e-9), 1)
            row["outputs_equal"] = bool(same)
        report.append(row)
    print(json.dumps({"graph": f"wheel({args.n})", "group_order": int(perms.shape[0]),
                      "compiled_available": compiled is not None, "results": report}, indent=2))


if __name__ == "__main__":
    main()
