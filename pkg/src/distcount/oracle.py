"""Brute-force ground truth straight from the definitions.

Nothing here is shared with the counting pipeline: automorphisms come from plain
backtracking over bijections and labelings are enumerated exhaustively.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from .errors import CapExceeded, InvariantViolation
from .graph_core import Graph, MultiGraph

N_CAP = 10
LABELING_CAP = 10 ** 7

Context = Union[str, Tuple[str, int], Tuple[str, int, int]]


@dataclass
class OracleResult:
    aut_order: int
    L: int
    D: int
    per_variant: Dict[str, object] = field(default_factory=dict)


def _matrix(g: Union[Graph, MultiGraph]) -> Tuple[List[int], List[List[int]]]:
    if isinstance(g, Graph):
        verts = list(range(g.n))
        edges = [(u, v, None) for u, v in g.edges]
    else:
        verts = list(g.vertices)
        edges = list(g.edges)
    pos = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    a = [[0] * n for _ in range(n)]
    for u, v, tag in edges:
        w = 1 if tag is None else 1000
        a[pos[u]][pos[v]] += w
        a[pos[v]][pos[u]] += w
    return verts, a


def oracle_automorphisms(g: Union[Graph, MultiGraph], pins: Sequence[int] = ()) -> List[Tuple[int, ...]]:
    """Every adjacency-preserving bijection fixing each pin; positions index g's vertices."""
    verts, a = _matrix(g)
    n = len(verts)
    if n > N_CAP:
        raise CapExceeded(f"oracle graph size {n}", N_CAP)
    pos = {v: i for i, v in enumerate(verts)}
    fixed = {pos[p] for p in pins}
    img = [-1] * n
    used = [False] * n
    out: List[Tuple[int, ...]] = []

    def place(i: int):
        if i == n:
            out.append(tuple(img))
            return
        choices = [i] if i in fixed else [w for w in range(n) if not used[w] and w not in fixed]
        for w in choices:
            if used[w]:
                continue
            if any(a[i][j] != a[w][img[j]] for j in range(i)):
                continue
            img[i] = w
            used[w] = True
            place(i + 1)
            used[w] = False
            img[i] = -1

    place(0)
    out.sort(key=lambda p: p != tuple(range(n)))
    return out


def _labelings(n: int, k: int) -> np.ndarray:
    total = k ** n
    if total > LABELING_CAP:
        raise CapExceeded(f"labeling count {k}^{n}", LABELING_CAP)
    codes = np.arange(total, dtype=np.int64)
    f = np.empty((total, n), dtype=np.int16)
    for i in range(n):
        f[:, i] = (codes // (k ** i)) % k
    return f


def _preserved_by_any(f: np.ndarray, perms: Sequence[Tuple[int, ...]]) -> np.ndarray:
    hit = np.zeros(f.shape[0], dtype=bool)
    for p in perms:
        hit |= np.all(f[:, list(p)] == f, axis=1)
    return hit


def _exact_div(a: int, b: int, what: str) -> int:
    if b == 0 or a % b:
        raise InvariantViolation(f"oracle: {what}: {a} not divisible by {b}")
    return a // b


def oracle_counts(g: Union[Graph, MultiGraph], k: int, context: Context = "plain") -> OracleResult:
    """Exhaustive counts; context is "plain", ("vertex", a) or ("pair", x, y)."""
    verts, _ = _matrix(g)
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    if k == 0:
        f = np.zeros((0 if n else 1, n), dtype=np.int16)
    else:
        f = _labelings(n, k)
    ident = tuple(range(n))

    if context == "plain":
        group = oracle_automorphisms(g)
    elif context[0] == "vertex":
        group = oracle_automorphisms(g, [context[1]])
    elif context[0] == "pair":
        group = oracle_automorphisms(g, [context[1], context[2]])
    else:
        raise ValueError(f"unknown context {context!r}")
    nontrivial = [p for p in group if p != ident]
    free = ~_preserved_by_any(f, nontrivial)
    L = int(np.count_nonzero(free))
    D = _exact_div(L, len(group), "L / |Aut|")
    res = OracleResult(len(group), L, D)

    if context == "plain":
        res.per_variant["plain"] = D
    elif context[0] == "vertex":
        res.per_variant["fix_a"] = D
    else:
        x, y = pos[context[1]], pos[context[2]]
        setwise = [p for p in oracle_automorphisms(g)
                   if {p[x], p[y]} == {x, y}]
        swapping = [p for p in setwise if p[x] == y]
        edge_free = ~_preserved_by_any(f, [p for p in setwise if p != ident])
        same = f[:, x] == f[:, y] if n else np.zeros(f.shape[0], dtype=bool)
        res.per_variant["fix_xy"] = D
        res.per_variant["swap"] = bool(swapping)
        res.per_variant["edge"] = _exact_div(int(np.count_nonzero(edge_free)), len(setwise), "edge")
        res.per_variant["same"] = _exact_div(int(np.count_nonzero(edge_free & same)),
                                             len(setwise), "same")
        res.per_variant["diff"] = _exact_div(int(np.count_nonzero(edge_free & ~same)),
                                             len(setwise), "diff")
        bad = free & _preserved_by_any(f, swapping)
        res.per_variant["B"] = _exact_div(int(np.count_nonzero(bad)), len(group), "B")
        res.per_variant["aut_edge"] = len(setwise)
    return res


def oracle_orbit_recount(g: Union[Graph, MultiGraph], k: int, pins: Sequence[int] = ()) -> int:
    """Second path: number of distinct orbits of distinguishing labelings."""
    verts, _ = _matrix(g)
    n = len(verts)
    group = oracle_automorphisms(g, pins)
    if k == 0:
        return 0
    f = _labelings(n, k).astype(np.int64)
    weights = np.array([k ** i for i in range(n)], dtype=np.int64)
    codes = f @ weights
    rep = codes.copy()
    stab = np.zeros(f.shape[0], dtype=np.int64)
    for p in group:
        img = f[:, list(p)] @ weights
        rep = np.minimum(rep, img)
        stab += img == codes
    distinguishing = stab == 1
    return int(np.unique(rep[distinguishing]).size)
