"""Canonical forms, isomorphism tests and automorphism groups of pinned multigraphs.

Permutations act on positions 0..n-1 of ``graph.vertices``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import CapExceeded
from .graph_core import Graph, MultiGraph

DEFAULT_AUT_CAP = 10_000

Permutation = Tuple[int, ...]


@dataclass(frozen=True)
class PinnedGraph:
    """A multigraph whose isomorphisms must send pin i to pin i and preserve colors."""

    graph: MultiGraph
    pins: Tuple[int, ...] = ()
    colors: Optional[Mapping[int, object]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(set(self.pins)) != len(self.pins):
            raise ValueError("pins must be distinct")
        vs = set(self.graph.vertices)
        for p in self.pins:
            if p not in vs:
                raise ValueError(f"pin {p} is not a vertex")

    @classmethod
    def of(cls, g, pins: Sequence[int] = (), colors: Optional[Mapping[int, object]] = None):
        mg = g.as_multigraph() if isinstance(g, Graph) else g
        return cls(mg, tuple(pins), colors)


class _Dense:
    """Adjacency with edge labels: label = real multiplicity + (virtual multiplicity << 16)."""

    __slots__ = ("n", "nbr", "keys", "pos")

    def __init__(self, pg: PinnedGraph):
        g = pg.graph
        self.n = g.n
        self.pos = {v: i for i, v in enumerate(g.vertices)}
        nbr: List[Dict[int, int]] = [dict() for _ in range(self.n)]
        for u, v, tag in g.edges:
            a, b = self.pos[u], self.pos[v]
            inc = 1 if tag is None else (1 << 16)
            nbr[a][b] = nbr[a].get(b, 0) + inc
            nbr[b][a] = nbr[b].get(a, 0) + inc
        self.nbr = nbr
        pin_of = {self.pos[p]: i for i, p in enumerate(pg.pins)}
        colors = pg.colors or {}
        keys = []
        for i, v in enumerate(g.vertices):
            c = colors.get(v)
            deg = sum(nbr[i].values())
            keys.append((pin_of.get(i, -1), "" if c is None else repr(c),
                         deg & 0xFFFF, deg >> 16))
        self.keys = keys


def _rank(keys: Sequence) -> List[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(d: _Dense, colors: List[int], max_rounds: Optional[int] = None) -> List[int]:
    """Color refinement; every round is isomorphism-invariant, so a round cap is safe."""
    ncls = len(set(colors))
    rounds = 0
    nbr = d.nbr
    while max_rounds is None or rounds < max_rounds:
        rounds += 1
        sigs = [(colors[v], tuple(sorted((colors[w], lab) for w, lab in nbr[v].items())))
                for v in range(d.n)]
        new = _rank(sigs)
        k = len(set(new))
        colors = new
        if k == ncls:
            break
        ncls = k
    return colors


def _individualize(colors: List[int], v: int) -> List[int]:
    c = colors[v]
    return _rank([(x, 0 if (x == c and w == v) else (1 if x == c else 0))
                  for w, x in enumerate(colors)])


def _certificate(d: _Dense, lab: List[int]):
    inv = [0] * d.n
    for v, p in enumerate(lab):
        inv[p] = v
    keys = tuple(d.keys[inv[p]] for p in range(d.n))
    edges = []
    for u in range(d.n):
        for w, l in d.nbr[u].items():
            if lab[u] < lab[w]:
                edges.append((lab[u], lab[w], l))
    edges.sort()
    return (d.n, keys, tuple(edges))


def _canonical_labeling(d: _Dense) -> Tuple[tuple, List[int]]:
    """Individualization-refinement; returns (best certificate, labeling vertex->position)."""
    start = _refine(d, _rank(d.keys))
    best: List = [None, None]
    found: List[List[int]] = []  # automorphisms discovered as vertex maps

    def search(colors: List[int], path: List[int]):
        if len(set(colors)) == d.n:
            cert = _certificate(d, colors)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, colors
            elif cert == best[0]:
                # colors and best[1] both label vertices; map u -> v with equal positions
                inv = [0] * d.n
                for v, p in enumerate(best[1]):
                    inv[p] = v
                found.append([inv[colors[u]] for u in range(d.n)])
            return
        cells: Dict[int, List[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = min((c for c, vs in cells.items() if len(vs) > 1),
                     key=lambda c: (len(cells[c]), c))
        explored: List[int] = []
        for v in cells[target]:
            if explored and _same_orbit(found, path, explored, v):
                continue
            explored.append(v)
            search(_refine(d, _individualize(colors, v)), path + [v])

    search(start, [])
    return best[0], best[1]


def _same_orbit(found: List[List[int]], path: List[int], explored: List[int], v: int) -> bool:
    gens = [g for g in found if all(g[p] == p for p in path)]
    if not gens:
        return False
    orbit = {v}
    frontier = [v]
    targets = set(explored)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = g[x]
            if y not in orbit:
                if y in targets:
                    return True
                orbit.add(y)
                frontier.append(y)
    return False


def canonical_code(pg: PinnedGraph) -> bytes:
    d = _Dense(pg)
    if d.n == 0:
        return repr((0, (), ())).encode()
    cert, _ = _canonical_labeling(d)
    return repr(cert).encode()


def canonical_labeling(pg: PinnedGraph) -> Tuple[bytes, Dict[int, int]]:
    """Code plus a map from vertex id to canonical position."""
    d = _Dense(pg)
    if d.n == 0:
        return repr((0, (), ())).encode(), {}
    cert, lab = _canonical_labeling(d)
    return repr(cert).encode(), {v: lab[i] for i, v in enumerate(pg.graph.vertices)}


def are_isomorphic(pg1: PinnedGraph, pg2: PinnedGraph) -> Tuple[bool, Optional[Dict[int, int]]]:
    """Returns (True, witness mapping vertex ids of pg1 to pg2) or (False, None)."""
    c1, l1 = canonical_labeling(pg1)
    c2, l2 = canonical_labeling(pg2)
    if c1 != c2:
        return False, None
    at = {p: v for v, p in l2.items()}
    return True, {v: at[p] for v, p in l1.items()}


def group_by_isomorphism(items: Sequence[PinnedGraph]) -> List[Tuple[PinnedGraph, int, List[int]]]:
    """Classes in order of first appearance: (representative, multiplicity, member indices)."""
    classes: Dict[bytes, List[int]] = {}
    for i, pg in enumerate(items):
        classes.setdefault(canonical_code(pg), []).append(i)
    return [(items[idx[0]], len(idx), idx) for idx in classes.values()]


# ---------------------------------------------------------------- automorphism groups

def _base_order(d: _Dense, colors: List[int]) -> Tuple[List[int], List[List[int]]]:
    """Maximum-cardinality-search order; returns (order, back-neighbours of each position)."""
    n = d.n
    size: Dict[int, int] = {}
    for c in colors:
        size[c] = size.get(c, 0) + 1
    count = [0] * n
    placed = [False] * n
    order: List[int] = []
    heap = [(0, size[colors[v]], colors[v], v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        negc, _, _, v = heapq.heappop(heap)
        if placed[v] or -negc != count[v]:
            continue
        placed[v] = True
        order.append(v)
        for w in d.nbr[v]:
            if not placed[w]:
                count[w] += 1
                heapq.heappush(heap, (-count[w], size[colors[w]], colors[w], w))
    index = {v: i for i, v in enumerate(order)}
    back = [[u for u in d.nbr[v] if index[u] < index[v]] for v in order]
    return order, back


class _Searcher:
    def __init__(self, d: _Dense, colors: List[int]):
        self.d = d
        self.colors = colors
        self.order, self.back = _base_order(d, colors)
        cls: Dict[int, List[int]] = {}
        for v, c in enumerate(colors):
            cls.setdefault(c, []).append(v)
        self.cls = cls

    def candidates(self, i: int, phi: List[int], inv: List[int]) -> List[int]:
        d, colors = self.d, self.colors
        v = self.order[i]
        back = self.back[i]
        cv = colors[v]
        if back:
            par = min(back, key=lambda u: len(d.nbr[phi[u]]))
            pool = d.nbr[phi[par]].keys()
        else:
            pool = self.cls[cv]
        nv = d.nbr[v]
        out = []
        for w in pool:
            if inv[w] >= 0 or colors[w] != cv:
                continue
            nw = d.nbr[w]
            ok = True
            for u in back:
                if nw.get(phi[u]) != nv[u]:
                    ok = False
                    break
            if not ok:
                continue
            mapped = 0
            for x in nw:
                if inv[x] >= 0:
                    mapped += 1
            if mapped == len(back):
                out.append(w)
        return out

    def extend(self, phi: List[int], inv: List[int], i0: int) -> Optional[List[int]]:
        """Complete a consistent partial map defined on order[:i0]; None if impossible."""
        n = self.d.n
        order = self.order
        if i0 == n:
            return list(phi)
        stack = [(i0, self.candidates(i0, phi, inv), 0)]
        while stack:
            i, cands, j = stack[-1]
            v = order[i]
            if phi[v] >= 0:
                inv[phi[v]] = -1
                phi[v] = -1
            if j >= len(cands):
                stack.pop()
                continue
            stack[-1] = (i, cands, j + 1)
            w = cands[j]
            phi[v] = w
            inv[w] = v
            if i + 1 == n:
                result = list(phi)
                for k, _, _ in stack:
                    u = order[k]
                    if phi[u] >= 0:
                        inv[phi[u]] = -1
                        phi[u] = -1
                return result
            stack.append((i + 1, self.candidates(i + 1, phi, inv), 0))
        return None


def automorphism_array(pg: PinnedGraph, cap: int = DEFAULT_AUT_CAP) -> np.ndarray:
    """All automorphisms as rows of an (order x n) array; row 0 is the identity."""
    d = _Dense(pg)
    n = d.n
    if n == 0:
        return np.zeros((1, 0), dtype=np.intp)
    colors = _refine(d, _rank(d.keys), max_rounds=None if n <= 400 else 8)
    s = _Searcher(d, colors)
    order = s.order
    phi = [-1] * n
    inv = [-1] * n
    gens: List[np.ndarray] = []
    # (base point, orbit, number of generators available at that level)
    orbits: List[Tuple[int, List[int], int]] = []
    # prefix order[:i] fixed pointwise; walk levels from the deepest up
    for i in range(n):
        v = order[i]
        phi[v] = v
        inv[v] = v
    total = 1
    for i in range(n - 1, -1, -1):
        v = order[i]
        phi[v] = inv[v] = -1
        cands = s.candidates(i, phi, inv)
        if len(cands) <= 1:
            continue
        orbit = _orbit(gens, v)
        for w in cands:
            if w in orbit:
                continue
            phi[v], inv[w] = w, v
            tail = s.extend(phi, inv, i + 1)
            inv[w] = -1
            phi[v] = -1
            if tail is not None:
                g = np.array(tail, dtype=np.intp)
                gens.append(g)
                orbit = _orbit(gens, v)
        if len(orbit) > 1:
            total *= len(orbit)
            if total > cap:
                raise CapExceeded(f"automorphism group order (at least {total})", cap)
            orbits.append((v, sorted(orbit), len(gens)))
    ident = np.arange(n, dtype=np.intp)
    elements = ident[None, :]
    # orbits were collected deepest first; G^(i) = U_i * G^(i+1)
    for v, orb, ngen in orbits:
        trans = _transversal(gens[:ngen], v, n, orb)
        elements = trans[:, elements].reshape(-1, n)
    return np.ascontiguousarray(elements)


def _orbit(gens: List[np.ndarray], v: int) -> set:
    orbit = {v}
    frontier = [v]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = int(g[x])
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return orbit


def _transversal(gens: List[np.ndarray], v: int, n: int, orbit: List[int]) -> np.ndarray:
    """Rows t_w with t_w[v] = w for each w in the orbit, identity first."""
    ident = np.arange(n, dtype=np.intp)
    rep = {v: ident}
    frontier = [v]
    while frontier:
        x = frontier.pop()
        e = rep[x]
        for g in gens:
            y = int(g[x])
            if y not in rep:
                rep[y] = g[e]
                frontier.append(y)
    rows = [rep[v]] + [rep[w] for w in orbit if w != v]
    return np.stack(rows)


def automorphisms(pg: PinnedGraph, cap: int = DEFAULT_AUT_CAP) -> List[Permutation]:
    return [tuple(int(x) for x in row) for row in automorphism_array(pg, cap)]


def cycle_notation(perm: Sequence[int], names: Optional[Sequence[str]] = None) -> str:
    seen = set()
    parts = []
    for s in range(len(perm)):
        if s in seen or perm[s] == s:
            continue
        cyc = []
        j = s
        while j not in seen:
            seen.add(j)
            cyc.append(names[j] if names else str(j))
            j = perm[j]
        parts.append("(%s)" % " ".join(cyc))
    return "".join(parts) or "()"
