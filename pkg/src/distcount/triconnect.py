"""Triconnected components of a biconnected multigraph by split-to-completion and merge."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from . import kernels
from .errors import InvariantViolation, NotBiconnectedError
from .graph_core import Graph, MEdge, MultiGraph, blocks_and_cut_vertices, is_connected

BOND, POLYGON, RIGID = "BOND", "POLYGON", "RIGID"


@dataclass(frozen=True)
class TriComponent:
    kind: str
    graph: MultiGraph
    virtual_tags: frozenset

    def to_json(self) -> dict:
        edges = []
        for u, v, t in self.graph.edges:
            e = {"u": u, "v": v}
            if t is not None:
                e["virtual_id"] = t
            edges.append(e)
        return {"kind": self.kind, "vertices": list(self.graph.vertices), "edges": edges}


@dataclass(frozen=True)
class SeparatingPair:
    x: int
    y: int
    split_id: int


class _Piece:
    """Mutable multigraph over edge ids of a shared edge table."""

    __slots__ = ("table", "edges", "adj")

    def __init__(self, table: List[MEdge], eids):
        self.table = table
        self.edges: Set[int] = set()
        self.adj: Dict[int, Dict[int, List[int]]] = {}
        for e in eids:
            self.add(e)

    def add(self, e: int):
        u, v, _ = self.table[e]
        self.edges.add(e)
        self.adj.setdefault(u, {}).setdefault(v, []).append(e)
        self.adj.setdefault(v, {}).setdefault(u, []).append(e)

    def remove(self, e: int):
        u, v, _ = self.table[e]
        self.edges.discard(e)
        for a, b in ((u, v), (v, u)):
            lst = self.adj[a][b]
            lst.remove(e)
            if not lst:
                del self.adj[a][b]
                if not self.adj[a]:
                    del self.adj[a]

    def degree(self, v: int) -> int:
        return sum(len(l) for l in self.adj[v].values())

    def classes(self, x: int, y: int) -> List[List[int]]:
        """Separation classes w.r.t. {x, y} as lists of edge ids."""
        out: List[List[int]] = []
        for e in self.adj.get(x, {}).get(y, []):
            out.append([e])
        seen = {x, y}
        for s in sorted(self.adj):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            out.append(sorted({e for u in comp for l in self.adj[u].values() for e in l}))
        return out


def _to_piece(b: MultiGraph, table: List[MEdge]) -> _Piece:
    start = len(table)
    table.extend(b.edges)
    return _Piece(table, range(start, len(table)))


def separation_classes(b: MultiGraph, x: int, y: int) -> List[List[MEdge]]:
    table: List[MEdge] = []
    p = _to_piece(b, table)
    return [[table[e] for e in cls] for cls in p.classes(x, y)]


def is_separating_pair(b: MultiGraph, x: int, y: int) -> bool:
    cls = separation_classes(b, x, y)
    if len(cls) < 2:
        return False
    singles = sum(1 for c in cls if len(c) == 1)
    if len(cls) == 2 and singles >= 1:
        return False
    if len(cls) == 3 and singles == 3:
        return False
    return True


def _check_biconnected(b: MultiGraph):
    if b.n < 2 or b.m < 3:
        raise NotBiconnectedError("need a biconnected multigraph with at least 3 edges")
    pos = {v: i for i, v in enumerate(b.vertices)}
    simple = {(min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v, _ in b.edges}
    if any(u == v for u, v in simple):
        raise NotBiconnectedError("self-loop in block")
    g = Graph.from_edges(b.n, sorted(simple))
    if not is_connected(g):
        raise NotBiconnectedError("multigraph is not connected")
    if b.n >= 3 and blocks_and_cut_vertices(g).cut_vertices:
        raise NotBiconnectedError("multigraph has a cut vertex")


class _Splitter:
    def __init__(self, b: MultiGraph, rng: Optional[random.Random]):
        self.table: List[MEdge] = []
        self.rng = rng
        self.next_tag = 1
        self.root = _to_piece(b, self.table)

    def _virtual_pair(self, x: int, y: int) -> Tuple[int, int]:
        tag = self.next_tag
        self.next_tag += 1
        self.table.append((x, y, tag))
        self.table.append((x, y, tag))
        return len(self.table) - 2, len(self.table) - 1

    def _split(self, p: _Piece, x: int, y: int, part: Sequence[int]) -> _Piece:
        ea, eb = self._virtual_pair(x, y)
        for e in part:
            p.remove(e)
        p.add(eb)
        return _Piece(self.table, list(part) + [ea])

    def _pick(self, seq):
        return self.rng.choice(seq) if self.rng else seq[0]

    def _local_split(self, p: _Piece, dirty: List[int]) -> Optional[Tuple[int, int, List[int]]]:
        """A parallel-bundle or degree-2 split found around dirty vertices, if any."""
        nv = len(p.adj)
        while dirty:
            if self.rng:
                i = self.rng.randrange(len(dirty))
                dirty[i], dirty[-1] = dirty[-1], dirty[i]
            v = dirty.pop()
            if v not in p.adj:
                continue
            nb = p.adj[v]
            multi = [w for w in nb if len(nb[w]) >= 2]
            if multi and nv >= 3:
                w = self._pick(sorted(multi))
                dirty.append(v)
                return v, w, list(nb[w])
            if nv >= 4 and len(nb) == 2 and all(len(l) == 1 for l in nb.values()):
                a, b = sorted(nb)
                return a, b, [nb[a][0], nb[b][0]]
        return None

    def _general_split(self, p: _Piece) -> Optional[Tuple[int, int, List[int]]]:
        verts = sorted(p.adj)
        if len(verts) < 4:
            return None
        pos = {v: i for i, v in enumerate(verts)}
        indptr = np.zeros(len(verts) + 1, dtype=np.intp)
        cols: List[int] = []
        for i, v in enumerate(verts):
            nb = sorted(pos[w] for w in p.adj[v])
            cols.extend(nb)
            indptr[i + 1] = len(cols)
        indices = np.array(cols, dtype=np.intp)
        order = list(range(len(verts)))
        if self.rng:
            self.rng.shuffle(order)
        x, ys = kernels.find_separating_pair(indptr, indices, order)
        if x < 0:
            return None
        y = self._pick(ys)
        xv, yv = verts[x], verts[y]
        cls = [c for c in p.classes(xv, yv) if len(c) >= 2]
        if len(cls) < 2:
            raise InvariantViolation("separating pair without two proper classes")
        part = self._pick(cls) if self.rng else min(cls, key=len)
        return xv, yv, part

    def run(self) -> List[_Piece]:
        stack = [self.root]
        final: List[_Piece] = []
        while stack:
            p = stack.pop()
            dirty = sorted(p.adj)
            while True:
                if len(p.adj) == 2:
                    if len(p.edges) >= 4:
                        es = sorted(p.edges)
                        if self.rng:
                            self.rng.shuffle(es)
                        u, v, _ = self.table[es[0]]
                        stack.append(self._split(p, u, v, es[:2]))
                        continue
                    final.append(p)
                    break
                found = self._local_split(p, dirty)
                if found is None:
                    found = self._general_split(p)
                    if found is None:
                        final.append(p)
                        break
                x, y, part = found
                q = self._split(p, x, y, part)
                stack.append(q)
                dirty.extend((x, y))
        return final


def _kind_of(p: _Piece) -> str:
    nv = len(p.adj)
    m = len(p.edges)
    if nv == 2:
        return BOND
    if nv == m and all(len(nb) == 2 and all(len(l) == 1 for l in nb.values())
                       for nb in p.adj.values()):
        return POLYGON
    return RIGID


def _as_multigraph(table: List[MEdge], eids) -> MultiGraph:
    es = [(min(table[e][0], table[e][1]), max(table[e][0], table[e][1]), table[e][2])
          for e in eids]
    es.sort(key=lambda t: (t[0], t[1], -1 if t[2] is None else t[2]))
    verts = sorted({x for u, v, _ in es for x in (u, v)})
    return MultiGraph(tuple(verts), tuple(es))


def split_components(b: MultiGraph, rng: Optional[random.Random] = None
                     ) -> Tuple[List[MultiGraph], List[MEdge]]:
    """Split to completion; returns (split components, shared edge table)."""
    _check_biconnected(b)
    s = _Splitter(b, rng)
    pieces = s.run()
    return [_as_multigraph(s.table, p.edges) for p in pieces], s.table


def triconnected_components(b: MultiGraph, rng: Optional[random.Random] = None
                            ) -> Tuple[List[TriComponent], List[SeparatingPair]]:
    _check_biconnected(b)
    s = _Splitter(b, rng)
    pieces = s.run()
    table = s.table
    kinds = [_kind_of(p) for p in pieces]
    for p, kd in zip(pieces, kinds):
        if kd == BOND and len(p.edges) != 3:
            raise InvariantViolation("split bond without exactly three edges")
        if kd == RIGID and len(p.adj) < 4:
            raise InvariantViolation("rigid split component with fewer than 4 vertices")

    owner: Dict[int, List[int]] = {}
    for i, p in enumerate(pieces):
        for e in p.edges:
            t = table[e][2]
            if t is not None:
                owner.setdefault(t, []).append(i)
    parent = list(range(len(pieces)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    merged_tags = set()
    for t in sorted(owner):
        i, j = owner[t]
        if kinds[i] == kinds[j] and kinds[i] in (BOND, POLYGON):
            merged_tags.add(t)
            a, b_ = find(i), find(j)
            if a != b_:
                parent[max(a, b_)] = min(a, b_)
    groups: Dict[int, List[int]] = {}
    for i in range(len(pieces)):
        groups.setdefault(find(i), []).append(i)

    comps: List[TriComponent] = []
    for root in sorted(groups):
        eids = [e for i in groups[root] for e in pieces[i].edges
                if table[e][2] not in merged_tags]
        mg = _as_multigraph(table, eids)
        kind = kinds[root]
        tags = mg.virtual_tags()
        comps.append(TriComponent(kind, mg, tags))
    ends = {t: (u, v) for u, v, t in table if t is not None}
    pairs = []
    for t in sorted(set(owner) - merged_tags):
        x, y = ends[t]
        pairs.append(SeparatingPair(min(x, y), max(x, y), t))
    comps.sort(key=lambda c: (c.graph.vertices, c.graph.edges))
    return comps, pairs
