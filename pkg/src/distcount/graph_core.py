"""Graph containers, parsing, connectivity and block decomposition."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import GraphFormatError, NotConnectedError

Edge = Tuple[int, int]
# (u, v, tag): tag is None for a real edge, an int split id for a virtual edge
MEdge = Tuple[int, int, Optional[int]]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset
    names: Optional[Tuple[str, ...]] = None
    adj: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nbrs: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        object.__setattr__(self, "adj", tuple(tuple(sorted(a)) for a in nbrs))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   names: Optional[Sequence[str]] = None) -> "Graph":
        es = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside 0..{n - 1}")
            key = (u, v) if u < v else (v, u)
            if key in es:
                raise ValueError(f"duplicate edge {key}")
            es.add(key)
        return cls(n, frozenset(es), tuple(names) if names is not None else None)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def name_of(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def induced(self, vertices: Sequence[int]) -> Tuple["Graph", List[int]]:
        """Induced subgraph on `vertices` relabelled densely; returns (graph, new->old map)."""
        old = list(vertices)
        index = {v: i for i, v in enumerate(old)}
        es = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        names = [self.name_of(v) for v in old] if self.names else None
        return Graph.from_edges(len(old), es, names), old

    def as_multigraph(self) -> "MultiGraph":
        return MultiGraph(tuple(range(self.n)), tuple((u, v, None) for u, v in self.sorted_edges()))


@dataclass(frozen=True)
class MultiGraph:
    """Multigraph over an explicit vertex set; edges carry a virtual tag or None."""

    vertices: Tuple[int, ...]
    edges: Tuple[MEdge, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def real_edges(self) -> List[Edge]:
        return [(u, v) for u, v, t in self.edges if t is None]

    def virtual_edges(self) -> List[MEdge]:
        return [e for e in self.edges if e[2] is not None]

    def virtual_tags(self) -> frozenset:
        return frozenset(t for _, _, t in self.edges if t is not None)


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: Tuple[MultiGraph, ...]
    cut_vertices: frozenset
    # bipartite tree on ("B", block index) and ("C", vertex) nodes
    block_cut_tree: Dict[Tuple[str, int], Tuple[Tuple[str, int], ...]]


# ---------------------------------------------------------------- parsing

def _graph6_size(data: bytes, pos: int) -> Tuple[int, int]:
    if data[pos] != 126:
        return data[pos] - 63, pos + 1
    if len(data) > pos + 1 and data[pos + 1] == 126:
        chunk = data[pos + 2:pos + 8]
        width, nxt = 6, pos + 8
    else:
        chunk = data[pos + 1:pos + 4]
        width, nxt = 3, pos + 4
    if len(chunk) != width:
        raise GraphFormatError(f"graph6: truncated size field at offset {pos}")
    n = 0
    for c in chunk:
        n = (n << 6) | (c - 63)
    return n, nxt


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii", errors="replace")
    if not data:
        raise GraphFormatError("graph6: empty input at offset 0")
    for i, c in enumerate(data):
        if not 63 <= c <= 126:
            raise GraphFormatError(f"graph6: invalid character {chr(c)!r} at offset {i}")
    n, pos = _graph6_size(data, 0)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise GraphFormatError(
            f"graph6: expected {need} data bytes after offset {pos}, found {len(body)}")
    bits = []
    for c in body:
        v = c - 63
        bits.extend((v >> (5 - b)) & 1 for b in range(6))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    if any(bits[k:]):
        raise GraphFormatError(f"graph6: nonzero padding bits at offset {len(data) - 1}")
    return Graph.from_edges(n, edges, [str(i) for i in range(n)])


def to_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for i in range(0, len(bits), 6):
        v = 0
        for b in bits[i:i + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return bytes(out).decode("ascii")


def parse_edgelist(text: str) -> Graph:
    """Two tokens per line; '#' lines and blank lines are skipped.

    A line holding a single token declares an isolated vertex.
    """
    index: Dict[str, int] = {}
    names: List[str] = []
    edges = []
    seen = set()

    def vid(tok: str) -> int:
        if tok not in index:
            index[tok] = len(names)
            names.append(tok)
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) == 1:
            vid(toks[0])
            continue
        if len(toks) != 2:
            raise GraphFormatError(f"line {lineno}: expected two tokens, got {len(toks)}")
        a, b = toks
        if a == b:
            raise GraphFormatError(f"line {lineno}: self-loop on {a!r}")
        u, v = vid(a), vid(b)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {a} {b}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(len(names), edges, names)


def _looks_like_graph6(text: str) -> bool:
    lines = [l.strip() for l in text.splitlines()
             if l.strip() and not l.strip().startswith("#")]
    if len(lines) != 1:
        return False
    s = lines[0]
    return s.startswith(">>graph6<<") or (len(s.split()) == 1 and all(63 <= ord(c) <= 126 for c in s)
                                          and not s.isdigit())


def parse_graph(text: str, fmt: str = "auto") -> Graph:
    if fmt == "graph6" or (fmt == "auto" and _looks_like_graph6(text)):
        lines = [l.strip() for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
        if len(lines) != 1:
            raise GraphFormatError("graph6: expected exactly one graph line")
        return parse_graph6(lines[0])
    if fmt not in ("auto", "edgelist"):
        raise GraphFormatError(f"unknown format {fmt!r}")
    return parse_edgelist(text)


# ---------------------------------------------------------------- connectivity

def connected_components(g: Graph) -> List[Tuple[Graph, List[int]]]:
    """Components as (subgraph, map from local id to id in g), ordered by smallest vertex."""
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        out.append(g.induced(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def blocks_and_cut_vertices(g: Graph) -> BlockDecomposition:
    """Blocks via iterative DFS with lowpoints and an edge stack."""
    if g.n == 0:
        raise NotConnectedError("empty graph has no block decomposition")
    if not is_connected(g):
        raise NotConnectedError("blocks_and_cut_vertices needs a connected graph")
    n = g.n
    disc = [-1] * n
    low = [0] * n
    blocks: List[List[Edge]] = []
    cuts = set()
    timer = 0
    estack: List[Edge] = []
    disc[0] = low[0] = timer
    timer += 1
    root_children = 0
    # frames: (vertex, parent, neighbor cursor)
    stack = [[0, -1, 0]]
    while stack:
        frame = stack[-1]
        u, parent, i = frame
        if i < len(g.adj[u]):
            frame[2] += 1
            w = g.adj[u][i]
            if disc[w] == -1:
                disc[w] = low[w] = timer
                timer += 1
                estack.append((u, w))
                stack.append([w, u, 0])
                if u == 0:
                    root_children += 1
            elif w != parent and disc[w] < disc[u]:
                estack.append((u, w))
                low[u] = min(low[u], disc[w])
            continue
        stack.pop()
        if parent < 0:
            continue
        low[parent] = min(low[parent], low[u])
        if low[u] >= disc[parent]:
            if parent != 0:
                cuts.add(parent)
            comp = []
            while True:
                e = estack.pop()
                comp.append(e)
                if e == (parent, u):
                    break
            blocks.append(comp)
    if root_children > 1:
        cuts.add(0)

    mblocks = []
    for comp in blocks:
        vs = sorted({x for e in comp for x in e})
        es = sorted((min(a, b), max(a, b)) for a, b in comp)
        mblocks.append(MultiGraph(tuple(vs), tuple((a, b, None) for a, b in es)))
    mblocks.sort(key=lambda b: (b.vertices, b.edges))

    tree: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}
    for c in sorted(cuts):
        tree[("C", c)] = []
    for i, b in enumerate(mblocks):
        tree[("B", i)] = []
        for v in b.vertices:
            if v in cuts:
                tree[("B", i)].append(("C", v))
                tree[("C", v)].append(("B", i))
    return BlockDecomposition(tuple(mblocks), frozenset(cuts),
                              {k: tuple(v) for k, v in tree.items()})
