"""The rooted tree over cut vertices (C), separating pairs (S) and triconnected components (T)."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .errors import InvariantViolation, NotConnectedError
from .graph_core import Graph, MultiGraph, blocks_and_cut_vertices, is_connected
from .isomorphism import PinnedGraph, canonical_code
from .triconnect import POLYGON, TriComponent, triconnected_components

C, S, T = "C", "S", "T"


@dataclass
class DecompNode:
    id: int
    kind: str
    payload: object          # int (C) | (x, y) with x < y (S) | TriComponent (T)
    parent: Optional[int] = None
    children: List[int] = field(default_factory=list)
    block: Optional[int] = None

    def bag(self) -> Tuple[int, ...]:
        if self.kind == C:
            return (self.payload,)
        if self.kind == S:
            return tuple(self.payload)
        return self.payload.graph.vertices


@dataclass
class DecompTree:
    nodes: List[DecompNode]
    root: int
    source: Graph
    # structural codes: C node -> code, S/T node -> {orientation pins: code}
    codes: Dict[Tuple[int, Tuple[int, ...]], int] = field(default_factory=dict)
    _intern: Dict[Hashable, int] = field(default_factory=dict, repr=False)

    def node(self, i: int) -> DecompNode:
        return self.nodes[i]

    def depth_order(self) -> List[int]:
        """Node ids ordered by non-increasing depth (children before parents)."""
        depth = {self.root: 0}
        order = [self.root]
        for v in order:
            for c in self.nodes[v].children:
                depth[c] = depth[v] + 1
                order.append(c)
        return sorted(order, key=lambda v: -depth[v])

    def attach_pins(self, v: int) -> Tuple[int, ...]:
        """The vertices a node is fixed at by its parent: (), (a,) or (x, y)."""
        node = self.nodes[v]
        if node.parent is None:
            return ()
        par = self.nodes[node.parent]
        if par.kind == C:
            a = par.payload
            if node.kind == S:
                x, y = node.payload
                return (a, y if x == a else x)
            return (a,)
        if par.kind == S:
            return (node.payload,) if node.kind == C else tuple(par.payload)
        # C or S child of a T node
        return (node.payload,) if node.kind == C else tuple(node.payload)

    def code(self, v: int, pins: Sequence[int]) -> int:
        return self.codes[(v, tuple(pins))]

    def intern(self, key: Hashable) -> int:
        if key not in self._intern:
            self._intern[key] = len(self._intern)
        return self._intern[key]

    def to_json(self) -> dict:
        out = []
        for nd in self.nodes:
            if nd.kind == C:
                payload = {"vertex": nd.payload}
            elif nd.kind == S:
                payload = {"pair": list(nd.payload), "block": nd.block}
            else:
                payload = dict(nd.payload.to_json(), block=nd.block)
            out.append({"id": nd.id, "kind": nd.kind, "payload": payload,
                        "children": list(nd.children)})
        names = [self.source.name_of(v) for v in range(self.source.n)]
        return {"root": self.root, "nodes": out, "vertex_names": names}


def tree_from_json(data: dict, g: Graph) -> DecompTree:
    """Rebuild a tree serialized by DecompTree.to_json over the same graph."""
    nodes: List[DecompNode] = []
    for i, item in enumerate(data["nodes"]):
        if item["id"] != i:
            raise ValueError("node ids must be 0..N-1 in order")
        p = item["payload"]
        if item["kind"] == C:
            nd = DecompNode(i, C, int(p["vertex"]))
        elif item["kind"] == S:
            x, y = p["pair"]
            nd = DecompNode(i, S, (int(x), int(y)), block=p.get("block"))
        elif item["kind"] == T:
            edges = tuple((int(e["u"]), int(e["v"]),
                           int(e["virtual_id"]) if "virtual_id" in e else None) for e in p["edges"])
            mg = MultiGraph(tuple(int(v) for v in p["vertices"]), edges)
            nd = DecompNode(i, T, TriComponent(p["kind"], mg, mg.virtual_tags()), block=p.get("block"))
        else:
            raise ValueError(f"unknown node kind {item['kind']!r}")
        nd.children = [int(c) for c in item["children"]]
        nodes.append(nd)
    for nd in nodes:
        for c in nd.children:
            nodes[c].parent = nd.id
    tree = DecompTree(nodes, int(data["root"]), g)
    _compute_codes(tree)
    return tree


def tree_center(adj: Mapping[Hashable, Sequence[Hashable]]) -> Hashable:
    """Unique center of a tree given as adjacency; two centers is an invariant violation."""
    nodes = list(adj)
    if not nodes:
        raise ValueError("empty tree")
    if len(nodes) == 1:
        return nodes[0]
    deg = {v: len(adj[v]) for v in nodes}
    layer = [v for v in nodes if deg[v] <= 1]
    remaining = len(nodes)
    removed = set()
    while remaining > 2:
        nxt = []
        for v in layer:
            removed.add(v)
            remaining -= 1
            for w in adj[v]:
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    left = [v for v in nodes if v not in removed]
    if len(left) != 1:
        raise InvariantViolation(f"tree has two centers {left[0]!r} and {left[1]!r}")
    return left[0]


def _block_tree(block: MultiGraph, rng: Optional[random.Random]):
    """Component tree of one block: (components, pair list, adjacency over ('t',i)/('s',pair))."""
    if block.m == 1:
        comps = [TriComponent(POLYGON, block, frozenset())]
        return comps, [], {("t", 0): []}
    comps, _ = triconnected_components(block, rng)
    adj: Dict[Tuple, List[Tuple]] = {("t", i): [] for i in range(len(comps))}
    pairs = []
    for i, comp in enumerate(comps):
        seen = set()
        for u, v, t in comp.graph.edges:
            if t is None:
                continue
            p = (min(u, v), max(u, v))
            if p in seen:
                continue
            seen.add(p)
            if ("s", p) not in adj:
                adj[("s", p)] = []
                pairs.append(p)
            adj[("s", p)].append(("t", i))
            adj[("t", i)].append(("s", p))
    return comps, sorted(pairs), adj


def _contains(key: Tuple, comps: List[TriComponent], a: int) -> bool:
    if key[0] == "t":
        return a in comps[key[1]].graph.vertices
    return a in key[1]


def _attachment(adj, comps, a: int):
    sub = {k: [w for w in nb if _contains(w, comps, a)] for k, nb in adj.items()
           if _contains(k, comps, a)}
    return tree_center(sub)


def build_decomposition_tree(g: Graph, rng: Optional[random.Random] = None) -> DecompTree:
    if g.n == 0 or not is_connected(g):
        raise NotConnectedError("build_decomposition_tree needs a connected nonempty graph")
    if g.n == 1:
        tree = DecompTree([DecompNode(0, C, 0)], 0, g)
        _compute_codes(tree)
        return tree
    bd = blocks_and_cut_vertices(g)
    block_data = [_block_tree(b, rng) for b in bd.blocks]

    nodes: List[DecompNode] = []
    local: Dict[Tuple[int, Tuple], int] = {}
    for bi, (comps, _, adj) in enumerate(block_data):
        for key in adj:
            nid = len(nodes)
            if key[0] == "t":
                nodes.append(DecompNode(nid, T, comps[key[1]], block=bi))
            else:
                nodes.append(DecompNode(nid, S, key[1], block=bi))
            local[(bi, key)] = nid
    cnode: Dict[int, int] = {}
    for a in sorted(bd.cut_vertices):
        cnode[a] = len(nodes)
        nodes.append(DecompNode(len(nodes), C, a))

    def link(child: int, parent: int):
        nodes[child].parent = parent
        nodes[parent].children.append(child)

    def root_block(bi: int, at_key) -> int:
        comps, _, adj = block_data[bi]
        r = local[(bi, at_key)]
        seen = {at_key}
        dq = deque([at_key])
        while dq:
            k = dq.popleft()
            for w in adj[k]:
                if w not in seen:
                    seen.add(w)
                    link(local[(bi, w)], local[(bi, k)])
                    dq.append(w)
        return r

    center = tree_center(bd.block_cut_tree)
    bct = bd.block_cut_tree
    if center[0] == "C":
        root = cnode[center[1]]
        queue = deque([(center, None)])
    else:
        comps, _, adj = block_data[center[1]]
        root = root_block(center[1], tree_center(adj))
        queue = deque([(center, None)])
    visited = {center}
    while queue:
        item, _ = queue.popleft()
        for nb in bct[item]:
            if nb in visited:
                continue
            visited.add(nb)
            if item[0] == "C":
                a, bi = item[1], nb[1]
                comps, _, adj = block_data[bi]
                r = root_block(bi, _attachment(adj, comps, a))
                link(r, cnode[a])
            else:
                bi, a = item[1], nb[1]
                comps, _, adj = block_data[bi]
                link(cnode[a], local[(bi, _attachment(adj, comps, a))])
            queue.append((nb, item))

    tree = DecompTree(nodes, root, g)
    _compute_codes(tree)
    for nd in nodes:
        nd.children.sort(key=lambda c: _sort_key(tree, c))
    return tree


def _sort_key(tree: DecompTree, c: int):
    nd = tree.nodes[c]
    pins = tree.attach_pins(c)
    code = tree.codes.get((c, pins), -1)
    return (code, nd.kind, sorted(nd.bag()))


# ---------------------------------------------------------------- structural codes

def t_gadget(tree: DecompTree, v: int, pins: Sequence[int] = (), edge_marks: Sequence[int] = ()
             ) -> Tuple[PinnedGraph, Dict[Tuple[int, int], int]]:
    """Colored graph whose automorphisms are the structure-respecting automorphisms of H.

    H's vertices keep their ids; each child separating pair gets a small gadget that
    records the isomorphism type of the subgraph hanging there, oriented when that
    subgraph is not symmetric in its two ends. Returns the pinned graph and a map from
    child pair (x, y) with x < y to the child S node.
    """
    nd = tree.nodes[v]
    comp: TriComponent = nd.payload
    parent_pair = None
    if nd.parent is not None and tree.nodes[nd.parent].kind == S:
        parent_pair = tree.nodes[nd.parent].payload
    cchild: Dict[int, int] = {}
    schild: Dict[Tuple[int, int], int] = {}
    for c in nd.children:
        cn = tree.nodes[c]
        if cn.kind == C:
            cchild[cn.payload] = c
        else:
            schild[cn.payload] = c
    marks = set(edge_marks)
    colors = {}
    for x in comp.graph.vertices:
        cc = tree.code(cchild[x], (x,)) if x in cchild else -1
        colors[x] = (0, cc, 1 if x in marks else 0)
    edges = []
    for u, w, t in comp.graph.edges:
        if t is None:
            edges.append((u, w, None))
    verts = list(comp.graph.vertices)
    nxt = tree.source.n
    seen = set()
    for u, w, t in comp.graph.edges:
        if t is None:
            continue
        p = (min(u, w), max(u, w))
        if p == parent_pair or p in seen:
            continue
        seen.add(p)
        s = schild[p]
        fwd, rev = tree.code(s, p), tree.code(s, (p[1], p[0]))
        if fwd == rev:
            colors[nxt] = (1, fwd, 0)
            verts.append(nxt)
            edges += [(p[0], nxt, None), (p[1], nxt, None)]
            nxt += 1
        else:
            head, tail = (p[0], p[1]) if fwd < rev else (p[1], p[0])
            key = min(fwd, rev)
            colors[nxt], colors[nxt + 1] = (2, key, 0), (3, key, 0)
            verts += [nxt, nxt + 1]
            edges += [(head, nxt, None), (tail, nxt + 1, None), (nxt, nxt + 1, None)]
            nxt += 2
    mg = MultiGraph(tuple(verts), tuple(edges))
    return PinnedGraph(mg, tuple(pins), colors), schild


def _compute_codes(tree: DecompTree):
    for v in tree.depth_order():
        nd = tree.nodes[v]
        pins = tree.attach_pins(v)
        if nd.kind == C:
            a = nd.payload
            kids = sorted(tree.code(c, tree.attach_pins(c)) for c in nd.children)
            tree.codes[(v, (a,))] = tree.intern(("C", tuple(kids)))
        elif nd.kind == S:
            x, y = nd.payload
            cx = cy = -1
            tcodes = {(x, y): [], (y, x): []}
            for c in nd.children:
                cn = tree.nodes[c]
                if cn.kind == C:
                    if cn.payload == x:
                        cx = tree.code(c, (x,))
                    else:
                        cy = tree.code(c, (y,))
                else:
                    for o in tcodes:
                        tcodes[o].append(tree.code(c, o))
            tree.codes[(v, (x, y))] = tree.intern(("S", cx, cy, tuple(sorted(tcodes[(x, y)]))))
            tree.codes[(v, (y, x))] = tree.intern(("S", cy, cx, tuple(sorted(tcodes[(y, x)]))))
        else:
            if not pins:
                continue
            orientations = [pins] if len(pins) == 1 else [pins, (pins[1], pins[0])]
            for o in orientations:
                pg, _ = t_gadget(tree, v, o)
                tree.codes[(v, tuple(o))] = tree.intern(("T", canonical_code(pg)))


# ---------------------------------------------------------------- subtree graphs

def subtree_nodes(tree: DecompTree, v: int) -> List[int]:
    out = [v]
    for u in out:
        out.extend(tree.nodes[u].children)
    return out


def subtree_graph(tree: DecompTree, v: int) -> MultiGraph:
    """G(T_v): merged components of the subtree, parallel copies of a pair collapsed.

    Virtual edges whose partner lies outside the subtree survive as virtual edges.
    """
    verts = set()
    real = set()
    tag_count: Dict[Tuple[int, int], int] = {}
    tag_ends: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for u in subtree_nodes(tree, v):
        nd = tree.nodes[u]
        verts.update(nd.bag())
        if nd.kind != T:
            continue
        for a, b, t in nd.payload.graph.edges:
            p = (min(a, b), max(a, b))
            if t is None:
                real.add(p)
            else:
                key = (nd.block, t)
                tag_count[key] = tag_count.get(key, 0) + 1
                tag_ends[key] = p
    virtual = {tag_ends[k] for k, c in tag_count.items() if c == 1} - real
    edges = [(a, b, None) for a, b in sorted(real)] + [(a, b, -1) for a, b in sorted(virtual)]
    return MultiGraph(tuple(sorted(verts)), tuple(edges))
