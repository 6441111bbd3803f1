import json
import random
from collections import defaultdict

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distcount.decomposition_tree import (C, S, T, build_decomposition_tree, subtree_graph,
                                          subtree_nodes, tree_center, tree_from_json)
from distcount.errors import InvariantViolation, NotConnectedError
from distcount.families import random_cycle_with_pendants, sp_chain, symmetric_cycle_with_pendants
from distcount.graph_core import Graph, blocks_and_cut_vertices
from distcount.isomorphism import PinnedGraph, canonical_code
from distcount.triconnect import triconnected_components

from conftest import connected_atlas, from_nx


def check_tree(g: Graph):
    t = build_decomposition_tree(g)
    nodes = t.nodes
    # connected and acyclic: one root, parent pointers consistent, everything reachable
    assert [nd.id for nd in nodes if nd.parent is None] == [t.root]
    assert sorted(subtree_nodes(t, t.root)) == list(range(len(nodes)))
    for nd in nodes:
        for c in nd.children:
            assert nodes[c].parent == nd.id
    if g.n > 1:
        bd = blocks_and_cut_vertices(g)
        assert sorted(nd.payload for nd in nodes if nd.kind == C) == sorted(bd.cut_vertices)
        n_t = n_s = 0
        for b in bd.blocks:
            if b.m == 1:
                n_t += 1
                continue
            comps, pairs = triconnected_components(b)
            n_t += len(comps)
            n_s += len({(p.x, p.y) for p in pairs})
        assert sum(nd.kind == T for nd in nodes) == n_t
        assert sum(nd.kind == S for nd in nodes) == n_s
    # tree-decomposition properties of the bags
    bags = {nd.id: set(nd.bag()) for nd in nodes}
    assert set().union(*bags.values()) == set(range(g.n))
    for u, v in g.edges:
        assert any(u in b and v in b for b in bags.values())
    adj = defaultdict(set)
    for nd in nodes:
        for c in nd.children:
            adj[nd.id].add(c)
            adj[c].add(nd.id)
    for v in adj:
        nb = sorted(adj[v])
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                assert bags[nb[i]] & bags[nb[j]] <= bags[v]
    for x in range(g.n):
        holding = {v for v, b in bags.items() if x in b}
        start = next(iter(holding))
        seen, stack = {start}, [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in holding and w not in seen:
                    seen.add(w)
                    stack.append(w)
        assert seen == holding
    # the whole tree reassembles G
    root_graph = subtree_graph(t, t.root)
    assert sorted(root_graph.real_edges()) == sorted(g.edges) and not root_graph.virtual_edges()
    return t


def test_tree_properties_on_atlas():
    for g in connected_atlas(7):
        check_tree(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tree_properties_on_families(seed):
    rng = random.Random(seed)
    check_tree(sp_chain(rng.randint(2, 40), seed))
    check_tree(random_cycle_with_pendants(rng.randint(3, 25), seed))


def _generic_buckets(t):
    buckets = defaultdict(list)
    for v, nd in enumerate(t.nodes):
        if nd.parent is None:
            continue
        pins = t.attach_pins(v)
        key = (nd.kind, t.nodes[nd.parent].kind, len(pins))
        generic = canonical_code(PinnedGraph(subtree_graph(t, v), pins))
        buckets[key].append((t.code(v, pins), generic))
        if len(pins) == 2:
            rev = (pins[1], pins[0])
            buckets[key].append((t.code(v, rev), canonical_code(PinnedGraph(subtree_graph(t, v), rev))))
    return buckets


def _assert_same_partition(pairs):
    fwd, back = {}, {}
    for ours, generic in pairs:
        assert fwd.setdefault(ours, generic) == generic
        assert back.setdefault(generic, ours) == ours


def test_structural_codes_match_generic_canonical_codes():
    graphs = list(connected_atlas(7))
    graphs += [symmetric_cycle_with_pendants(12, p, l) for p in (2, 3, 4) for l in (1, 2)]
    graphs += [sp_chain(30, s) for s in range(15)]
    graphs.append(from_nx(nx.complete_bipartite_graph(2, 5)))
    for g in graphs:
        t = build_decomposition_tree(g)
        for pairs in _generic_buckets(t).values():
            _assert_same_partition(pairs)


def test_tree_center():
    assert tree_center({0: [1], 1: [0, 2], 2: [1]}) == 1
    assert tree_center({"x": []}) == "x"
    with pytest.raises(InvariantViolation):
        tree_center({0: [1], 1: [0]})


def test_small_cases_and_errors():
    t = build_decomposition_tree(Graph.from_edges(1, []))
    assert [(nd.kind, nd.payload) for nd in t.nodes] == [(C, 0)]
    t = build_decomposition_tree(Graph.from_edges(2, [(0, 1)]))
    assert [nd.kind for nd in t.nodes] == [T]
    with pytest.raises(NotConnectedError):
        build_decomposition_tree(Graph.from_edges(3, [(0, 1)]))
    star = build_decomposition_tree(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    assert star.nodes[star.root].kind == C and star.nodes[star.root].payload == 0


def test_json_round_trip():
    for g in [sp_chain(25, 4), symmetric_cycle_with_pendants(9, 3, 2)] + list(connected_atlas(5)):
        t = build_decomposition_tree(g)
        data = json.loads(json.dumps(t.to_json()))
        back = tree_from_json(data, g)
        assert back.root == t.root
        assert [(nd.kind, sorted(nd.bag()), nd.children) for nd in back.nodes] == \
            [(nd.kind, sorted(nd.bag()), nd.children) for nd in t.nodes]
        for v in range(len(t.nodes)):
            assert subtree_graph(back, v) == subtree_graph(t, v)
        for kind_nodes in data["nodes"]:
            if kind_nodes["kind"] == T:
                assert set(kind_nodes["payload"]) >= {"kind", "vertices", "edges"}
