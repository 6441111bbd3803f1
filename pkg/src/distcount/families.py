"""Seeded generators for the graph families used in benchmarks and tests."""
from __future__ import annotations

import random
from typing import Dict, List, Optional, Tuple

from .graph_core import Graph


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def wheel(n: int) -> Graph:
    """Hub 0 joined to a rim cycle on 1..n-1."""
    if n < 4:
        raise ValueError("a wheel needs at least 4 vertices")
    rim = n - 1
    edges = [(0, i) for i in range(1, n)]
    edges += [(1 + i, 1 + (i + 1) % rim) for i in range(rim)]
    return Graph.from_edges(n, edges)


def cycle_with_pendants(n: int, pendants: Dict[int, int]) -> Graph:
    """Cycle on 0..n-1 with a pendant path of the given length at each listed cycle vertex."""
    edges: List[Tuple[int, int]] = [(i, (i + 1) % n) for i in range(n)]
    nxt = n
    for v in sorted(pendants):
        prev = v
        for _ in range(pendants[v]):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def symmetric_cycle_with_pendants(n: int, period: int, length: int = 1,
                                  mirror: bool = True) -> Graph:
    """Pendants every `period` cycle vertices; with mirror=False a chiral marker breaks reflections."""
    if n % period:
        raise ValueError("period must divide the cycle length")
    pend = {v: length for v in range(0, n, period)}
    if not mirror:
        if period < 3:
            raise ValueError("a chiral marker needs period >= 3")
        pend.update({v + 1: length + 1 for v in range(0, n, period)})
    return cycle_with_pendants(n, pend)


def random_cycle_with_pendants(n: int, seed: Optional[int] = None, density: float = 0.3,
                               max_len: int = 2) -> Graph:
    rng = random.Random(seed)
    pend = {v: rng.randint(1, max_len) for v in range(n) if rng.random() < density}
    return cycle_with_pendants(n, pend)


def sp_chain(n: int, seed: Optional[int] = None) -> Graph:
    """Series-parallel chain: junction vertices joined by bundles of 2-3 internally disjoint paths.

    Stops adding beads once n vertices are reached; the last bead may be a single edge
    or path so that the vertex count is exactly n.
    """
    if n < 2:
        raise ValueError("a chain needs at least 2 vertices")
    rng = random.Random(seed)
    edges: List[Tuple[int, int]] = []
    cur, nxt = 0, 1
    while nxt < n:
        left = n - nxt
        if left < 3:
            # finish with a plain path
            for _ in range(left):
                edges.append((cur, nxt))
                cur = nxt
                nxt += 1
            break
        end = nxt
        nxt += 1
        budget = min(left - 1, rng.randint(2, 6))
        paths = rng.randint(2, 3)
        lengths = [0] * paths
        for _ in range(budget):
            lengths[rng.randrange(paths)] += 1
        lengths.sort()
        if lengths[0] == 0 and lengths[1] == 0:
            lengths[1] = 1
            budget += 1
            if budget > left - 1:
                lengths[-1] -= 1
        for inner in lengths:
            prev = cur
            for _ in range(inner):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
            edges.append((prev, end))
        cur = end
    return Graph.from_edges(n, edges)
