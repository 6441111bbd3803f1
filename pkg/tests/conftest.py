import random
from functools import lru_cache
from typing import List

import networkx as nx
import pytest

from distcount.graph_core import Graph

# lines printed by test_acceptance.py, echoed again in the terminal summary
ACCEPTANCE_LINES: List[str] = []


def from_nx(h: nx.Graph) -> Graph:
    h = nx.convert_node_labels_to_integers(h)
    return Graph.from_edges(h.number_of_nodes(), h.edges())


@lru_cache(maxsize=None)
def connected_atlas(max_n: int) -> tuple:
    """Every connected graph on 1..max_n vertices (atlas stops at 7), as Graphs."""
    return tuple(from_nx(h) for h in nx.graph_atlas_g()[1:]
                 if h.number_of_nodes() <= max_n and nx.is_connected(h))


def random_connected(n: int, rng: random.Random, p: float = 0.4) -> Graph:
    while True:
        h = nx.gnp_random_graph(n, p, seed=rng.randrange(2 ** 31))
        if nx.is_connected(h):
            return from_nx(h)


@pytest.fixture
def c5() -> Graph:
    return Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
