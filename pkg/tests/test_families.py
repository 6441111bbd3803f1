import pytest

from distcount.families import (cycle, cycle_with_pendants, path, random_cycle_with_pendants,
                                sp_chain, symmetric_cycle_with_pendants, wheel)
from distcount.graph_core import connected_components
from distcount.isomorphism import PinnedGraph, automorphism_array


def aut(g):
    return automorphism_array(PinnedGraph.of(g)).shape[0]


def test_shapes():
    assert (cycle(7).n, cycle(7).m) == (7, 7)
    assert (path(4).n, path(4).m) == (4, 3)
    w = wheel(8)
    assert (w.n, w.m, w.degree(0)) == (8, 14, 7)
    with pytest.raises(ValueError):
        wheel(3)
    g = cycle_with_pendants(5, {0: 2, 3: 1})
    assert (g.n, g.m) == (8, 8)


def test_symmetric_pendants():
    assert aut(symmetric_cycle_with_pendants(12, 3)) == 8
    assert aut(symmetric_cycle_with_pendants(12, 3, mirror=False)) == 4
    with pytest.raises(ValueError):
        symmetric_cycle_with_pendants(10, 3)
    with pytest.raises(ValueError):
        symmetric_cycle_with_pendants(10, 2, mirror=False)


@pytest.mark.parametrize("n", [2, 3, 7, 50, 333])
def test_sp_chain_size_and_connectivity(n):
    for seed in range(5):
        g = sp_chain(n, seed)
        assert g.n == n
        assert len(connected_components(g)) == 1
        assert sp_chain(n, seed) == g


def test_random_pendants_are_reproducible():
    assert random_cycle_with_pendants(30, 4) == random_cycle_with_pendants(30, 4)
    assert random_cycle_with_pendants(30, 4).n >= 30
