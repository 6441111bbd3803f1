import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distcount import _kernels_py as pure
from distcount import kernels

compiled = pytest.importorskip("distcount._kernels")


@st.composite
def perm_arrays(draw):
    n = draw(st.integers(1, 12))
    rows = draw(st.integers(1, 6))
    perms = [draw(st.permutations(range(n))) for _ in range(rows)]
    return np.array(perms, dtype=np.intp)


@settings(max_examples=200, deadline=None)
@given(perm_arrays(), st.data())
def test_orbits_agree(perms, data):
    rows = data.draw(st.lists(st.integers(0, perms.shape[0] - 1), max_size=4))
    assert np.array_equal(pure.orbit_labels(perms, rows), compiled.orbit_labels(perms, rows))
    assert pure.orbit_count(perms, rows) == compiled.orbit_count(perms, rows)


@settings(max_examples=200, deadline=None)
@given(perm_arrays())
def test_orders_agree(perms):
    assert np.array_equal(pure.perm_orders(perms), compiled.perm_orders(perms))


def test_perm_orders_small():
    perms = np.array([[0, 1, 2, 3, 4], [1, 2, 0, 4, 3], [1, 0, 2, 3, 4]], dtype=np.intp)
    assert list(pure.perm_orders(perms)) == [1, 6, 2]


def _csr(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    indptr = np.zeros(n + 1, dtype=np.intp)
    cols = []
    for v in range(n):
        cols.extend(sorted(adj[v]))
        indptr[v + 1] = len(cols)
    return indptr, np.array(cols, dtype=np.intp)


@settings(max_examples=150, deadline=None)
@given(st.integers(4, 10), st.data())
def test_separating_pair_agree(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    cycle = [(i, (i + 1) % n) for i in range(n)]
    extra = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=10))
    edges = sorted({(min(u, v), max(u, v)) for u, v in cycle + extra})
    indptr, indices = _csr(n, edges)
    order = data.draw(st.permutations(range(n)))
    a = pure.find_separating_pair(indptr, indices, list(order))
    b = compiled.find_separating_pair(indptr, indices, list(order))
    assert a[0] == b[0] and list(a[1]) == list(b[1])


def test_separating_pair_on_cycle_and_k4():
    indptr, indices = _csr(5, [(i, (i + 1) % 5) for i in range(5)])
    x, ys = pure.find_separating_pair(indptr, indices, list(range(5)))
    assert x == 0 and list(ys) == [2, 3]
    indptr, indices = _csr(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert pure.find_separating_pair(indptr, indices, list(range(4)))[0] == -1


def test_selector_prefers_compiled():
    assert kernels.COMPILED is True


def test_env_var_forces_fallback():
    code = "from distcount import kernels; print(kernels.COMPILED)"
    env = dict(os.environ, DIST_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"
