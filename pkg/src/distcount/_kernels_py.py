"""Pure-Python versions of the hot loops; same API as the compiled module."""
from __future__ import annotations

from math import gcd
from typing import List, Sequence, Tuple

import numpy as np

COMPILED = False


def orbit_labels(perms: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    """Orbit representative (smallest point) for every point, under the rows listed."""
    n = perms.shape[1]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in rows:
        p = perms[r].tolist()
        for i in range(n):
            a, b = find(i), find(p[i])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return np.array([find(i) for i in range(n)], dtype=np.intp)


def orbit_count(perms: np.ndarray, rows: Sequence[int]) -> int:
    lab = orbit_labels(perms, rows)
    return int(np.count_nonzero(lab == np.arange(perms.shape[1])))


def perm_orders(perms: np.ndarray) -> np.ndarray:
    out = np.empty(perms.shape[0], dtype=np.intp)
    n = perms.shape[1]
    for r in range(perms.shape[0]):
        p = perms[r].tolist()
        seen = [False] * n
        order = 1
        for s in range(n):
            if seen[s]:
                continue
            length = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            order = order * length // gcd(order, length)
        out[r] = order
    return out


def _articulation_without(indptr, indices, n: int, x: int) -> List[int]:
    start = 0 if x != 0 else 1
    if n - 1 < 3:
        return []
    disc = [-1] * n
    low = [0] * n
    disc[x] = -2
    cuts = []
    is_cut = [False] * n
    t = 0
    disc[start] = low[start] = t
    t += 1
    root_children = 0
    stack = [(start, -1, indptr[start])]
    while stack:
        u, par, i = stack[-1]
        if i < indptr[u + 1]:
            stack[-1] = (u, par, i + 1)
            w = indices[i]
            if w == x:
                continue
            if disc[w] == -1:
                disc[w] = low[w] = t
                t += 1
                stack.append((w, u, indptr[w]))
                if u == start:
                    root_children += 1
            elif w != par:
                if disc[w] < low[u]:
                    low[u] = disc[w]
            continue
        stack.pop()
        if par >= 0:
            if low[u] < low[par]:
                low[par] = low[u]
            if par != start and low[u] >= disc[par] and not is_cut[par]:
                is_cut[par] = True
                cuts.append(par)
    if root_children > 1:
        cuts.append(start)
    return sorted(cuts)


def find_separating_pair(indptr: np.ndarray, indices: np.ndarray, order: Sequence[int]
                         ) -> Tuple[int, List[int]]:
    """First x in `order` for which the graph minus x has articulation points.

    Returns (x, sorted articulation points of G - x) or (-1, []).
    The graph is given in CSR form and must be simple and biconnected.
    """
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    for x in order:
        ys = _articulation_without(ip, ix, n, int(x))
        if ys:
            return int(x), ys
    return -1, []
