# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in _kernels_py."""
import numpy as np
cimport numpy as cnp

COMPILED = True


cdef inline Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def orbit_labels(const Py_ssize_t[:, ::1] perms, rows):
    cdef Py_ssize_t n = perms.shape[1]
    cdef cnp.ndarray[Py_ssize_t, ndim=1] out = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t[::1] parent = out
    cdef Py_ssize_t r, i, a, b
    for r in rows:
        for i in range(n):
            a = _find(parent, i)
            b = _find(parent, perms[r, i])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    for i in range(n):
        parent[i] = _find(parent, i)
    return out


def orbit_count(const Py_ssize_t[:, ::1] perms, rows):
    lab = orbit_labels(perms, rows)
    cdef Py_ssize_t[::1] l = lab
    cdef Py_ssize_t i, c = 0
    for i in range(l.shape[0]):
        if l[i] == i:
            c += 1
    return c


cdef inline Py_ssize_t _gcd(Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    while b:
        a, b = b, a % b
    return a


def perm_orders(const Py_ssize_t[:, ::1] perms):
    cdef Py_ssize_t m = perms.shape[0], n = perms.shape[1]
    cdef cnp.ndarray[Py_ssize_t, ndim=1] out = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] seen = seen_arr
    cdef Py_ssize_t r, s, j, length, order
    for r in range(m):
        seen[:] = 0
        order = 1
        for s in range(n):
            if seen[s]:
                continue
            length = 0
            j = s
            while not seen[j]:
                seen[j] = 1
                j = perms[r, j]
                length += 1
            order = order // _gcd(order, length) * length
        out[r] = order
    return out


cdef list _articulation_without(const Py_ssize_t[::1] indptr, const Py_ssize_t[::1] indices,
                                Py_ssize_t n, Py_ssize_t x,
                                Py_ssize_t[::1] disc, Py_ssize_t[::1] low,
                                Py_ssize_t[::1] su, Py_ssize_t[::1] sp, Py_ssize_t[::1] si,
                                cnp.uint8_t[::1] is_cut):
    cdef Py_ssize_t start = 0 if x != 0 else 1
    cdef Py_ssize_t i, t = 0, top = 0, u, par, w, root_children = 0
    cdef list cuts = []
    if n - 1 < 3:
        return cuts
    for i in range(n):
        disc[i] = -1
        is_cut[i] = 0
    disc[x] = -2
    disc[start] = t
    low[start] = t
    t += 1
    su[0] = start
    sp[0] = -1
    si[0] = indptr[start]
    top = 1
    while top > 0:
        u = su[top - 1]
        par = sp[top - 1]
        i = si[top - 1]
        if i < indptr[u + 1]:
            si[top - 1] = i + 1
            w = indices[i]
            if w == x:
                continue
            if disc[w] == -1:
                disc[w] = t
                low[w] = t
                t += 1
                su[top] = w
                sp[top] = u
                si[top] = indptr[w]
                top += 1
                if u == start:
                    root_children += 1
            elif w != par:
                if disc[w] < low[u]:
                    low[u] = disc[w]
            continue
        top -= 1
        if par >= 0:
            if low[u] < low[par]:
                low[par] = low[u]
            if par != start and low[u] >= disc[par] and not is_cut[par]:
                is_cut[par] = 1
                cuts.append(par)
    if root_children > 1:
        cuts.append(start)
    cuts.sort()
    return cuts


def find_separating_pair(const Py_ssize_t[::1] indptr, const Py_ssize_t[::1] indices, order):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    disc = np.empty(n, dtype=np.intp)
    low = np.empty(n, dtype=np.intp)
    su = np.empty(n, dtype=np.intp)
    sp = np.empty(n, dtype=np.intp)
    si = np.empty(n, dtype=np.intp)
    is_cut = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t x
    for xo in order:
        x = xo
        ys = _articulation_without(indptr, indices, n, x, disc, low, su, sp, si, is_cut)
        if ys:
            return int(x), ys
    return -1, []
