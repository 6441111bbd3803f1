"""Counting inequivalent distinguishing labelings bottom-up over the decomposition tree.

Every T node is prepared once: its structure-respecting automorphism group is computed,
classified, and the inclusion-exclusion over that group is expanded into a polynomial in
per-orbit factors. Evaluating at a given number of labels then only multiplies integers.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .decomposition_tree import C, S, T, DecompTree, build_decomposition_tree, t_gadget
from .errors import CapExceeded, InvariantViolation, NotConnectedError
from .graph_core import Graph, connected_components
from .group_analysis import (FULL_PIE, LATTICE, LATTICE_CAP, PIE_CAP, STRUCTURED, GroupProfile,
                             SubgroupLattice, classify_group, subgroup_lattice)
from .isomorphism import DEFAULT_AUT_CAP, PinnedGraph, automorphism_array, canonical_code

log = logging.getLogger(__name__)

PARTITION = "PARTITION"
PARTITION_CAP = 12          # vertices; Bell(12) ~ 4.2 million set partitions
ENGINES = ("auto", "pie", "structured", "lattice")


@dataclass
class CountBundle:
    """Counts for a subtree hanging at a separating pair (x, y)."""

    D_fix_xy: int
    D_edge: int
    D_same: int
    D_diff: int
    B: int
    swap: bool
    aut_fix: int
    aut_edge: int


@dataclass
class NodeCount:
    value: int          # count with the attachment vertices fixed; plain count at the root
    aut: int            # order of the matching stabilizer
    bundle: Optional[CountBundle] = None


def exact_div(a: int, b: int, what: str) -> int:
    if b == 0 or a % b:
        raise InvariantViolation(f"{what}: {a} is not divisible by {b}")
    return a // b


# ---------------------------------------------------------------- symbolic products

class FactorPoly:
    """Integer combination of monomials in named factors; monomial = sorted (name, exp) tuple."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[tuple, int]] = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, factors: Counter) -> "FactorPoly":
        return cls({tuple(sorted(factors.items())): 1})

    def __add__(self, other):
        if isinstance(other, int):
            other = FactorPoly({(): other})
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return FactorPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return FactorPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, s: int):
        return FactorPoly({m: c * s for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = FactorPoly({(): other})
        return isinstance(other, FactorPoly) and self.terms == other.terms

    __hash__ = None

    def evaluate(self, values: Dict[object, int]) -> int:
        total = 0
        for m, c in self.terms.items():
            p = c
            for name, e in m:
                p *= values[name] ** e
            total += p
        return total


Number = Union[int, FactorPoly]
NGeq = Callable[[Sequence[int]], Number]


# ---------------------------------------------------------------- engines

def L_pie_full(order: int, n_geq: NGeq) -> Number:
    """Inclusion-exclusion over all sets of group elements containing the identity."""
    if order > PIE_CAP:
        raise CapExceeded(f"group order {order} for full inclusion-exclusion", PIE_CAP)
    others = list(range(1, order))
    total: Number = 0
    for mask in range(1 << len(others)):
        chosen = [0] + [others[i] for i in range(len(others)) if mask >> i & 1]
        sign = -1 if (len(chosen) - 1) % 2 else 1
        total = total + sign * n_geq(chosen)
    return total


def L_structured(profile: GroupProfile, n_geq: NGeq) -> Number:
    """Inclusion-exclusion over prime-order elements, corrected by single reflections."""
    pstar = profile.pstar
    total: Number = 0
    for r in range(len(pstar) + 1):
        for sub in combinations(pstar, r):
            total = total + (-1) ** r * n_geq([0, *sub])
    for tau in profile.reflections:
        for r in range(len(pstar) + 1):
            for sub in combinations(pstar, r):
                total = total - (-1) ** r * n_geq([tau, *sub])
    return total


def L_mobius(lattice: SubgroupLattice, n_geq: NGeq) -> Number:
    """Möbius inversion from the trivial subgroup over the whole subgroup lattice."""
    total: Number = 0
    for s, mu in zip(lattice.subgroups, lattice.mu):
        if mu:
            total = total + mu * n_geq(SubgroupLattice.elements(s))
    return total


def n_geq_plain(perms: np.ndarray, k: int) -> NGeq:
    """Labelings fixed by every listed element: k to the number of orbits."""
    perms = np.ascontiguousarray(perms, dtype=np.intp)
    return lambda rows: k ** kernels.orbit_count(perms, list(rows))


def partition_histogram(perms: np.ndarray, cap: int = PARTITION_CAP) -> List[int]:
    """hist[b] = set partitions into b blocks that no nontrivial element preserves blockwise."""
    perms = np.ascontiguousarray(perms, dtype=np.intp)
    n = perms.shape[1]
    if n > cap:
        raise CapExceeded(f"set partitions of {n} vertices", cap)
    hist = [0] * (n + 1)
    nontriv = perms[1:]
    blk = np.zeros(n, dtype=np.intp)

    def rec(i: int, nb: int):
        if i == n:
            if nontriv.shape[0] == 0 or not np.any(np.all(blk[nontriv] == blk, axis=1)):
                hist[nb] += 1
            return
        for b in range(nb + 1):
            blk[i] = b
            rec(i + 1, max(nb, b + 1))

    if n == 0:
        return [1]
    rec(0, 0)
    return hist


def falling(k: int, b: int) -> int:
    out = 1
    for i in range(b):
        out *= k - i
    return out


# ---------------------------------------------------------------- T node preparation

@dataclass
class _Variant:
    """One stabilizer flavour of a T node: pins fixed, or the pair fixed setwise."""

    order: int
    engine: str
    poly: Optional[FactorPoly] = None
    hist: Optional[List[int]] = None
    profile: Optional[GroupProfile] = None
    # kept for cross-checking engines against each other
    perms: Optional[np.ndarray] = field(default=None, repr=False)
    n_geq: Optional[NGeq] = field(default=None, repr=False)

    def L(self, values: Dict[object, int], k: int) -> int:
        if self.hist is not None:
            return sum(c * falling(k, b) for b, c in enumerate(self.hist))
        return self.poly.evaluate(values)


@dataclass
class _TPrep:
    node: int
    plain: bool
    c_children: Dict[int, int] = field(default_factory=dict)     # position -> C child
    s_children: List[int] = field(default_factory=list)          # S child per pair index
    variants: Dict[str, _Variant] = field(default_factory=dict)
    swap: bool = False


def _restricted_group(pg: PinnedGraph, h: int, cap: int) -> np.ndarray:
    rows = automorphism_array(pg, cap)[:, :h]
    if len({r.tobytes() for r in np.ascontiguousarray(rows)}) != rows.shape[0]:
        raise InvariantViolation("structure-respecting group does not act faithfully on H")
    return np.ascontiguousarray(rows)


def _token_perms(perms: np.ndarray, pairs: List[Tuple[int, int]]) -> np.ndarray:
    tok = {}
    for i, (a, b) in enumerate(pairs):
        tok[(a, b)] = 2 * i
        tok[(b, a)] = 2 * i + 1
    out = np.empty((perms.shape[0], 2 * len(pairs)), dtype=np.intp)
    for r, p in enumerate(perms):
        for i, (a, b) in enumerate(pairs):
            out[r, 2 * i] = tok[(int(p[a]), int(p[b]))]
            out[r, 2 * i + 1] = tok[(int(p[b]), int(p[a]))]
    return out


def _symbolic_n_geq(perms, tperms, vkeys, s_children) -> NGeq:
    def n_geq(rows):
        rows = list(rows)
        f: Counter = Counter()
        lab = kernels.orbit_labels(perms, rows)
        for i in range(len(lab)):
            if lab[i] == i:
                f[vkeys[i]] += 1
        if s_children:
            tl = kernels.orbit_labels(tperms, rows)
            seen = set()
            for i, s in enumerate(s_children):
                a, b = int(tl[2 * i]), int(tl[2 * i + 1])
                if a in seen:
                    continue
                seen.update((a, b))
                f[("b", s) if a == b else ("f", s)] += 1
        return FactorPoly.monomial(f)
    return n_geq


def _build_variant(perms: np.ndarray, tperms, vkeys, s_children, plain: bool,
                   engine: str) -> _Variant:
    order = perms.shape[0]
    profile = classify_group(perms)
    n_geq = _symbolic_n_geq(perms, tperms, vkeys, s_children)
    case = profile.case
    if engine == "pie":
        case = FULL_PIE
    elif engine == "lattice":
        case = LATTICE
    elif engine == "structured" and case not in STRUCTURED:
        raise ValueError(f"group of order {order} is not cyclic or dihedral-like")
    if case in STRUCTURED:
        var = _Variant(order, case, poly=FactorPoly() + L_structured(profile, n_geq))
    elif case == FULL_PIE and order <= PIE_CAP:
        var = _Variant(order, FULL_PIE, poly=FactorPoly() + L_pie_full(order, n_geq))
    else:
        try:
            lattice = subgroup_lattice(perms, LATTICE_CAP)
            var = _Variant(order, LATTICE, poly=FactorPoly() + L_mobius(lattice, n_geq))
        except CapExceeded:
            if not plain:
                raise
            var = _Variant(order, PARTITION, hist=partition_histogram(perms))
    var.profile, var.perms, var.n_geq = profile, perms, n_geq
    return var


def prepare_t_node(tree: DecompTree, v: int, cap_aut: int = DEFAULT_AUT_CAP,
                   engine: str = "auto") -> _TPrep:
    nd = tree.nodes[v]
    h_verts = nd.payload.graph.vertices
    h = len(h_verts)
    pos = {x: i for i, x in enumerate(h_verts)}
    prep = _TPrep(v, plain=not nd.children)
    pins = tree.attach_pins(v)
    pairs: List[Tuple[int, int]] = []
    for c in nd.children:
        cn = tree.nodes[c]
        if cn.kind == C:
            prep.c_children[pos[cn.payload]] = c
        else:
            x, y = cn.payload
            pairs.append((pos[x], pos[y]))
            prep.s_children.append(c)
    vkeys = [("c", prep.c_children[i]) if i in prep.c_children else ("k",) for i in range(h)]

    flavours = [("fix", pins, ())]
    if len(pins) == 2:
        prep.swap = tree.code(v, pins) == tree.code(v, (pins[1], pins[0]))
        if prep.swap:
            flavours.append(("edge", (), pins))
    for name, p, marks in flavours:
        pg, _ = t_gadget(tree, v, p, marks)
        perms = _restricted_group(pg, h, cap_aut)
        tperms = _token_perms(perms, pairs) if pairs else None
        prep.variants[name] = _build_variant(perms, tperms, vkeys, prep.s_children,
                                             prep.plain, engine)
    if prep.swap and prep.variants["edge"].order != 2 * prep.variants["fix"].order:
        raise InvariantViolation(f"T node {v}: setwise stabilizer is not twice the pointwise one")
    return prep


# ---------------------------------------------------------------- node counts

def _group_by_code(tree: DecompTree, kids: Sequence[int], pins_of) -> List[List[int]]:
    classes: Dict[int, List[int]] = {}
    for c in kids:
        classes.setdefault(tree.code(c, pins_of(c)), []).append(c)
    return [classes[key] for key in sorted(classes)]


def count_c_vertex(tree: DecompTree, v: int, k: int, done: Dict[int, NodeCount]) -> NodeCount:
    value, aut = k, 1
    for cls in _group_by_code(tree, tree.nodes[v].children, tree.attach_pins):
        child = done[cls[0]]
        m = len(cls)
        value *= comb(exact_div(child.value, k, "C child count by k"), m)
        aut *= factorial(m) * child.aut ** m
    return NodeCount(value, aut)


def count_s_vertex(tree: DecompTree, v: int, k: int, done: Dict[int, NodeCount]) -> NodeCount:
    x, y = tree.nodes[v].payload
    cx = cy = 1
    aut_c = 1
    tkids = []
    for c in tree.nodes[v].children:
        cn = tree.nodes[c]
        if cn.kind == C:
            val = exact_div(done[c].value, k, "C child count by k")
            if cn.payload == x:
                cx = val
            else:
                cy = val
            aut_c *= done[c].aut
        else:
            tkids.append(c)
    classes = _group_by_code(tree, tkids, lambda c: (x, y))
    k2 = k * k
    d_fix = k2 * cx * cy
    aut_fix = aut_c
    inner = []
    for cls in classes:
        b = done[cls[0]].bundle
        m = len(cls)
        n_i = exact_div(b.D_fix_xy, k2, "pair-fixed count by k^2")
        inner.append(n_i)
        d_fix *= comb(n_i, m)
        aut_fix *= factorial(m) * b.aut_fix ** m
    swap = tree.code(v, (x, y)) == tree.code(v, (y, x))
    if swap:
        if cx != cy:
            raise InvariantViolation(f"S node {v}: swap with different cut-vertex subtrees")
        fwd = {tree.code(cls[0], (x, y)): i for i, cls in enumerate(classes)}
        b_total = k * cx
        done_pairs = set()
        for i, cls in enumerate(classes):
            rev = fwd.get(tree.code(cls[0], (y, x)))
            if rev is None or len(classes[rev]) != len(cls):
                raise InvariantViolation(f"S node {v}: reversal does not permute child classes")
            m = len(cls)
            b = done[cls[0]].bundle
            if rev == i:
                same = exact_div(b.D_same, k, "same-label count by k")
                fixed = exact_div(b.B, k, "swap-fixed count by k")
                b_total *= sum(comb(same, l) * comb(fixed, m - 2 * l) for l in range(m // 2 + 1))
            elif (rev, i) not in done_pairs:
                done_pairs.add((i, rev))
                b_total *= comb(inner[i], m)
        d_edge = exact_div(d_fix - b_total, 2, "edge count")
        d_diff = exact_div((k - 1) * d_fix, 2 * k, "different-label count")
        bundle = CountBundle(d_fix, d_edge, d_edge - d_diff, d_diff, b_total, True,
                             aut_fix, 2 * aut_fix)
    else:
        d_diff = exact_div((k - 1) * d_fix, k, "different-label count")
        bundle = CountBundle(d_fix, d_fix, d_fix - d_diff, d_diff, d_fix, False, aut_fix, aut_fix)
    if tree.nodes[v].parent is None:
        return NodeCount(bundle.D_edge, bundle.aut_edge, bundle)
    return NodeCount(d_fix, aut_fix, bundle)


def count_t_vertex(tree: DecompTree, prep: _TPrep, k: int, done: Dict[int, NodeCount]) -> NodeCount:
    values: Dict[object, int] = {("k",): k}
    aut_children = 1
    for c in prep.c_children.values():
        values[("c", c)] = done[c].value
        aut_children *= done[c].aut
    k2 = k * k
    for s in prep.s_children:
        b = done[s].bundle
        values[("f", s)] = exact_div(b.D_fix_xy, k2, "pair-fixed count by k^2")
        values[("b", s)] = exact_div(b.B, k, "swap-fixed count by k")
        aut_children *= b.aut_fix
    fix = prep.variants["fix"]
    d_fix = exact_div(fix.L(values, k), fix.order, f"T node {prep.node} labelings by group order")
    aut_fix = fix.order * aut_children
    pins = tree.attach_pins(prep.node)
    if len(pins) < 2:
        return NodeCount(d_fix, aut_fix)
    if prep.swap:
        edge = prep.variants["edge"]
        d_edge = exact_div(edge.L(values, k), edge.order, f"T node {prep.node} setwise count")
        b_val = d_fix - 2 * d_edge
        d_diff = exact_div((k - 1) * d_fix, 2 * k, "different-label count")
        bundle = CountBundle(d_fix, d_edge, d_edge - d_diff, d_diff, b_val, True,
                             aut_fix, edge.order * aut_children)
    else:
        d_diff = exact_div((k - 1) * d_fix, k, "different-label count")
        bundle = CountBundle(d_fix, d_fix, d_fix - d_diff, d_diff, d_fix, False, aut_fix, aut_fix)
    return NodeCount(d_fix, aut_fix, bundle)


# ---------------------------------------------------------------- pipeline

@dataclass
class DistResult:
    L: int
    D: int
    aut: int


class PreparedGraph:
    """A connected graph with its tree and T-node groups prepared; count(k) is cheap."""

    def __init__(self, g: Graph, cap_aut: int = DEFAULT_AUT_CAP, jobs: int = 1,
                 engine: str = "auto", tree: Optional[DecompTree] = None):
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}")
        self.graph = g
        self.jobs = max(1, jobs)
        self.tree = tree if tree is not None else build_decomposition_tree(g)
        self.levels = self._levels()
        t_nodes = [v for v in range(len(self.tree.nodes)) if self.tree.nodes[v].kind == T]
        work = lambda v: prepare_t_node(self.tree, v, cap_aut, engine)
        self.t_prep: Dict[int, _TPrep] = dict(zip(t_nodes, self._map(work, t_nodes)))
        log.debug("prepared %d tree nodes, engines %s", len(self.tree.nodes),
                  dict(Counter(p.variants["fix"].engine for p in self.t_prep.values())))

    def _levels(self) -> List[List[int]]:
        depth = {self.tree.root: 0}
        order = [self.tree.root]
        for v in order:
            for c in self.tree.nodes[v].children:
                depth[c] = depth[v] + 1
                order.append(c)
        levels: List[List[int]] = [[] for _ in range(max(depth.values()) + 1)]
        for v in order:
            levels[depth[v]].append(v)
        return levels[::-1]

    def _map(self, fn, items):
        if self.jobs == 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(self.jobs) as pool:
            return list(pool.map(fn, items))

    def node_counts(self, k: int) -> Dict[int, NodeCount]:
        if k < 1:
            raise ValueError("node counts need k >= 1")
        done: Dict[int, NodeCount] = {}

        def one(v):
            kind = self.tree.nodes[v].kind
            if kind == C:
                return count_c_vertex(self.tree, v, k, done)
            if kind == S:
                return count_s_vertex(self.tree, v, k, done)
            return count_t_vertex(self.tree, self.t_prep[v], k, done)

        for level in self.levels:
            for v, res in zip(level, self._map(one, level)):
                done[v] = res
        return done

    def aut_order(self) -> int:
        return self.count(1).aut

    def count(self, k: int) -> DistResult:
        if k < 0:
            raise ValueError("k must be non-negative")
        if k == 0:
            return DistResult(0, 0, self.count(1).aut)
        root = self.node_counts(k)[self.tree.root]
        return DistResult(root.value * root.aut, root.value, root.aut)


def _component_classes(g: Graph) -> List[Tuple[Graph, int]]:
    """Isomorphism classes of components with multiplicities.

    Components are bucketed by size and degree sequence first so that canonical
    forms are only computed when two components could be isomorphic.
    """
    buckets: Dict[tuple, List[Graph]] = {}
    for comp, _ in connected_components(g):
        inv = (comp.n, comp.m, tuple(sorted(comp.degree(v) for v in range(comp.n))))
        buckets.setdefault(inv, []).append(comp)
    out: List[Tuple[Graph, int]] = []
    for inv in sorted(buckets):
        comps = buckets[inv]
        if len(comps) == 1:
            out.append((comps[0], 1))
            continue
        classes: Dict[bytes, List] = {}
        for comp in comps:
            key = canonical_code(PinnedGraph.of(comp))
            classes.setdefault(key, [comp, 0])[1] += 1
        out.extend((c, m) for c, m in (classes[key] for key in sorted(classes)))
    return out


def count_disconnected(parts: Sequence[Tuple[PreparedGraph, int]], k: int) -> DistResult:
    d, aut = 1, 1
    for prep, m in parts:
        r = prep.count(k)
        d *= comb(r.D, m)
        aut *= factorial(m) * r.aut ** m
    return DistResult(d * aut, d, aut)


class DistinguishingCounter:
    """Counting front end for any graph: components are prepared once and reused across k."""

    def __init__(self, g: Graph, cap_aut: int = DEFAULT_AUT_CAP, jobs: int = 1,
                 engine: str = "auto"):
        self.graph = g
        self.parts = [(PreparedGraph(comp, cap_aut, jobs, engine), m)
                      for comp, m in _component_classes(g)] if g.n else []

    def count(self, k: int) -> DistResult:
        if k < 0:
            raise ValueError("k must be non-negative")
        if not self.parts:
            return DistResult(1, 1, 1)
        return count_disconnected(self.parts, k)

    def distinguishing_number(self) -> int:
        """Least k with a distinguishing k-labeling; each component class needs D >= its multiplicity."""
        if not self.parts:
            return 0
        best = 1
        for prep, m in self.parts:
            ok = lambda k: prep.count(k).D >= m
            hi = 1
            while not ok(hi):
                hi *= 2
            lo = hi // 2 + 1 if hi > 1 else 1
            while lo < hi:
                mid = (lo + hi) // 2
                if ok(mid):
                    hi = mid
                else:
                    lo = mid + 1
            best = max(best, hi)
        return best

    def polynomial(self) -> List[Fraction]:
        """Coefficients c_0..c_n of D(G, k) as a polynomial in k; connected graphs only."""
        if len(self.parts) != 1 or self.parts[0][1] != 1:
            raise NotConnectedError("the distinguishing polynomial needs a connected graph")
        n = self.graph.n
        xs = list(range(n + 1))
        ys = [Fraction(self.count(x).D) for x in xs]
        # Newton divided differences, then expand to the monomial basis
        coef = ys[:]
        for j in range(1, n + 1):
            for i in range(n, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
        poly = [Fraction(0)] * (n + 1)
        for i in range(n, -1, -1):
            # poly = poly * (x - xs[i]) + coef[i]
            shifted = [Fraction(0)] + poly[:-1]
            poly = [shifted[j] - xs[i] * poly[j] for j in range(n + 1)]
            poly[0] += coef[i]
        return poly


def find_dist(g: Graph, k: int, cap_aut: int = DEFAULT_AUT_CAP, jobs: int = 1,
              engine: str = "auto") -> DistResult:
    """L, D and |Aut| for k labels."""
    return DistinguishingCounter(g, cap_aut, jobs, engine).count(k)


def distinguishing_number(g: Graph, cap_aut: int = DEFAULT_AUT_CAP, jobs: int = 1) -> int:
    return DistinguishingCounter(g, cap_aut, jobs).distinguishing_number()


def distinguishing_polynomial(g: Graph, cap_aut: int = DEFAULT_AUT_CAP, jobs: int = 1) -> List[Fraction]:
    return DistinguishingCounter(g, cap_aut, jobs).polynomial()


def evaluate_polynomial(coeffs: Sequence[Fraction], k: int) -> Fraction:
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * k + c
    return total
