"""Recognizing small permutation groups and their subgroup lattices."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import CapExceeded, InvariantViolation

CYCLIC = "CYCLIC"
DIHEDRAL = "DIHEDRAL"
CYCLIC_X_Z2 = "CYCLIC_X_Z2"
DIHEDRAL_X_Z2 = "DIHEDRAL_X_Z2"
FULL_PIE = "FULL_PIE"
LATTICE = "LATTICE"

STRUCTURED = (CYCLIC, DIHEDRAL, CYCLIC_X_Z2, DIHEDRAL_X_Z2)
PIE_CAP = 16
LATTICE_CAP = 360
SUBGROUP_COUNT_CAP = 5000


def prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class PermGroup:
    """Rows of a permutation array with lookup and composition by index."""

    def __init__(self, perms: np.ndarray):
        self.perms = np.ascontiguousarray(perms, dtype=np.intp)
        self.order = self.perms.shape[0]
        self.degree = self.perms.shape[1]
        self._index: Dict[bytes, int] = {r.tobytes(): i for i, r in enumerate(self.perms)}
        if len(self._index) != self.order:
            raise ValueError("duplicate permutations in group")

    def index(self, perm: np.ndarray) -> int:
        return self._index[np.ascontiguousarray(perm, dtype=np.intp).tobytes()]

    def mul(self, a: int, b: int) -> int:
        """Index of a∘b (apply b first)."""
        return self.index(self.perms[a][self.perms[b]])

    def inv(self, a: int) -> int:
        p = self.perms[a]
        q = np.empty_like(p)
        q[p] = np.arange(self.degree)
        return self.index(q)

    def power(self, a: int, e: int) -> int:
        res = np.arange(self.degree, dtype=np.intp)
        base = self.perms[a]
        while e:
            if e & 1:
                res = base[res]
            base = base[base]
            e >>= 1
        return self.index(res)

    def cyclic(self, a: int) -> List[int]:
        out = [0]
        cur = a
        while cur != 0:
            out.append(cur)
            cur = self.mul(a, cur)
        return out


def element_orders(perms: np.ndarray) -> np.ndarray:
    return kernels.perm_orders(np.ascontiguousarray(perms, dtype=np.intp))


def orbit_count(perms: np.ndarray, rows: Sequence[int]) -> int:
    return kernels.orbit_count(np.ascontiguousarray(perms, dtype=np.intp), list(rows))


@dataclass
class GroupProfile:
    order: int
    case: str
    t: int = 1
    rho: Optional[int] = None
    tau: Optional[int] = None
    sigma: Optional[int] = None
    # prime-order elements whose cyclic subgroups every nontrivial stabilizer must meet,
    # unless it is a single involution from `reflections`
    pstar: List[int] = field(default_factory=list)
    reflections: List[int] = field(default_factory=list)
    branch_guess: Optional[str] = None
    elements: Optional[np.ndarray] = field(default=None, repr=False)


def _verify_cyclic(g: PermGroup, orders: np.ndarray) -> Optional[dict]:
    hits = np.nonzero(orders == g.order)[0]
    if len(hits) == 0:
        return None
    return {"t": g.order, "rho": int(hits[0])}


def _dihedral_pair(g: PermGroup, orders, t: int):
    """(rho, tau, <rho> as a set) with rho of order t and tau inverting it, or None."""
    invols = [int(i) for i in np.nonzero(orders == 2)[0]]
    for rho in (int(i) for i in np.nonzero(orders == t)[0]):
        rot = set(g.cyclic(rho))
        rinv = g.inv(rho)
        for tau in invols:
            if tau in rot:
                continue
            if g.mul(tau, g.mul(rho, tau)) == rinv:
                return rho, tau, rot
    return None


def _verify_dihedral(g: PermGroup, orders) -> Optional[dict]:
    if g.order % 2:
        return None
    t = g.order // 2
    found = _dihedral_pair(g, orders, t)
    if found is None:
        return None
    return {"t": t, "rho": found[0], "tau": found[1]}


def _central(g: PermGroup, s: int, gens: Sequence[int]) -> bool:
    return all(g.mul(s, x) == g.mul(x, s) for x in gens)


def _verify_cyclic_x_z2(g: PermGroup, orders) -> Optional[dict]:
    if g.order % 4:
        return None
    t = g.order // 2            # t even; Z_t x Z2 with t odd is cyclic
    invols = [int(i) for i in np.nonzero(orders == 2)[0]]
    for rho in (int(i) for i in np.nonzero(orders == t)[0]):
        rot = set(g.cyclic(rho))
        for s in invols:
            if s not in rot and _central(g, s, [rho]):
                return {"t": t, "rho": rho, "sigma": s}
    return None


def _verify_dihedral_x_z2(g: PermGroup, orders) -> Optional[dict]:
    if g.order % 8:
        return None
    t = g.order // 4
    invols = [int(i) for i in np.nonzero(orders == 2)[0]]
    for rho in (int(i) for i in np.nonzero(orders == t)[0]):
        rot = set(g.cyclic(rho))
        rinv = g.inv(rho)
        for tau in invols:
            if tau in rot or g.mul(tau, g.mul(rho, tau)) != rinv:
                continue
            sub = rot | {g.mul(r, tau) for r in rot}
            for s in invols:
                if s not in sub and _central(g, s, [rho, tau]):
                    return {"t": t, "rho": rho, "tau": tau, "sigma": s}
    return None


_VERIFIERS = {
    CYCLIC: _verify_cyclic,
    DIHEDRAL: _verify_dihedral,
    CYCLIC_X_Z2: _verify_cyclic_x_z2,
    DIHEDRAL_X_Z2: _verify_dihedral_x_z2,
}


def _guess(order: int, orders: np.ndarray) -> str:
    if np.any(orders == order):
        return CYCLIC
    invol = int(np.count_nonzero(orders == 2))
    if invol == 3:
        return CYCLIC_X_Z2
    if invol in (order // 2, order // 2 + 1):
        return DIHEDRAL
    return DIHEDRAL_X_Z2


def check_closed(g: PermGroup) -> None:
    """Raise unless the rows form a group with the identity in row 0.

    Generators are picked greedily from rows not yet reached, so the breadth-first
    closure costs about order * log2(order) lookups.
    """
    if not np.array_equal(g.perms[0], np.arange(g.degree)):
        raise InvariantViolation("group list must start with the identity")
    gens: List[np.ndarray] = []
    reached = np.zeros(g.order, dtype=bool)
    reached[0] = True
    frontier = [0]
    for start in range(g.order):
        if not reached[start]:
            gens.append(g.perms[start])
            frontier = list(np.nonzero(reached)[0])
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    key = g.perms[x][s].tobytes()
                    y = g._index.get(key)
                    if y is None:
                        raise InvariantViolation("element list is not closed under composition")
                    if not reached[y]:
                        reached[y] = True
                        nxt.append(y)
            frontier = nxt


def classify_group(perms: np.ndarray) -> GroupProfile:
    """Recognize cyclic, dihedral and their products with Z2; anything else is LATTICE.

    The guess from element orders is recorded, but a shape is only accepted once
    generators with its defining relations are exhibited. Shapes are tried in the
    order cyclic, dihedral, then the products, so overlaps such as Z2 x Z2 resolve
    to the earliest.
    """
    g = PermGroup(perms)
    check_closed(g)
    if g.order == 1:
        return GroupProfile(1, FULL_PIE, elements=g.perms)
    orders = element_orders(g.perms)
    guess = _guess(g.order, orders)
    for case in STRUCTURED:
        found = _VERIFIERS[case](g, orders)
        if found is not None:
            prof = _structured_profile(g, orders, case, found)
            prof.branch_guess = guess
            return prof
    return GroupProfile(g.order, LATTICE, branch_guess=guess, elements=g.perms)


def _structured_profile(g: PermGroup, orders, case: str, found: dict) -> GroupProfile:
    t, rho = found["t"], found["rho"]
    pstar = [g.power(rho, t // p) for p in prime_factors(t)]
    sigma = found.get("sigma")
    if sigma is not None:
        for extra in (sigma, g.mul(g.power(rho, t // 2), sigma)):
            if extra not in pstar:
                pstar.append(extra)
    pset = set(pstar)
    refl = [int(i) for i in np.nonzero(orders == 2)[0] if int(i) not in pset]
    return GroupProfile(g.order, case, t, rho, found.get("tau"), sigma, pstar, refl,
                        elements=g.perms)


# ---------------------------------------------------------------- subgroup lattice

@dataclass
class SubgroupLattice:
    """All subgroups as bitmasks over element indices, smallest first."""

    subgroups: List[int]
    mu: List[int]
    _perms: np.ndarray = field(repr=False)

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return a & b == a

    @staticmethod
    def elements(mask: int) -> List[int]:
        out, i = [], 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def orbit_counts(self) -> List[int]:
        return [orbit_count(self._perms, self.elements(s)) for s in self.subgroups]


def _closure(table: np.ndarray, gens: Sequence[int]) -> int:
    elems = [0]
    mask = 1
    for x in elems:
        for s in gens:
            y = int(table[x, s])
            if not mask >> y & 1:
                mask |= 1 << y
                elems.append(y)
    return mask


def multiplication_table(g: PermGroup) -> np.ndarray:
    table = np.empty((g.order, g.order), dtype=np.intp)
    for a in range(g.order):
        comp = g.perms[a][g.perms]          # row b -> a∘b
        for b in range(g.order):
            table[a, b] = g._index[comp[b].tobytes()]
    return table


def subgroup_lattice(perms: np.ndarray, cap: int = LATTICE_CAP) -> SubgroupLattice:
    g = PermGroup(perms)
    if g.order > cap:
        raise CapExceeded(f"group order {g.order} for subgroup lattice", cap)
    table = multiplication_table(g)
    gens: Dict[int, List[int]] = {}
    for a in range(g.order):
        gens.setdefault(_closure(table, [a]), [a])
    cyclic = sorted(gens, key=lambda m: bin(m).count("1"))
    queue = list(cyclic)
    for h in queue:
        for c in cyclic:
            if c & h == c:
                continue
            j = _closure(table, gens[h] + gens[c])
            if j not in gens:
                gens[j] = gens[h] + gens[c]
                queue.append(j)
                if len(gens) > SUBGROUP_COUNT_CAP:
                    raise CapExceeded("subgroup count", SUBGROUP_COUNT_CAP)
    seen = gens
    subs = sorted(seen, key=lambda m: (bin(m).count("1"), m))
    mu: List[int] = []
    for i, s in enumerate(subs):
        if i == 0:
            mu.append(1)
            continue
        mu.append(-sum(mu[j] for j in range(i) if subs[j] & s == subs[j]))
    return SubgroupLattice(subs, mu, g.perms)
