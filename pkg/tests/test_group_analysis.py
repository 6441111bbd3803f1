import itertools

import numpy as np
import pytest

from distcount.errors import CapExceeded, InvariantViolation
from distcount.families import cycle
from distcount.group_analysis import (CYCLIC, CYCLIC_X_Z2, DIHEDRAL, DIHEDRAL_X_Z2, FULL_PIE,
                                      LATTICE, PermGroup, classify_group, prime_factors,
                                      subgroup_lattice)
from distcount.isomorphism import PinnedGraph, automorphism_array


def closure(gens, degree):
    ident = tuple(range(degree))
    elems = [ident]
    seen = {ident}
    for x in elems:
        for s in gens:
            y = tuple(x[i] for i in s)
            if y not in seen:
                seen.add(y)
                elems.append(y)
    return np.array(elems, dtype=np.intp)


def rot(t, extra=0):
    return tuple((i + 1) % t for i in range(t)) + tuple(range(t, t + extra))


def refl(t, extra=0):
    return tuple((-i) % t for i in range(t)) + tuple(range(t, t + extra))


def flip(t):
    return tuple(range(t)) + (t + 1, t)


def cyclic_group(t):
    return closure([rot(t)], t)


def dihedral_group(t):
    return closure([rot(t), refl(t)], t)


def cyclic_x_z2(t):
    return closure([rot(t, 2), flip(t)], t + 2)


def dihedral_x_z2(t):
    return closure([rot(t, 2), refl(t, 2), flip(t)], t + 2)


def test_prime_factors():
    assert prime_factors(1) == []
    assert prime_factors(12) == [2, 3]
    assert prime_factors(97) == [97]
    assert prime_factors(360) == [2, 3, 5]


def test_c5_automorphisms_are_dihedral():
    perms = automorphism_array(PinnedGraph.of(cycle(5)))
    prof = classify_group(perms)
    assert (prof.order, prof.case, prof.t) == (10, DIHEDRAL, 5)
    g = PermGroup(perms)
    assert prof.pstar == [prof.rho]
    assert len(prof.reflections) == 5
    assert g.mul(prof.tau, g.mul(prof.rho, prof.tau)) == g.inv(prof.rho)


def test_z12_pstar():
    perms = cyclic_group(12)
    prof = classify_group(perms)
    assert (prof.case, prof.t) == (CYCLIC, 12)
    g = PermGroup(perms)
    assert prof.pstar == [g.power(prof.rho, 6), g.power(prof.rho, 4)]
    assert prof.reflections == []


def test_trivial_and_lattice_cases():
    assert classify_group(np.arange(4, dtype=np.intp)[None, :]).case == FULL_PIE
    s4 = np.array(list(itertools.permutations(range(4))), dtype=np.intp)
    assert classify_group(s4).case == LATTICE
    s5 = np.array(list(itertools.permutations(range(5))), dtype=np.intp)
    assert classify_group(s5).case == LATTICE
    a4 = closure([(1, 2, 0, 3), (0, 2, 3, 1)], 4)
    assert len(a4) == 12 and classify_group(a4).case == LATTICE
    z2cubed = closure([(1, 0, 2, 3, 4, 5), (0, 1, 3, 2, 4, 5), (0, 1, 2, 3, 5, 4)], 6)
    prof = classify_group(z2cubed)
    assert (prof.case, prof.t) == (DIHEDRAL_X_Z2, 2)
    _check_hitting(z2cubed, prof)
    # Z2 x Z2 is dihedral with t = 2
    klein = closure([(1, 0, 2, 3), (0, 1, 3, 2)], 4)
    assert (classify_group(klein).case, classify_group(klein).t) == (DIHEDRAL, 2)


def _subgroups(perms):
    lat = subgroup_lattice(perms, cap=10 ** 4)
    return lat, [set(lat.elements(s)) for s in lat.subgroups]


def _check_hitting(perms, prof):
    _, subs = _subgroups(perms)
    pstar, refl = set(prof.pstar), set(prof.reflections)
    for h in subs:
        if h == {0}:
            continue
        single_reflection = len(h) == 2 and h - {0} <= refl
        assert (h & pstar) or single_reflection, h


@pytest.mark.parametrize("t", range(2, 61))
def test_cyclic_hitting(t):
    perms = cyclic_group(t)
    prof = classify_group(perms)
    assert (prof.case, prof.t, prof.order) == (CYCLIC, t, t)
    _check_hitting(perms, prof)


@pytest.mark.parametrize("t", range(3, 13))
def test_dihedral_hitting(t):
    perms = dihedral_group(t)
    prof = classify_group(perms)
    assert (prof.case, prof.t, prof.order) == (DIHEDRAL, t, 2 * t)
    _check_hitting(perms, prof)


@pytest.mark.parametrize("t", [2, 4, 6, 8, 10, 12])
def test_product_hitting(t):
    perms = cyclic_x_z2(t)
    prof = classify_group(perms)
    assert (prof.case, prof.order) == (CYCLIC_X_Z2 if t > 2 else DIHEDRAL, 2 * t)
    if prof.case == CYCLIC_X_Z2:
        assert prof.t == t and prof.t % 2 == 0
    _check_hitting(perms, prof)
    if t >= 4:
        perms = dihedral_x_z2(t)
        prof = classify_group(perms)
        assert (prof.case, prof.t, prof.order) == (DIHEDRAL_X_Z2, t, 4 * t)
        _check_hitting(perms, prof)


def test_odd_products_are_cyclic_or_dihedral():
    assert classify_group(cyclic_x_z2(5)).case == CYCLIC
    assert classify_group(dihedral_x_z2(3)).case == DIHEDRAL


@pytest.mark.parametrize("perms,count", [
    (cyclic_group(12), 6),
    (dihedral_group(3), 6),
    (dihedral_group(4), 10),
    (np.array(list(itertools.permutations(range(4))), dtype=np.intp), 30),
])
def test_lattice_sizes_and_mobius(perms, count):
    lat, subs = _subgroups(perms)
    assert len(subs) == count
    assert lat.subgroups[0] == 1 and lat.mu[0] == 1
    for i, s in enumerate(lat.subgroups[1:], start=1):
        assert sum(m for u, m in zip(lat.subgroups, lat.mu) if u & s == u) == 0
    # each mask is closed under composition
    g = PermGroup(perms)
    for h in subs:
        assert all(g.mul(a, b) in h for a in h for b in h)


def test_lattice_cap():
    s6 = np.array(list(itertools.permutations(range(6))), dtype=np.intp)
    with pytest.raises(CapExceeded):
        subgroup_lattice(s6)


def test_s3_and_d5_lattices():
    lat, subs = _subgroups(dihedral_group(3))
    assert sorted(lat.mu) == [-1, -1, -1, -1, 1, 3]
    assert lat.mu[-1] == 3
    assert len(_subgroups(dihedral_group(5))[1]) == 8


def test_rejects_non_groups():
    with pytest.raises(InvariantViolation):
        classify_group(np.array([[0, 1, 2], [1, 2, 0]], dtype=np.intp))
    with pytest.raises(InvariantViolation):
        classify_group(np.array([[1, 0, 2], [0, 1, 2]], dtype=np.intp))
