"""Shared fixtures: the group zoo and randomized complex/tower generators."""

from __future__ import annotations

import random

import numpy as np
import pytest

from perfchain import (
    ChainComplex,
    ChainMap,
    GroupRingMatrix,
    GroupTable,
    Tower,
    build_group,
    cyclic_group,
    direct_product,
    direct_sum,
    identity_chain_map,
    mapping_cone,
    norm_element,
)
from perfchain.chains import compose_chain_maps
from perfchain.groups import grm_compose


def group_from_mul(elems, mul, identity_elem, l: int) -> GroupTable:
    """Build a validated table from an element list and a product function."""
    idx = {e: i for i, e in enumerate(elems)}
    mult = [[idx[mul(a, b)] for b in elems] for a in elems]
    return GroupTable(mult, idx[identity_elem], l)


def dihedral(m: int) -> GroupTable:
    """Dihedral group of order 2m (m a 2-power for the zoo)."""
    elems = [(i, e) for e in range(2) for i in range(m)]

    def mul(x, y):
        (i, e), (j, f) = x, y
        return ((i + (j if e == 0 else -j)) % m, (e + f) % 2)

    return group_from_mul(elems, mul, (0, 0), 2)


def generalized_quaternion(k: int) -> GroupTable:
    """Q_{4k}: a^{2k} = 1, b^2 = a^k, b a b^-1 = a^-1."""
    elems = [(i, e) for e in range(2) for i in range(2 * k)]

    def mul(x, y):
        (i, e), (j, f) = x, y
        i2 = (i + (j if e == 0 else -j)) % (2 * k)
        if e and f:
            return ((i2 + k) % (2 * k), 0)
        return (i2, (e + f) % 2)

    return group_from_mul(elems, mul, (0, 0), 2)


def _twisted_16(r_power: int) -> GroupTable:
    """Order 16 with s r s^-1 = r^r_power (r of order 8)."""
    elems = [(i, e) for e in range(2) for i in range(8)]

    def mul(x, y):
        (i, e), (j, f) = x, y
        return ((i + (j if e == 0 else r_power * j)) % 8, (e + f) % 2)

    return group_from_mul(elems, mul, (0, 0), 2)


def semidihedral_16() -> GroupTable:
    return _twisted_16(3)


def modular_16() -> GroupTable:
    return _twisted_16(5)


def c4_semidirect_c4() -> GroupTable:
    elems = [(a, b) for a in range(4) for b in range(4)]

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + (c if b % 2 == 0 else -c)) % 4, (b + d) % 4)

    return group_from_mul(elems, mul, (0, 0), 2)


def c2c2_semidirect_c4() -> GroupTable:
    elems = [(u, v, b) for u in range(2) for v in range(2) for b in range(4)]

    def mul(x, y):
        (u, v, b), (w, z, d) = x, y
        if b % 2 == 0:
            return ((u + w) % 2, (v + z) % 2, (b + d) % 4)
        return ((u + z) % 2, (v + w) % 2, (b + d) % 4)

    return group_from_mul(elems, mul, (0, 0, 0), 2)


def pauli_16() -> GroupTable:
    """Central product generated by two order-4 anticommuting involutions
    and a central fourth root: (k,a,b) ~ i^k X^a Z^b."""
    elems = [(k, a, b) for k in range(4) for a in range(2) for b in range(2)]

    def mul(x, y):
        (k, a, b), (m, c, d) = x, y
        return ((k + m + 2 * b * c) % 4, (a + c) % 2, (b + d) % 2)

    return group_from_mul(elems, mul, (0, 0, 0), 2)


def heisenberg_27() -> GroupTable:
    elems = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]

    def mul(x, y):
        (a, b, c), (d, e, f) = x, y
        return ((a + d) % 3, (b + e) % 3, (c + f + a * e) % 3)

    return group_from_mul(elems, mul, (0, 0, 0), 3)


def c9_semidirect_c3() -> GroupTable:
    elems = [(a, b) for a in range(9) for b in range(3)]

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + pow(4, b, 9) * c) % 9, (b + d) % 3)

    return group_from_mul(elems, mul, (0, 0), 3)


def two_group_zoo() -> list[tuple[str, GroupTable]]:
    """All 23 groups of 2-power order <= 27 (orders 1, 2, 4, 8, 16)."""
    C2 = cyclic_group(2, 2)
    C4 = cyclic_group(4, 2)
    C8 = cyclic_group(8, 2)
    D4 = dihedral(4)
    Q8 = generalized_quaternion(2)
    return [
        ("C1", cyclic_group(1, 2)),
        ("C2", C2),
        ("C4", C4),
        ("C2xC2", direct_product(C2, C2)),
        ("C8", C8),
        ("C4xC2", direct_product(C4, C2)),
        ("C2^3", build_group("product:cyclic:2,cyclic:2,cyclic:2", 2)),
        ("D4", D4),
        ("Q8", Q8),
        ("C16", cyclic_group(16, 2)),
        ("C8xC2", direct_product(C8, C2)),
        ("C4xC4", direct_product(C4, C4)),
        ("C4xC2^2", direct_product(C4, direct_product(C2, C2))),
        ("C2^4", build_group("product:cyclic:2,cyclic:2,cyclic:2,cyclic:2", 2)),
        ("D16", dihedral(8)),
        ("SD16", semidihedral_16()),
        ("M16", modular_16()),
        ("Q16", generalized_quaternion(4)),
        ("D4xC2", direct_product(D4, C2)),
        ("Q8xC2", direct_product(Q8, C2)),
        ("C4:C4", c4_semidirect_c4()),
        ("C2^2:C4", c2c2_semidirect_c4()),
        ("Pauli16", pauli_16()),
    ]


def three_group_zoo() -> list[tuple[str, GroupTable]]:
    """All 9 groups of 3-power order <= 27 (orders 1, 3, 9, 27)."""
    C3 = cyclic_group(3, 3)
    C9 = cyclic_group(9, 3)
    return [
        ("C1", cyclic_group(1, 3)),
        ("C3", C3),
        ("C9", C9),
        ("C3xC3", direct_product(C3, C3)),
        ("C27", cyclic_group(27, 3)),
        ("C9xC3", direct_product(C9, C3)),
        ("C3^3", build_group("product:cyclic:3,cyclic:3,cyclic:3", 3)),
        ("Heis27", heisenberg_27()),
        ("C9:C3", c9_semidirect_c3()),
    ]


SMALL_GROUPS = {
    "C1": cyclic_group(1, 2),
    "C2": cyclic_group(2, 2),
    "C3": cyclic_group(3, 3),
    "C4": cyclic_group(4, 2),
    "C2xC2": build_group("product:cyclic:2,cyclic:2", 2),
    "C9": cyclic_group(9, 3),
    "D4": dihedral(4),
    "Q8": generalized_quaternion(2),
}


@pytest.fixture
def rng():
    return random.Random(20240811)


# ----------------------------------------------------------------------
# randomized generators


def radical_entry(G: GroupTable, rng, parity: int) -> np.ndarray:
    """A radical element whose products across parities vanish:
    parity 0 slots carry the norm, parity 1 slots carry g - 1."""
    o = G.order
    out = np.zeros(o, dtype=np.int64)
    if o == 1:
        return out
    if parity == 0:
        out[:] = 1
    else:
        g = rng.randrange(1, o)
        out[g] += 1
        out[G.identity] -= 1
    return out % G.prime_l


def random_minimal_complex(G: GroupTable, rng, max_degrees: int = 4,
                           max_rank: int = 3) -> ChainComplex:
    """A random minimal complex: diagonal boundary slots alternate between
    the norm element and elements g - 1, so d o d = 0 and every entry has
    augmentation zero."""
    n_deg = rng.randint(1, max_degrees)
    bottom = rng.randint(-2, 2)
    ranks = [rng.randint(1, max_rank) for _ in range(n_deg)]
    boundaries = []
    for i in range(1, n_deg):
        data = np.zeros((ranks[i - 1], ranks[i], G.order), dtype=np.int64)
        if G.order > 1:
            for s in range(min(ranks[i - 1], ranks[i])):
                if rng.random() < 0.7:
                    data[s, s] = radical_entry(G, rng, (bottom + i) % 2)
        boundaries.append(GroupRingMatrix(G, data))
    return ChainComplex(G, bottom, ranks, boundaries)


def pad_with_identity_cones(C: ChainComplex, rng, count: int) -> ChainComplex:
    for _ in range(count):
        q = rng.randint(C.bottom - 1, C.top + 1)
        r = rng.randint(1, 2)
        cone = mapping_cone(identity_chain_map(ChainComplex(C.group, q, [r], [])))
        C = direct_sum(C, cone)
    return C


def random_unit(G: GroupTable, rng) -> np.ndarray:
    """A random unit: a group element plus a random radical perturbation."""
    o = G.order
    out = np.zeros(o, dtype=np.int64)
    out[rng.randrange(o)] = rng.randrange(1, G.prime_l)
    if o > 1 and rng.random() < 0.5:
        out = (out + radical_entry(G, rng, rng.randint(0, 1))) % G.prime_l
    return out


def random_invertible(G: GroupTable, n: int, rng,
                      n_ops: int = 4) -> tuple[GroupRingMatrix, GroupRingMatrix]:
    """A random invertible matrix over F_l[pi] with its exact inverse,
    built from elementary transvections and unit scalings."""
    W = GroupRingMatrix.identity(G, n)
    Winv = GroupRingMatrix.identity(G, n)
    o = G.order
    for _ in range(n_ops):
        if n > 1 and rng.random() < 0.6:
            i, j = rng.sample(range(n), 2)
            a = np.zeros(o, dtype=np.int64)
            a[rng.randrange(o)] = rng.randrange(1, G.prime_l)
            E = GroupRingMatrix.identity(G, n).data.copy()
            E[i, j] = a
            Einv = GroupRingMatrix.identity(G, n).data.copy()
            Einv[i, j] = (-a) % G.prime_l
        else:
            i = rng.randrange(n)
            u = random_unit(G, rng)
            from perfchain import ga_inverse, GroupRingElement
            uinv = ga_inverse(GroupRingElement(u, G.prime_l), G).coeffs
            E = GroupRingMatrix.identity(G, n).data.copy()
            E[i, i] = u
            Einv = GroupRingMatrix.identity(G, n).data.copy()
            Einv[i, i] = uinv
        W = grm_compose(W, GroupRingMatrix(G, E))
        Winv = grm_compose(GroupRingMatrix(G, Einv), Winv)
    return W, Winv


def conjugate_complex(C: ChainComplex, rng) -> ChainComplex:
    """A complex isomorphic to C via random basis changes in every degree."""
    G = C.group
    Ws = {}
    for q in range(C.bottom, C.top + 1):
        r = C.rank_at(q)
        Ws[q] = random_invertible(G, r, rng) if r else None
    boundaries = []
    for q in range(C.bottom + 1, C.top + 1):
        d = C.boundary_at(q)
        if Ws[q] is not None:
            d = grm_compose(d, Ws[q][0])
        if Ws[q - 1] is not None:
            d = grm_compose(Ws[q - 1][1], d)
        boundaries.append(d)
    return ChainComplex(G, C.bottom, C.ranks, boundaries)


def random_perfect_instance(G: GroupTable, rng):
    """(complex, core_ranks, core_bottom): a random minimal complex padded
    by identity cones and scrambled by a basis change."""
    core = random_minimal_complex(G, rng)
    padded = pad_with_identity_cones(core, rng, rng.randint(0, 3))
    return conjugate_complex(padded, rng), core


def cone_junk_with_map(core: ChainComplex, rng):
    """An acyclic junk complex J = cone(identity) plus a chain map J -> core."""
    G = core.group
    q = rng.randint(core.bottom - 1, core.top)
    r = rng.randint(1, 2)
    J = mapping_cone(identity_chain_map(ChainComplex(G, q, [r], [])))
    phi_data = np.zeros((core.rank_at(q + 1), r, G.order), dtype=np.int64)
    for i in range(core.rank_at(q + 1)):
        for j in range(r):
            phi_data[i, j, rng.randrange(G.order)] = rng.randrange(G.prime_l)
    phi = GroupRingMatrix(G, phi_data)
    comps = {}
    if core.rank_at(q + 1) and r:
        comps[q + 1] = phi
        lower = grm_compose(core.boundary_at(q + 1), phi)
        if core.rank_at(q) and not lower.is_zero():
            comps[q] = lower
    theta = ChainMap(J, core, comps)
    return J, theta


def homology_image_dims(T: Tower, q: int, h: int) -> list[int]:
    """dim of the image of H_q(level_k) -> H_q(level_0) for k = 0..h,
    computed through induced maps on homology (the oracle for the
    exactness-of-limits property)."""
    from perfchain import induced_map_on_homology
    from perfchain.flinalg import rank

    l = T.group.prime_l
    dims = []
    composite = identity_chain_map(T.levels[0])
    dims.append(induced_map_on_homology(composite, q).source.dim)
    for k in range(h):
        composite = compose_chain_maps(composite, T.bonds[k])
        dims.append(rank(induced_map_on_homology(composite, q).matrix, l))
    return dims


def random_stabilizing_tower(G: GroupTable, rng, n_levels: int = 5):
    """A tower whose stable images reproduce a core complex: levels are
    core (+) junk, bonds are identity on the core and kill the junk."""
    core = random_minimal_complex(G, rng, max_degrees=3, max_rank=2)
    style = rng.randrange(3)
    if style == 0:
        # junk with homology, killed outright
        junk = random_minimal_complex(G, rng, max_degrees=2, max_rank=2)
        junk = ChainComplex(G, core.bottom, junk.ranks, junk.boundaries)
        level = direct_sum(core, junk)
        comps = {}
        for q in range(core.bottom, core.top + 1):
            if core.rank_at(q):
                data = np.zeros((level.rank_at(q), level.rank_at(q), G.order),
                                dtype=np.int64)
                ident = GroupRingMatrix.identity(G, core.rank_at(q)).data
                data[:core.rank_at(q), :core.rank_at(q)] = ident
                comps[q] = GroupRingMatrix(G, data)
        bond = ChainMap(level, level, comps)
    elif style == 1:
        # contractible junk folded into the core by a chain map
        junk, theta = cone_junk_with_map(core, rng)
        level = direct_sum(core, junk)
        comps = {}
        for q in range(level.bottom, level.top + 1):
            rc, rj = core.rank_at(q), junk.rank_at(q)
            if rc + rj == 0:
                continue
            data = np.zeros((rc + rj, rc + rj, G.order), dtype=np.int64)
            if rc:
                data[:rc, :rc] = GroupRingMatrix.identity(G, rc).data
            th = theta.component_at(q)
            if rc and rj:
                data[:rc, rc:] = th.data
            comps[q] = GroupRingMatrix(G, data)
        bond = ChainMap(level, level, comps)
    else:
        level = core
        bond = identity_chain_map(core)
    levels = [level] * n_levels
    bonds = [bond] * (n_levels - 1)
    return Tower(levels, bonds), core
