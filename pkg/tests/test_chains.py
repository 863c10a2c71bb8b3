"""Chain complexes: homology, cones, quasi-isomorphisms, minimalization."""

import random

import numpy as np
import pytest

from perfchain import (
    BoundarySquareNonzeroError,
    ChainComplex,
    ChainMap,
    GroupMismatchError,
    GroupRingMatrix,
    direct_sum,
    euler_characteristic,
    homology,
    identity_chain_map,
    is_quasi_iso,
    mapping_cone,
    minimalize,
    shift,
    zero_complex,
)
from perfchain.chains import compose_chain_maps

from conftest import (
    SMALL_GROUPS,
    conjugate_complex,
    pad_with_identity_cones,
    random_minimal_complex,
)


def one_plus_t(G):
    return GroupRingMatrix.from_entries(G, [[[1, 1]]])


def lens_like(G, n):
    """[F -> ... -> F] with alternating 1+t boundaries over C_2."""
    return ChainComplex(G, 0, [1] * (n + 1), [one_plus_t(G)] * n)


def test_homology_of_two_step_complex():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 2)
    dims = [homology(C, q).dim for q in range(-1, 4)]
    assert dims == [0, 1, 0, 1, 0]
    # H_0 and H_2 carry the trivial action
    for q in (0, 2):
        H = homology(C, q)
        assert all(np.array_equal(a, np.eye(1, dtype=int)) for a in H.action)


def test_homology_of_zero_and_single():
    G = SMALL_GROUPS["C3"]
    assert homology(zero_complex(G), 0).dim == 0
    single = ChainComplex(G, 0, [2], [])
    assert homology(single, 0).dim == 6
    assert homology(single, 1).dim == 0


def test_d_squared_rejected():
    G = SMALL_GROUPS["C2"]
    rng = random.Random(23)
    rejected = 0
    for _ in range(40):
        d1 = GroupRingMatrix(G, np.array([[[rng.randrange(2), rng.randrange(2)]
                                           for _ in range(2)] for _ in range(2)]))
        d2 = GroupRingMatrix(G, np.array([[[rng.randrange(2), rng.randrange(2)]
                                           for _ in range(2)] for _ in range(2)]))
        try:
            ChainComplex(G, 0, [2, 2, 2], [d1, d2])
        except BoundarySquareNonzeroError:
            rejected += 1
    assert rejected > 30  # random pairs overwhelmingly violate d*d = 0


def test_mapping_cone_of_identity_is_acyclic():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 2)
    cone = mapping_cone(identity_chain_map(C))
    assert cone.expanded().is_acyclic()


def test_mapping_cone_of_zero_map_from_zero():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 1)
    f = ChainMap(zero_complex(G), C, {})
    assert mapping_cone(f) == C


def test_cone_of_multiplication_by_radical():
    G = SMALL_GROUPS["C2"]
    C = ChainComplex(G, 0, [1], [])
    f = ChainMap(C, C, {0: one_plus_t(G)})
    cone = mapping_cone(f)
    assert cone.ranks == [1, 1]
    H0, H1 = homology(cone, 0), homology(cone, 1)
    assert (H0.dim, H1.dim) == (1, 1)
    for H in (H0, H1):
        assert all(np.array_equal(a, np.eye(1, dtype=int)) for a in H.action)


def test_is_quasi_iso_examples():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 2)
    assert is_quasi_iso(identity_chain_map(C))
    D = lens_like(G, 1)
    zero_map = ChainMap(D, C, {})
    assert not is_quasi_iso(zero_map)
    # inclusion of C into C + cone(identity)
    cone = mapping_cone(identity_chain_map(ChainComplex(G, 1, [3], [])))
    S = direct_sum(C, cone)
    comps = {}
    for q in range(C.bottom, C.top + 1):
        data = np.zeros((S.rank_at(q), C.rank_at(q), 2), dtype=np.int64)
        data[:C.rank_at(q)] = GroupRingMatrix.identity(G, C.rank_at(q)).data
        comps[q] = GroupRingMatrix(G, data)
    incl = ChainMap(C, S, comps)
    assert is_quasi_iso(incl)


def test_minimalize_identity_and_radical():
    G = SMALL_GROUPS["C2"]
    D = ChainComplex(G, 0, [1, 1], [GroupRingMatrix.identity(G, 1)])
    m = minimalize(D)
    assert m.complex.ranks == []
    assert is_quasi_iso(m.witness)

    C = ChainComplex(G, 0, [1, 1], [one_plus_t(G)])
    m2 = minimalize(C)
    assert m2.complex == C  # entries in the radical stay put


def test_minimalize_removes_cone_summand_exactly():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 2)
    cone = mapping_cone(identity_chain_map(ChainComplex(G, 0, [3], [])))
    m = minimalize(direct_sum(C, cone))
    assert m.complex == C
    assert is_quasi_iso(m.witness)


def test_minimalize_idempotent_and_euler_invariant(rng):
    for name in ["C2", "C3", "C4", "C2xC2", "Q8"]:
        G = SMALL_GROUPS[name]
        for _ in range(5):
            core = random_minimal_complex(G, rng)
            C = conjugate_complex(pad_with_identity_cones(core, rng, 2), rng)
            m = minimalize(C)
            assert m.complex.ranks == core.ranks
            assert is_quasi_iso(m.witness)
            again = minimalize(m.complex)
            assert again.complex.ranks == m.complex.ranks
            assert euler_characteristic(C) == euler_characteristic(m.complex)
            # homology dimensions are preserved degreewise
            for q in range(C.bottom, C.top + 1):
                assert homology(C, q).dim == homology(m.complex, q).dim


def test_direct_sum_and_shift():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 2)
    assert direct_sum(C, zero_complex(G)) == C
    assert shift(C, 0) == C
    S = shift(C, 2)
    for q in range(-1, 6):
        assert homology(S, q).dim == homology(C, q - 2).dim
    with pytest.raises(GroupMismatchError):
        direct_sum(C, zero_complex(SMALL_GROUPS["C3"]))


def test_euler_characteristic_examples():
    G = SMALL_GROUPS["C2"]
    assert euler_characteristic(zero_complex(G)) == 0
    C = lens_like(G, 2)
    assert euler_characteristic(C) == 1
    cone = mapping_cone(identity_chain_map(ChainComplex(G, 0, [2], [])))
    assert euler_characteristic(direct_sum(C, cone)) == 1
    # expanded-dimension identity
    total = sum((-1) ** q * C.rank_at(q) * G.order for q in range(C.bottom, C.top + 1))
    assert euler_characteristic(C) == total // G.order


def test_chain_map_validation():
    G = SMALL_GROUPS["C2"]
    C = lens_like(G, 2)
    bad = {1: GroupRingMatrix.identity(G, 1), 0: GroupRingMatrix.zeros(G, 1, 1)}
    with pytest.raises(Exception):
        ChainMap(C, C, bad)


def test_compose_chain_maps_witnesses(rng):
    G = SMALL_GROUPS["C4"]
    core = random_minimal_complex(G, rng)
    C = pad_with_identity_cones(core, rng, 2)
    m1 = minimalize(C)
    m2 = minimalize(m1.complex)
    comp = compose_chain_maps(m1.witness, m2.witness)
    assert is_quasi_iso(comp)
