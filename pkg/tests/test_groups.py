"""Group tables and exact F_l[pi] arithmetic."""

import itertools
import random

import numpy as np
import pytest

from perfchain import (
    DimensionMismatchError,
    GroupRingElement,
    GroupRingMatrix,
    NotAGroupError,
    NotAnLGroupError,
    NotAUnitError,
    ParseError,
    augmentation,
    build_group,
    cyclic_group,
    direct_product,
    ga_inverse,
    ga_mul,
    ga_one,
    is_unit,
    norm_element,
)
from perfchain.groups import grm_compose, regular_action_matrices

from conftest import SMALL_GROUPS, dihedral, generalized_quaternion, two_group_zoo


def elt(coeffs, l):
    return GroupRingElement(coeffs, l)


def all_elements(G):
    for coeffs in itertools.product(range(G.prime_l), repeat=G.order):
        yield GroupRingElement(coeffs, G.prime_l)


def test_build_cyclic2():
    G = build_group("cyclic:2", 2)
    assert G.order == 2
    assert G.mult.tolist() == [[0, 1], [1, 0]]


def test_build_rejects_non_l_group():
    with pytest.raises(NotAnLGroupError):
        build_group("cyclic:6", 2)
    with pytest.raises(NotAnLGroupError):
        cyclic_group(4, 3)


def test_build_klein_four():
    G = build_group("product:cyclic:2,cyclic:2", 2)
    assert G.order == 4
    # brute-force validation of the table against the packed product rule
    for a in range(4):
        for b in range(4):
            expected = (((a // 2) ^ (b // 2)) * 2) + ((a % 2) ^ (b % 2))
            assert G.mult[a, b] == expected


def test_bad_tables_rejected():
    with pytest.raises(NotAGroupError):
        build_group("table:{order:2;identity:0;mult:0,1|1,1}", 2)
    with pytest.raises(NotAGroupError):
        build_group("table:{order:2;identity:1;mult:0,1|1,0}", 2)
    with pytest.raises(ParseError):
        build_group("rubbish:3", 2)


def test_ga_mul_examples():
    C2 = SMALL_GROUPS["C2"]
    one, t = ga_one(C2), elt([0, 1], 2)
    assert ga_mul(one, t, C2) == t
    assert ga_mul(elt([1, 1], 2), elt([1, 1], 2), C2).is_zero()

    C3 = SMALL_GROUPS["C3"]
    prod = ga_mul(elt([1, 1, 0], 3), elt([1, 1, 1], 3), C3)
    assert prod == elt([2, 2, 2], 3)


def test_ga_mul_dimension_mismatch():
    C2 = SMALL_GROUPS["C2"]
    with pytest.raises(DimensionMismatchError):
        ga_mul(elt([1, 0, 0], 2), elt([1, 0], 2), C2)


def test_augmentation_examples():
    C2, C3 = SMALL_GROUPS["C2"], SMALL_GROUPS["C3"]
    assert augmentation(ga_one(C2)) == 1
    assert augmentation(elt([1, 1], 2)) == 0
    assert augmentation(elt([2, 1, 2], 3)) == 2


def test_is_unit_examples():
    C2, C3 = SMALL_GROUPS["C2"], SMALL_GROUPS["C3"]
    assert is_unit(elt([0, 1], 2), C2)
    assert not is_unit(elt([1, 1], 2), C2)
    assert is_unit(elt([1, 1, 0], 3), C3)


def test_ga_inverse_examples():
    C3 = SMALL_GROUPS["C3"]
    t = elt([0, 1, 0], 3)
    assert ga_inverse(t, C3) == elt([0, 0, 1], 3)
    assert ga_inverse(ga_one(C3), C3) == ga_one(C3)
    assert ga_inverse(elt([1, 1, 0], 3), C3) == elt([2, 1, 2], 3)
    with pytest.raises(NotAUnitError):
        ga_inverse(elt([1, 1], 2), SMALL_GROUPS["C2"])


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "C2xC2", "D4"])
def test_unit_criterion_against_scan(name):
    """is_unit(a) iff some b satisfies ab = 1, by literal scan."""
    G = SMALL_GROUPS[name]
    for a in all_elements(G):
        found = None
        for b in all_elements(G):
            if ga_mul(a, b, G) == ga_one(G):
                found = b
                break
        assert is_unit(a, G) == (found is not None)
        if found is not None:
            assert ga_mul(found, a, G) == ga_one(G)  # two-sided


def test_inverse_roundtrip_on_units():
    for name in ["C2", "C3", "C4", "C2xC2", "Q8", "C9"]:
        G = SMALL_GROUPS[name]
        rng = random.Random(hash(name) & 0xFFFF)
        count = 0
        while count < 25:
            coeffs = [rng.randrange(G.prime_l) for _ in range(G.order)]
            a = GroupRingElement(coeffs, G.prime_l)
            if not is_unit(a, G):
                continue
            b = ga_inverse(a, G)
            assert ga_mul(a, b, G) == ga_one(G)
            assert ga_mul(b, a, G) == ga_one(G)
            count += 1


def test_augmentation_multiplicative_exhaustive_small():
    for name in ["C2", "C4", "C2xC2"]:
        G = SMALL_GROUPS[name]
        for a in all_elements(G):
            for b in all_elements(G):
                assert augmentation(ga_mul(a, b, G)) == (
                    augmentation(a) * augmentation(b)) % G.prime_l


def test_radical_is_an_ideal():
    G = SMALL_GROUPS["C2xC2"]
    rng = random.Random(7)
    for _ in range(200):
        a = GroupRingElement([rng.randrange(2) for _ in range(4)], 2)
        b = GroupRingElement([rng.randrange(2) for _ in range(4)], 2)
        if augmentation(a) == 0 and augmentation(b) == 0:
            assert augmentation(a + b) == 0
        if augmentation(a) == 0:
            assert augmentation(ga_mul(a, b, G)) == 0
            assert augmentation(ga_mul(b, a, G)) == 0


def test_radical_nilpotence_bound():
    for name in ["C2", "C3", "C4", "Q8", "C9"]:
        G = SMALL_GROUPS[name]
        N = G.order * (G.prime_l - 1) + 1
        rng = random.Random(11)
        for _ in range(20):
            prod = ga_one(G)
            for _ in range(N):
                coeffs = [rng.randrange(G.prime_l) for _ in range(G.order)]
                a = GroupRingElement(coeffs, G.prime_l)
                a = a - GroupRingElement(
                    [augmentation(a) if i == G.identity else 0 for i in range(G.order)],
                    G.prime_l)
                prod = ga_mul(prod, a, G)
            assert prod.is_zero()


def test_norm_element_kills_radical():
    for name, G in [("C4", SMALL_GROUPS["C4"]), ("Q8", SMALL_GROUPS["Q8"])]:
        N = norm_element(G)
        for g in range(G.order):
            gm1 = GroupRingElement(
                [1 if i == g else 0 for i in range(G.order)], G.prime_l) - ga_one(G)
            assert ga_mul(gm1, N, G).is_zero()
            assert ga_mul(N, gm1, G).is_zero()


def test_direct_product_orders_and_descriptor():
    C4 = cyclic_group(4, 2)
    C2 = cyclic_group(2, 2)
    G = direct_product(C4, C2)
    assert G.order == 8
    assert G.descriptor == "product:cyclic:4,cyclic:2"
    D4 = dihedral(4)
    H = direct_product(D4, C2)
    assert H.order == 16 and H.descriptor.startswith("table:")


def test_group_zoo_all_validate():
    zoo = two_group_zoo()
    assert len(zoo) == 23
    orders = sorted(g.order for _, g in zoo)
    assert orders == [1, 2, 4, 4, 8, 8, 8, 8, 8] + [16] * 14


def test_expand_is_multiplicative_nonabelian():
    """Matrix expansion is a ring map even for nonabelian groups."""
    for G in [dihedral(4), generalized_quaternion(2)]:
        rng = random.Random(13)
        for _ in range(10):
            A = GroupRingMatrix(G, np.array(
                [[[rng.randrange(2) for _ in range(8)] for _ in range(2)]
                 for _ in range(3)]))
            B = GroupRingMatrix(G, np.array(
                [[[rng.randrange(2) for _ in range(8)] for _ in range(2)]
                 for _ in range(2)]))
            C = grm_compose(A, B)
            assert np.array_equal(C.expand(), (A.expand() @ B.expand()) % 2)


def test_expand_commutes_with_left_action():
    for name in ["C4", "D4"]:
        G = SMALL_GROUPS[name]
        rng = random.Random(5)
        A = GroupRingMatrix(G, np.array(
            [[[rng.randrange(2) for _ in range(G.order)] for _ in range(2)]
             for _ in range(2)]))
        E = A.expand()
        acts_src = regular_action_matrices(G, 2)
        for g in range(G.order):
            assert np.array_equal((acts_src[g] @ E) % 2, (E @ acts_src[g]) % 2)


def test_from_expanded_roundtrip():
    G = SMALL_GROUPS["D4"]
    rng = random.Random(3)
    A = GroupRingMatrix(G, np.array(
        [[[rng.randrange(2) for _ in range(8)] for _ in range(3)] for _ in range(2)]))
    B = GroupRingMatrix.from_expanded(G, A.expand(), 2, 3)
    assert B == A
