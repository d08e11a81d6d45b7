"""Stabilizer-chain kernel: orders, membership, closures, Frattini subgroups."""

import random

import numpy as np
import pytest

from conftest import bfs_elements
from monotree import imgstruct, treeauto as ta
from monotree.permgrp import (
    MalformedPermutationError,
    NonTwoPowerOrderError,
    NotASubgroupError,
    PermGroup,
    cyclic_quotient_exponent,
    invert,
    pointwise_stabilizer,
)


def test_from_generators_examples():
    level1 = PermGroup.from_generators([ta.sigma(1).leaf_perm()], 2)
    assert level1.order_log2() == 1
    trivial = PermGroup.from_generators([], 4)
    assert trivial.order_log2() == 0
    level2 = PermGroup.from_generators(imgstruct.leaf_generators(2), 4)
    assert level2.order_log2() == 3


def test_malformed_permutations_rejected():
    with pytest.raises(MalformedPermutationError):
        PermGroup.from_generators([[0, 0, 1, 2]], 4)
    with pytest.raises(MalformedPermutationError):
        PermGroup.from_generators([[0, 1]], 4)
    group = PermGroup.from_generators([ta.sigma(2).leaf_perm()], 4)
    with pytest.raises(MalformedPermutationError):
        group.sift([0, 1])


def test_order_log2_requires_two_power():
    three_cycle = np.array([1, 2, 0], dtype=np.intp)
    group = PermGroup.from_generators([three_cycle], 3)
    with pytest.raises(NonTwoPowerOrderError):
        group.order_log2()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chain_order_equals_enumeration(n):
    gens = imgstruct.leaf_generators(n)
    group = PermGroup.from_generators(gens, 1 << n)
    assert 1 << group.order_log2() == len(bfs_elements(gens, 1 << n))


def test_chain_order_on_random_subgroups_of_level3():
    rng = random.Random(5)
    full = imgstruct.leaf_generators(3)
    for _ in range(10):
        words = []
        for _ in range(2):
            w = np.arange(8, dtype=np.intp)
            for _ in range(rng.randrange(1, 7)):
                w = full[rng.randrange(3)][w]
            words.append(w)
        group = PermGroup.from_generators(words, 8)
        elements = bfs_elements(words, 8)
        assert 1 << group.order_log2() == len(elements)
        # membership agrees with the enumeration in both directions
        for p in elements:
            assert group.contains(np.array(p, dtype=np.intp))
        outside = [p for p in bfs_elements(full, 8) if p not in elements]
        for p in outside[:20]:
            assert not group.contains(np.array(p, dtype=np.intp))


def test_contains_identity_and_product_pairs(geometric_groups):
    rng = random.Random(6)
    for n in (4, 5):
        group = geometric_groups[n]
        assert group.contains(np.arange(1 << n, dtype=np.intp))
        for _ in range(10):
            x = imgstruct.random_word_element(n - 1, rng)
            pair = imgstruct.embed_pair(x.leaf_perm(), x.leaf_perm())
            assert group.contains(pair)


def test_normal_closure_examples(geometric_groups):
    trivial = geometric_groups[3].normal_closure([np.arange(8, dtype=np.intp)])
    assert trivial.order_log2() == 0
    n13 = geometric_groups[3].normal_closure([ta.generator(1, 3).leaf_perm()])
    assert geometric_groups[3].index_log2(n13) == 2
    n34 = geometric_groups[4].normal_closure([ta.generator(3, 4).leaf_perm()])
    assert geometric_groups[4].index_log2(n34) == 2


def test_normal_closure_rejects_outside_seed(geometric_groups):
    outsider = ta.sigma(3).leaf_perm()  # negative parity, not in the group
    with pytest.raises(NotASubgroupError):
        geometric_groups[3].normal_closure([outsider])


def test_normal_closure_invariant_under_conjugation(geometric_groups):
    rng = random.Random(7)
    group = geometric_groups[4]
    closure = group.normal_closure([ta.generator(2, 4).leaf_perm()])
    for _ in range(50):
        g = imgstruct.random_word_element(4, rng).leaf_perm()
        g_inv = invert(g)
        for h in closure.generators:
            assert closure.contains(g[h[g_inv]])


def test_index_log2_additive(geometric_groups):
    w3 = imgstruct.build_W(3)
    g3 = geometric_groups[3]
    n13 = g3.normal_closure([ta.generator(1, 3).leaf_perm()])
    assert w3.index_log2(g3) == 1
    assert w3.index_log2(n13) == w3.index_log2(g3) + g3.index_log2(n13)


def test_index_log2_rejects_non_subgroup(geometric_groups):
    w3 = imgstruct.build_W(3)
    with pytest.raises(NotASubgroupError):
        geometric_groups[3].index_log2(w3)


def test_frattini_of_order_two_group():
    c2 = PermGroup.from_generators([ta.sigma(1).leaf_perm()], 2)
    phi = c2.frattini_subgroup()
    assert phi.order_log2() == 0
    assert c2.index_log2(phi) == 1


def test_frattini_of_depth2_full_group_against_lattice_oracle():
    gens = imgstruct.full_group_generators(2)
    group = PermGroup.from_generators(gens, 4)
    phi = group.frattini_subgroup()
    assert group.index_log2(phi) == 2  # index 4

    # oracle: intersect the maximal subgroups of the 8-element group directly
    elements = sorted(bfs_elements(gens, 4))
    subgroups = []
    for mask in range(1, 1 << len(elements)):
        subset = {elements[i] for i in range(len(elements)) if mask >> i & 1}
        if len(subset) != 4:
            continue
        closed = all(tuple(q[x] for x in p) in subset for p in subset for q in subset)
        if closed and tuple(range(4)) in subset:
            subgroups.append(subset)
    intersection = set(elements)
    for sub in subgroups:
        intersection &= sub
    phi_elements = {p for p in elements if phi.contains(np.array(p, dtype=np.intp))}
    assert phi_elements == intersection


def test_frattini_quotient_is_elementary_abelian(geometric_groups):
    rng = random.Random(8)
    group = geometric_groups[3]
    phi = group.frattini_subgroup()
    assert phi.is_normalized_by(group.generators)
    for _ in range(40):
        g = imgstruct.random_word_element(3, rng).leaf_perm()
        assert phi.contains(g[g])


def test_cyclic_quotient_exponent(geometric_groups):
    g3 = geometric_groups[3]
    n13 = g3.normal_closure([ta.generator(1, 3).leaf_perm()])
    assert cyclic_quotient_exponent(g3, n13, ta.generator(2, 3).leaf_perm()) == 2
    assert cyclic_quotient_exponent(g3, g3, ta.generator(2, 3).leaf_perm()) == 0
    g4 = geometric_groups[4]
    n34 = g4.normal_closure([ta.generator(3, 4).leaf_perm()])
    assert cyclic_quotient_exponent(g4, n34, ta.generator(2, 4).leaf_perm()) == 2


def test_cyclic_quotient_exponent_rejects_non_normal():
    w2 = imgstruct.build_W(2)
    point_stab = PermGroup.from_generators([ta.wreath(ta.identity(1), ta.sigma(1), False).leaf_perm()], 4)
    with pytest.raises(NotASubgroupError):
        cyclic_quotient_exponent(w2, point_stab, ta.sigma(2).leaf_perm())


def test_pointwise_stabilizer_small():
    gens = imgstruct.full_group_generators(2)
    stab_gens = pointwise_stabilizer(gens, 4, [0])
    stab = PermGroup.from_generators(stab_gens, 4)
    assert stab.order_log2() == 1  # only the swap of leaves 3, 4 remains
    for g in stab_gens:
        assert g[0] == 0


def test_deterministic_chain(geometric_groups):
    again = imgstruct.build_G(5)
    assert again.base == geometric_groups[5].base
    first = [g.tobytes() for g in again.strong_generators()]
    second = [g.tobytes() for g in imgstruct.build_G(5).strong_generators()]
    assert first == second
