"""Portraits, the composition convention, and the named elements."""

import random

import numpy as np
import pytest

from conftest import perm_from_cycles
from monotree import treeauto as ta


def random_automorphism(rng, depth):
    flags = np.array([rng.randrange(2) for _ in range((1 << depth) - 1)], dtype=np.uint8)
    return ta.LevelAutomorphism(depth, flags)


def test_leaf_index_examples():
    assert ta.leaf_index((1, 1, 1)) == 1
    assert ta.leaf_index((2, 1, 1)) == 2
    assert ta.leaf_index((2, 2, 2)) == 8


def test_leaf_index_bijective_per_level():
    for level in range(5):
        images = {ta.leaf_index(ta.vertex_from_index(i, level)) for i in range(1, (1 << level) + 1)}
        assert images == set(range(1, (1 << level) + 1))


def test_leaf_index_rejects_bad_letters():
    with pytest.raises(ValueError):
        ta.leaf_index((1, 3))


def test_wreath_sigma_and_identity():
    assert ta.wreath(ta.identity(1), ta.identity(1), True) == ta.sigma(2)
    assert ta.wreath(ta.identity(1), ta.identity(1), False) == ta.identity(2)


def test_wreath_embedding_matches_small_group_table():
    # depth-2 wreath coordinates vs their published leaf cycles
    sig, ident = ta.sigma(1), ta.identity(1)
    assert np.array_equal(ta.wreath(sig, ident, False).leaf_perm(),
                          perm_from_cycles(4, [(1, 3)]))
    assert np.array_equal(ta.wreath(ident, sig, False).leaf_perm(),
                          perm_from_cycles(4, [(2, 4)]))
    assert np.array_equal(ta.wreath(sig, ident, True).leaf_perm(),
                          perm_from_cycles(4, [(1, 4, 3, 2)]))
    assert np.array_equal(ta.wreath(ident, sig, True).leaf_perm(),
                          perm_from_cycles(4, [(1, 2, 3, 4)]))
    assert np.array_equal(ta.sigma(2).leaf_perm(),
                          perm_from_cycles(4, [(1, 2), (3, 4)]))


def test_wreath_depth_mismatch():
    with pytest.raises(ta.DepthMismatchError):
        ta.wreath(ta.identity(1), ta.identity(2), False)


def test_compose_examples():
    sig = ta.sigma(3)
    assert (sig * sig).is_identity()
    a2 = ta.generator(2, 2)
    assert (a2 * a2).is_identity()
    quarter = ta.wreath(ta.identity(1), ta.sigma(1), True)
    assert np.array_equal((quarter * quarter).leaf_perm(),
                          perm_from_cycles(4, [(1, 3), (2, 4)]))


def test_compose_is_associative():
    rng = random.Random(11)
    for _ in range(60):
        depth = rng.randrange(1, 5)
        g, h, k = (random_automorphism(rng, depth) for _ in range(3))
        assert (g * h) * k == g * (h * k)


def test_leaf_perm_is_homomorphism():
    rng = random.Random(12)
    for _ in range(60):
        depth = rng.randrange(1, 6)
        g, h = random_automorphism(rng, depth), random_automorphism(rng, depth)
        assert np.array_equal((g * h).leaf_perm(), h.leaf_perm()[g.leaf_perm()])


def test_inverse_examples():
    assert ta.sigma(2).inverse() == ta.sigma(2)
    assert ta.identity(3).inverse() == ta.identity(3)
    a3 = ta.generator(3, 2)
    assert a3.inverse() == a3 * a3 * a3  # order 4 at depth 2


def test_inverse_cancels():
    rng = random.Random(13)
    for _ in range(40):
        g = random_automorphism(rng, rng.randrange(1, 6))
        assert (g * g.inverse()).is_identity()
        assert (g.inverse() * g).is_identity()


def test_restrict_examples():
    rng = random.Random(14)
    g = random_automorphism(rng, 4)
    assert g.restrict(0) == ta.identity(0)
    assert ta.generator(1, 2).restrict(1).is_identity()
    assert ta.build_named("w1").restrict(4).is_identity()
    with pytest.raises(ValueError):
        g.restrict(5)


def test_restrict_commutes_with_compose():
    rng = random.Random(15)
    for _ in range(40):
        depth = rng.randrange(1, 6)
        g, h = random_automorphism(rng, depth), random_automorphism(rng, depth)
        m = rng.randrange(0, depth + 1)
        assert (g * h).restrict(m) == g.restrict(m) * h.restrict(m)


def test_explicit_level3_permutations():
    a1, a2, a3 = (ta.generator(i, 3) for i in (1, 2, 3))
    assert np.array_equal((a1 * a1).leaf_perm(), perm_from_cycles(8, [(2, 6), (4, 8)]))
    assert np.array_equal((a2 * a2).leaf_perm(), perm_from_cycles(8, [(3, 7), (4, 8)]))
    conj = a3 * (a1 * a1) * a3.inverse()
    assert np.array_equal(conj.leaf_perm(), perm_from_cycles(8, [(1, 5), (3, 7)]))


def test_as_permutation_is_one_based():
    assert list(ta.as_permutation(ta.sigma(1))) == [2, 1]


def test_truncate_examples():
    rec = ta.MONODROMY_GENERATORS
    assert rec.truncate(["a2"], 1) == ta.sigma(1)
    assert rec.truncate(["a1"], 1) == ta.identity(1)
    for n in range(1, 10):
        assert rec.truncate(["a1", "a2", "a3"], n).is_identity()


def test_truncate_compatible_with_restrict():
    rec = ta.MONODROMY_GENERATORS
    rng = random.Random(16)
    for _ in range(20):
        word = [rng.choice(["a1", "a2", "a3"]) for _ in range(rng.randrange(0, 6))]
        n = rng.randrange(1, 7)
        m = rng.randrange(0, n + 1)
        assert rec.truncate(word, n).restrict(m) == rec.truncate(word, m)


def test_undeclared_symbol():
    with pytest.raises(ta.UndeclaredSymbolError):
        ta.WreathRecursion({"x": (("y",), (), False)})
    with pytest.raises(ta.UndeclaredSymbolError):
        ta.MONODROMY_GENERATORS.truncate(["a4"], 2)


def test_symbol_depth_cap():
    with pytest.raises(ValueError):
        ta.generator(1, ta.MAX_SYMBOL_DEPTH + 1)


def test_order_exponent_examples():
    assert ta.element_order_exponent(ta.generator(1, 1)) == 0
    assert ta.element_order_exponent(ta.generator(3, 2)) == 2
    assert ta.element_order_exponent(ta.generator(2, 5)) == 3


def test_order_exponent_against_naive_composition():
    rng = random.Random(17)
    for _ in range(30):
        g = random_automorphism(rng, rng.randrange(1, 5))
        m = ta.element_order_exponent(g)
        # independent count: multiply g by itself until the identity returns
        acc = g
        order = 1
        while not acc.is_identity():
            acc = acc * g
            order += 1
        assert order == 1 << m


def test_measured_orders_match_prediction_to_depth_12():
    for n in range(1, 13):
        for i in (1, 2, 3):
            assert (ta.element_order_exponent(ta.generator(i, n))
                    == ta.predicted_order_exponent(i, n)), (i, n)


def test_predicted_order_examples():
    assert ta.predicted_order_exponent(1, 5) == 3
    assert ta.predicted_order_exponent(2, 18) == 12
    assert ta.predicted_order_exponent(3, 1) == 1


def test_order_recurrences():
    # the exponents shift between the three generators one level at a time
    measured = {(i, n): ta.element_order_exponent(ta.generator(i, n))
                for i in (1, 2, 3) for n in range(1, 13)}
    for n in range(2, 13):
        assert measured[1, n] == measured[3, n - 1]
        assert measured[2, n] == measured[1, n - 1] + 1
        assert measured[3, n] == measured[2, n - 1] + 1


def test_named_elements():
    w1, w2 = ta.build_named("w1"), ta.build_named("w2")
    assert w1.depth == 5 and w2.depth == 5
    assert w1.restrict(4).is_identity()
    assert w2.restrict(2).is_identity()
    assert not w2.restrict(3).is_identity()
    assert ta.parity_witness(1) == ta.sigma(1)
    assert ta.build_named("s2") == ta.wreath(ta.build_named("s1"), ta.build_named("s1"), False)
    with pytest.raises(KeyError):
        ta.build_named("nope")


def test_w1_moves_exactly_two_leaf_pairs():
    w1 = ta.build_named("w1")
    assert ta.to_cycle_string(w1.leaf_perm()) == "(9 25)(13 29)"
    assert w1.apply((1, 1, 1, 2, 1)) == (1, 1, 1, 2, 2)


def test_parity_witness_recursion():
    for n in range(2, 10):
        v = ta.parity_witness(n)
        left, right = v.children()
        assert left == ta.parity_witness(n - 1)
        if n % 2 == 1:
            assert right == ta.parity_witness(n - 1)
        else:
            assert right.is_identity()


def test_from_permutation_roundtrip():
    rng = random.Random(18)
    for _ in range(60):
        g = random_automorphism(rng, rng.randrange(1, 6))
        assert ta.from_permutation(g.leaf_perm()) == g


def test_from_permutation_rejects_non_tree_maps():
    with pytest.raises(ValueError):
        ta.from_permutation([1, 0, 2, 3])  # swaps leaves across the root blocks
    with pytest.raises(ValueError):
        ta.from_permutation([0, 0, 1, 2])


def test_wreath_string_roundtrip():
    rng = random.Random(19)
    assert ta.to_wreath_string(ta.build_named("s1")) == "(id,s)"
    for _ in range(40):
        g = random_automorphism(rng, rng.randrange(1, 5))
        assert ta.parse_wreath_string(ta.to_wreath_string(g), g.depth) == g


def test_cycle_string():
    assert ta.to_cycle_string(np.array([0, 1, 2], dtype=np.intp)) == "()"
    assert ta.to_cycle_string(perm_from_cycles(4, [(1, 4, 3, 2)])) == "(1 4 3 2)"
