"""Acceptance suite: every headline claim, one pass/fail line per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they pass.
"""

import random
import time
from fractions import Fraction

import numpy as np

from monotree import (
    cyclo,
    discal,
    golden,
    imgstruct,
    preimage,
    specialize,
    treeauto as ta,
)


def _criterion(number: int, ok: bool, description: str) -> None:
    print(f"criterion {number:02d} {'PASS' if ok else 'FAIL'}: {description}")
    assert ok, f"criterion {number} failed: {description}"


def test_criterion_01_group_order_table(geometric_groups):
    start = time.monotonic()
    measured = [geometric_groups[n].order_log2() for n in range(1, 10)]
    elapsed = time.monotonic() - start
    want = [1, 3, 6, 12, 23, 45, 88, 174, 345]
    _criterion(1, measured == want,
               f"log2 orders for levels 1..9 equal {want} (chain reuse, {elapsed:.1f}s)")


def test_criterion_02_generator_orders():
    start = time.monotonic()
    ok = True
    for n in range(1, 19):
        for i in (1, 2, 3):
            m = ta.element_order_exponent(ta.generator(i, n))
            ok &= m == ta.predicted_order_exponent(i, n)
            ok &= m == golden.GENERATOR_ORDER_EXPONENTS[i][n - 1]
    elapsed = time.monotonic() - start
    _criterion(2, ok and elapsed < 60,
               f"order exponents match formulas and table for n <= 18 ({elapsed:.1f}s)")


def test_criterion_03_level3_kernel():
    check = imgstruct.verify_G3_kernel()
    _criterion(3, check.ok and check.kernel_order == 64,
               "level-3 group equals the parity kernel, both of order 64 "
               "(exhaustive over 128 elements)")


def test_criterion_04_explicit_permutations():
    from conftest import perm_from_cycles

    a1, a2, a3 = (ta.generator(i, 3) for i in (1, 2, 3))
    ok = np.array_equal((a1 * a1).leaf_perm(), perm_from_cycles(8, [(2, 6), (4, 8)]))
    ok &= np.array_equal((a2 * a2).leaf_perm(), perm_from_cycles(8, [(3, 7), (4, 8)]))
    conj = a3 * (a1 * a1) * a3.inverse()
    ok &= np.array_equal(conj.leaf_perm(), perm_from_cycles(8, [(1, 5), (3, 7)]))
    _criterion(4, bool(ok), "level-3 squares (2 6)(4 8), (3 7)(4 8) and conjugate (1 5)(3 7)")


def test_criterion_05_frattini():
    start = time.monotonic()
    check = imgstruct.verify_frattini()
    elapsed = time.monotonic() - start
    _criterion(5, check.ok and elapsed < 60,
               "depth-5 arithmetic group: Frattini index 16 and index 4 over the "
               f"geometric group ({elapsed:.1f}s)")


def test_criterion_06_normal_closure_structure():
    ok = True
    details = []
    for n in range(3, 9):
        check = imgstruct.verify_N_structure(n, seed=0, samples=200)
        ok &= check.ok
        ok &= check.index_log2[1] == (n + 1) // 2
        ok &= check.index_log2[3] == n // 2
        ok &= not any(check.sample_membership_failures.values())
        details.append(f"n={n}:{'ok' if check.ok else 'FAIL'}")
    _criterion(6, ok, "closure indices, product decompositions and 200-sample "
               "membership for levels 3..8 (" + " ".join(details) + ")")


def test_criterion_07_discriminants():
    f1 = discal.discriminant_form(1)
    ok = f1 == discal.DiscriminantForm(1, 2, 1, 0)
    f2 = discal.discriminant_form(2)
    ok &= (f2.two_exponent, f2.t_exponent, f2.one_minus_t_exponent) == (8, 3, 1)
    for n in range(3, 6):
        form = discal.discriminant_form(n)  # raises on any shape violation
        ok &= form.sign in (-1, 1)
    for n in range(1, 7):
        ok &= discal.leading_data(n).ok
        ok &= discal.resultant_power_check(n).ok
    ok &= discal.wronskian(1).leading == -2
    _criterion(7, ok, "discriminant 4t, +-2^8 t^3 (t-1), 2-power shape through level 5, "
               "leading recurrences and degree pattern through level 6")


def test_criterion_08_numeric_identities():
    start = time.monotonic()
    tree = preimage.build_tree(2 + 1j, 7)
    ok = preimage.child_product_residual(tree) < 1e-9
    ok &= preimage.grandchild_square_residual(tree) < 1e-9
    ok &= preimage.triple_product_residual(tree) < 1e-9
    for m in (2, 3, 4):
        z = preimage.eval_zeta(tree, preimage.zeta_expression(m))
        ok &= abs(z ** (1 << (m - 1)) + 1) < 1e-6
    tree5 = preimage.build_tree(2 + 1j, 5)
    ok &= preimage.act_numeric(ta.build_named("w1"), preimage.zeta_expression(3), tree5) == 5
    ok &= preimage.act_numeric(ta.build_named("w2").restrict(3),
                               preimage.zeta_expression(2), tree5) == 3
    elapsed = time.monotonic() - start
    _criterion(8, ok and elapsed < 10,
               f"offset identities < 1e-9 to depth 7, primitive roots of orders 4..16, "
               f"named actions k=5 and k=3 ({elapsed:.1f}s)")


def test_criterion_09_parity_criterion_agreement():
    rng = random.Random(0)
    disagreements = 0
    for n in (3, 5, 7):
        tree = preimage.build_tree(2 + 1j, n)
        expr = preimage.zeta_expression((n + 1) // 2)
        for _ in range(100):
            flags = np.zeros((1 << n) - 1, dtype=np.uint8)
            for j in range((1 << (n - 1)) - 1, flags.size):
                flags[j] = rng.randrange(2)
            w = ta.LevelAutomorphism(n, flags)
            if cyclo.kernel_criterion(w) != (preimage.act_numeric(w, expr, tree) == 1):
                disagreements += 1
    _criterion(9, disagreements == 0,
               "combinatorial fixing criterion agrees with the numeric action on "
               "100 seeded elements per odd level in {3, 5, 7}")


def test_criterion_10_rigidity():
    ok = imgstruct.semi_rigidity_bruteforce(2).ok
    ok &= imgstruct.semi_rigidity_bruteforce(3).ok
    ok &= imgstruct.conjugate_sections_check(2)
    ok &= imgstruct.conjugate_sections_check(3)
    ok &= imgstruct.product_identity_holds(9)
    _criterion(10, ok, "semi-rigidity exhaustive at depths 2 and 3, section conjugacy, "
               "and the generator product identity through depth 9")


def test_criterion_11_log_order_bookkeeping(geometric_groups):
    report = cyclo.en_sequence(30)
    ok = report.recurrence_ok and report.increment_pattern_ok
    measured = [geometric_groups[n].order_log2() for n in range(1, 10)]
    ok &= report.values[:9] == measured
    estimate = Fraction(measured[8], (1 << 9) - 1)
    ok &= estimate == Fraction(345, 511)
    gap = abs(estimate - Fraction(2, 3))
    _criterion(11, ok, f"closed form, recurrence and increments agree to level 30; "
               f"density at level 9 is 345/511 (|ratio - 2/3| = {gap})")


def test_criterion_12_specialization():
    rng = random.Random(0)
    ok = specialize.degree16_condition(Fraction(7)) is True
    ok &= specialize.degree16_condition(Fraction(5)) is False
    ok &= specialize.degree16_condition(Fraction(2)) is False
    disagreements = 0
    for _ in range(500):
        num = rng.randrange(-10**6, 10**6)
        den = rng.randrange(1, 10**6)
        a = Fraction(num, den)
        if a in (0, 1):
            continue
        if specialize.degree16_condition(a) != specialize.brute_force_degree16(a):
            disagreements += 1
    ok &= disagreements == 0
    _criterion(12, ok, "degree-16 criterion matches the subset-product oracle on "
               "500 seeded rationals; verdicts for a = 7, 5, 2 are True, False, False")
