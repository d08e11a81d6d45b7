"""Finite-level group assembly and structural verification.

Builds the level-``n`` geometric group ``G_n = <a1, a2, a3>`` and the depth-5
arithmetic group ``<a1, a2, w1, w2>`` as concrete permutation groups, and
checks the structural statements about them: the level-3 parity kernel, the
normal-closure decompositions, the order recurrence, the Frattini index and
the small-depth rigidity statements.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import golden
from .permgrp import (
    BudgetExceededError,
    PermGroup,
    TimeBudget,
    cyclic_quotient_exponent,
    invert,
)
from .treeauto import (
    LevelAutomorphism,
    build_named,
    generator,
    identity,
    wreath,
)


# -- leaf-permutation plumbing -------------------------------------------------


def leaf_generators(n: int) -> list[np.ndarray]:
    """0-based leaf permutations of a1, a2, a3 at depth ``n``."""
    return [generator(i, n).leaf_perm() for i in (1, 2, 3)]


def embed_pair(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Leaf permutation of ``(left, right)`` one level up.

    The first tree letter is the low bit of the leaf number, so the left
    section acts on even leaves and the right one on odd leaves.
    """
    if left.size != right.size:
        raise ValueError("sections must have equal degree")
    out = np.empty(2 * left.size, dtype=np.intp)
    out[0::2] = left << 1
    out[1::2] = (right << 1) | 1
    return out


def split_pair(perm: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`embed_pair`; requires a level-1-trivial permutation."""
    idx = np.arange(perm.size, dtype=np.intp)
    if ((perm ^ idx) & 1).any():
        raise ValueError("permutation acts nontrivially on level 1")
    return perm[0::2] >> 1, perm[1::2] >> 1


def is_level1_trivial(perm: np.ndarray) -> bool:
    return not ((perm ^ np.arange(perm.size, dtype=np.intp)) & 1).any()


def random_word_element(n: int, rng: random.Random,
                        length: int | None = None) -> LevelAutomorphism:
    """Random product of the generators and their inverses (word length 2n)."""
    length = 2 * n if length is None else length
    out = identity(n)
    for _ in range(length):
        i = rng.randrange(1, 4)
        g = generator(i, n)
        if rng.randrange(2):
            g = g.inverse()
        out = out * g
    return out


def random_subgroup_element(gens: Sequence[np.ndarray], degree: int,
                            rng: random.Random, length: int) -> np.ndarray:
    """Random word over ``gens`` and their inverses, as a permutation."""
    out = np.arange(degree, dtype=np.intp)
    if not gens:
        return out
    for _ in range(length):
        g = gens[rng.randrange(len(gens))]
        if rng.randrange(2):
            g = invert(g)
        out = g[out]
    return out


# -- group builders -------------------------------------------------------------


MAX_GROUP_LEVEL = 12  # the opt-in ceiling; deeper chains are out of scope


def build_G(n: int, budget: TimeBudget | None = None) -> PermGroup:
    """The level-``n`` group generated by the three tree generators."""
    if not 1 <= n <= MAX_GROUP_LEVEL:
        raise ValueError(f"group levels supported for 1 <= n <= {MAX_GROUP_LEVEL}")
    return PermGroup.from_generators(leaf_generators(n), 1 << n, budget=budget)


def full_group_generators(n: int) -> list[np.ndarray]:
    """Generators of the full automorphism group at depth ``n``: one swap on
    the leftmost vertex of each level (conjugation spreads them everywhere)."""
    gens = []
    for level in range(n):
        g = identity(n)
        flags = g.flags.copy()
        flags[(1 << level) - 1] = 1
        gens.append(LevelAutomorphism(n, flags).leaf_perm())
    return gens


def build_W(n: int, budget: TimeBudget | None = None) -> PermGroup:
    """The full tree-automorphism group at depth ``n`` (order ``2^(2^n - 1)``)."""
    return PermGroup.from_generators(full_group_generators(n), 1 << n, budget=budget)


def arith5_generators() -> list[np.ndarray]:
    return [
        generator(1, 5).leaf_perm(),
        generator(2, 5).leaf_perm(),
        build_named("w1").leaf_perm(),
        build_named("w2").leaf_perm(),
    ]


def build_Garith5(budget: TimeBudget | None = None) -> PermGroup:
    """Depth-5 arithmetic group ``<a1, a2, w1, w2>``."""
    return PermGroup.from_generators(arith5_generators(), 32, budget=budget)


def normal_closure_of_generator(G: PermGroup, i: int, n: int,
                                budget: TimeBudget | None = None) -> PermGroup:
    return G.normal_closure([generator(i, n).leaf_perm()], budget=budget)


# -- the level-3 parity homomorphism ---------------------------------------------


def sgn3(g: LevelAutomorphism) -> int:
    """Parity character on depths >= 3: the sign of the number of swaps in the
    portrait truncated to the first three levels."""
    if g.depth < 3:
        raise ValueError("the parity character needs depth >= 3")
    swaps = int(g.flags[:7].sum())
    return -1 if swaps % 2 else 1


def enumerate_full_group(depth: int) -> list[LevelAutomorphism]:
    """All ``2^(2^depth - 1)`` automorphisms of a small depth (<= 4 sensible)."""
    size = (1 << depth) - 1
    if size > 20:
        raise ValueError("full enumeration only supported for tiny depths")
    out = []
    for bits in range(1 << size):
        flags = np.fromiter(((bits >> k) & 1 for k in range(size)), dtype=np.uint8,
                            count=size)
        out.append(LevelAutomorphism(depth, flags))
    return out


@dataclass
class KernelCheck:
    kernel_order: int
    group_order: int
    kernel_equals_group: bool
    all_members_positive: bool

    @property
    def ok(self) -> bool:
        return (self.kernel_equals_group and self.all_members_positive
                and self.kernel_order == golden.LEVEL3_KERNEL_ORDER)

    def to_json(self) -> dict:
        return {
            "kernel_order": self.kernel_order,
            "group_order": self.group_order,
            "kernel_equals_group": self.kernel_equals_group,
            "all_members_positive": self.all_members_positive,
            "ok": self.ok,
        }


def verify_G3_kernel() -> KernelCheck:
    """Exhaustively compare the level-3 group with the parity kernel."""
    G3 = build_G(3)
    kernel = 0
    group = 0
    equal = True
    members_positive = True
    for g in enumerate_full_group(3):
        in_kernel = sgn3(g) == 1
        in_group = G3.contains(g.leaf_perm())
        kernel += in_kernel
        group += in_group
        if in_kernel != in_group:
            equal = False
        if in_group and not in_kernel:
            members_positive = False
    return KernelCheck(kernel, group, equal, members_positive)


# -- structural checks on the normal closures -------------------------------------


@dataclass
class NStructureCheck:
    n: int
    index_log2: dict[int, int]
    index_golden_ok: bool
    product_decomposition_ok: bool
    level1_kernel_ok: bool
    sample_membership_failures: dict[int, int]
    samples: int
    cyclic_exponent_ok: bool
    inequalities_ok: bool
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return (self.index_golden_ok and self.product_decomposition_ok
                and self.level1_kernel_ok and self.cyclic_exponent_ok
                and self.inequalities_ok
                and not any(self.sample_membership_failures.values()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "index_log2": {str(k): v for k, v in sorted(self.index_log2.items())},
            "index_golden_ok": self.index_golden_ok,
            "product_decomposition_ok": self.product_decomposition_ok,
            "level1_kernel_ok": self.level1_kernel_ok,
            "sample_membership_failures": {
                str(k): v for k, v in sorted(self.sample_membership_failures.items())
            },
            "samples": self.samples,
            "cyclic_exponent_ok": self.cyclic_exponent_ok,
            "inequalities_ok": self.inequalities_ok,
            "witness": self.witness,
            "ok": self.ok,
        }


def verify_N_structure(n: int, seed: int = 0, samples: int = 200,
                       budget: TimeBudget | None = None) -> NStructureCheck:
    """Check the closure decompositions and index pattern at level ``n``.

    Verifies, with chains as the workhorse:

    * ``N_1`` at level n equals the product of two copies of ``N_3`` at level
      n-1 (generator double-inclusion plus order equality);
    * the level-1-trivial part of the group is that product extended by the
      diagonal image of ``a1`` (order count);
    * sampled elements of ``N_2``/``N_3`` that act trivially on level 1 lie in
      the matching product-with-antidiagonal subgroup;
    * the measured indices satisfy the published pattern and the chain of
      quotient inequalities, and each quotient is cyclic.
    """
    if n < 2:
        raise ValueError("structure checks need level >= 2")
    rng = random.Random(seed)
    G = build_G(n, budget)
    Gm = build_G(n - 1, budget)
    closures = {i: normal_closure_of_generator(G, i, n, budget) for i in (1, 2, 3)}
    closures_m = {i: normal_closure_of_generator(Gm, i, n - 1, budget) for i in (1, 2, 3)}
    idx = {i: G.index_log2(closures[i]) for i in (1, 2, 3)}
    idx_m = {i: Gm.index_log2(closures_m[i]) for i in (1, 2, 3)}

    witness = None
    if n >= 3:
        index_golden_ok = (idx[1] == golden.n1_index_log2(n)
                           and idx[3] == golden.n3_index_log2(n))
    else:
        index_golden_ok = True

    # (i) N_1 = N_3(level n-1) x N_3(level n-1)
    n3m = closures_m[3]
    product_ok = True
    for g in closures[1].generators:
        if not is_level1_trivial(g):
            product_ok = False
            witness = "closure generator moves level 1"
            break
        u, v = split_pair(g)
        if not (n3m.contains(u) and n3m.contains(v)):
            product_ok = False
            witness = "closure generator has a section outside the smaller closure"
            break
    product_gens = ([embed_pair(u, np.arange(1 << (n - 1), dtype=np.intp))
                     for u in n3m.generators]
                    + [embed_pair(np.arange(1 << (n - 1), dtype=np.intp), u)
                       for u in n3m.generators])
    if product_ok:
        for g in product_gens:
            if not closures[1].contains(g):
                product_ok = False
                witness = "product generator missing from the closure"
                break
    if product_ok:
        product_ok = closures[1].order_log2() == 2 * n3m.order_log2()
        if not product_ok:
            witness = "order mismatch between closure and product"

    # (ii) level-1-trivial part of G equals the product extended by (a1, a1)
    a1m = generator(1, n - 1).leaf_perm()
    ext_gens = product_gens + [embed_pair(a1m, a1m)]
    H = PermGroup.from_generators(ext_gens, 1 << n, budget=budget)
    kernel_ok = all(G.contains(g) for g in ext_gens)
    kernel_ok = kernel_ok and H.order_log2() == G.order_log2() - 1
    if not kernel_ok and witness is None:
        witness = "level-1 kernel order mismatch"

    # (iii) sampled N_i elements trivial on level 1 lie in the antidiagonal product
    failures = {2: 0, 3: 0}
    for i in (2, 3):
        nim = closures_m[i - 1]
        ai_m = generator(i, n - 1).leaf_perm()
        rhs_gens = ([embed_pair(u, np.arange(1 << (n - 1), dtype=np.intp))
                     for u in nim.generators]
                    + [embed_pair(np.arange(1 << (n - 1), dtype=np.intp), u)
                       for u in nim.generators]
                    + [embed_pair(ai_m, invert(ai_m))])
        rhs = PermGroup.from_generators(rhs_gens, 1 << n, budget=budget)
        ai_inv = invert(generator(i, n).leaf_perm())
        gens_i = closures[i].generators
        for _ in range(samples):
            g = random_subgroup_element(gens_i, 1 << n, rng, 2 * n)
            if not is_level1_trivial(g):
                g = ai_inv[g]
            if not rhs.contains(g):
                failures[i] += 1
                if witness is None:
                    witness = f"sampled element of closure {i} escaped the product"

    # cyclic quotients, witnessed by the doubling exponent
    cyclic_ok = True
    try:
        for i in (1, 2, 3):
            j = 2 if i != 2 else 1
            k = cyclic_quotient_exponent(G, closures[i], generator(j, n).leaf_perm())
            if k != idx[i]:
                cyclic_ok = False
    except Exception:
        cyclic_ok = False

    # quotient-size inequalities linking consecutive levels
    ineq_ok = (idx[1] >= idx_m[3] + 1
               and idx[2] >= idx_m[1]
               and idx[3] >= idx_m[2]
               and all(idx[i] <= idx_m[i] + 1 for i in (1, 2, 3)))

    return NStructureCheck(
        n=n,
        index_log2=idx,
        index_golden_ok=index_golden_ok,
        product_decomposition_ok=product_ok,
        level1_kernel_ok=kernel_ok,
        sample_membership_failures=failures,
        samples=samples,
        cyclic_exponent_ok=cyclic_ok,
        inequalities_ok=ineq_ok,
        witness=witness,
    )


# -- arithmetic group at depth 5 -----------------------------------------------------


@dataclass
class FrattiniCheck:
    garith_order_log2: int
    index_over_geometric_log2: int
    frattini_index_log2: int
    geometric_is_normal: bool
    contains_geometric: bool

    @property
    def ok(self) -> bool:
        return (self.garith_order_log2 == golden.GARITH5_ORDER_LOG2
                and self.index_over_geometric_log2 == golden.GARITH5_INDEX_OVER_G_LOG2
                and self.frattini_index_log2 == golden.GARITH5_FRATTINI_INDEX_LOG2
                and self.geometric_is_normal and self.contains_geometric)

    def to_json(self) -> dict:
        return {
            "garith_order_log2": self.garith_order_log2,
            "index_over_geometric_log2": self.index_over_geometric_log2,
            "frattini_index_log2": self.frattini_index_log2,
            "geometric_is_normal": self.geometric_is_normal,
            "contains_geometric": self.contains_geometric,
            "ok": self.ok,
        }


def verify_frattini(budget: TimeBudget | None = None) -> FrattiniCheck:
    GA = build_Garith5(budget)
    G5 = build_G(5, budget)
    phi = GA.frattini_subgroup(budget)
    return FrattiniCheck(
        garith_order_log2=GA.order_log2(),
        index_over_geometric_log2=GA.index_log2(G5),
        frattini_index_log2=GA.index_log2(phi),
        geometric_is_normal=G5.is_normalized_by(GA.generators),
        contains_geometric=GA.contains_group(G5),
    )


# -- order table and the growth recurrence ----------------------------------------


@dataclass
class LevelReport:
    n: int
    g_order_log2: int
    golden_log2: int | None
    conjecture_delta: int | None
    closed_form_delta: int
    hausdorff_estimate: Fraction
    garith_order_log2: int | None = None
    n1_index_log2: int | None = None
    n2_index_log2: int | None = None
    n3_index_log2: int | None = None

    @property
    def matches_golden(self) -> bool:
        return self.golden_log2 is None or self.g_order_log2 == self.golden_log2

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g_order_log2": self.g_order_log2,
            "golden_log2": self.golden_log2,
            "matches_golden": self.matches_golden,
            "conjecture_delta": self.conjecture_delta,
            "closed_form_delta": self.closed_form_delta,
            "hausdorff_estimate": str(self.hausdorff_estimate),
            "garith_order_log2": self.garith_order_log2,
            "n1_index_log2": self.n1_index_log2,
            "n2_index_log2": self.n2_index_log2,
            "n3_index_log2": self.n3_index_log2,
        }


@dataclass
class GroupTable:
    rows: list[LevelReport] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.matches_golden for row in self.rows)


def group_table(n_max: int, budget: TimeBudget | None = None,
                with_n_indices: bool = False,
                with_garith: bool = True) -> GroupTable:
    """Measured orders for levels ``1..n_max`` against the reference table.

    The growth recurrence is reported as a measured-vs-predicted delta per
    level, never assumed.  Levels that run out of budget are listed as skipped.
    """
    from .cyclo import en_closed_form

    table = GroupTable()
    prev_log = 0  # depth-0 group is trivial
    for n in range(1, n_max + 1):
        if budget is not None and budget.exceeded():
            table.skipped.append(n)
            continue
        try:
            G = build_G(n, budget)
            e_n = G.order_log2()
            garith = None
            if with_garith and n == 5:
                garith = build_Garith5(budget).order_log2()
            idx1 = idx2 = idx3 = None
            if with_n_indices and n <= 8:
                idx1 = G.index_log2(normal_closure_of_generator(G, 1, n, budget))
                idx2 = G.index_log2(normal_closure_of_generator(G, 2, n, budget))
                idx3 = G.index_log2(normal_closure_of_generator(G, 3, n, budget))
        except BudgetExceededError:
            table.skipped.append(n)
            continue
        delta = e_n - (2 * prev_log - (n - 3) // 2)
        table.rows.append(LevelReport(
            n=n,
            g_order_log2=e_n,
            golden_log2=golden.GROUP_ORDER_LOG2.get(n),
            conjecture_delta=delta,
            closed_form_delta=e_n - en_closed_form(n),
            hausdorff_estimate=Fraction(e_n, (1 << n) - 1),
            garith_order_log2=garith,
            n1_index_log2=idx1,
            n2_index_log2=idx2,
            n3_index_log2=idx3,
        ))
        prev_log = e_n
    return table


# -- small dense groups for the exhaustive depth <= 3 statements --------------------


class _DenseGroup:
    """A small group materialized as id-indexed tables (products, inverses,
    conjugacy classes).  Only sensible for a few hundred elements."""

    def __init__(self, elements: list[LevelAutomorphism]):
        perms = [tuple(int(x) for x in g.leaf_perm()) for g in elements]
        self.elements = elements
        self.index = {p: i for i, p in enumerate(perms)}
        self.perms = perms
        size = len(perms)
        self.mul = np.empty((size, size), dtype=np.int32)
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                self.mul[i, j] = self.index[tuple(q[x] for x in p)]
        self.inv = np.empty(size, dtype=np.int32)
        for i, p in enumerate(perms):
            inv = [0] * len(p)
            for a, b in enumerate(p):
                inv[b] = a
            self.inv[i] = self.index[tuple(inv)]

    def id_of(self, g: LevelAutomorphism) -> int:
        return self.index[tuple(int(x) for x in g.leaf_perm())]

    def conjugacy_class(self, gid: int) -> set[int]:
        return {int(self.mul[self.mul[self.inv[w], gid], w])
                for w in range(len(self.perms))}

    def conjugators_onto(self, gid: int) -> dict[int, list[int]]:
        """Map target -> all w with w * g * w^-1 == target."""
        out: dict[int, list[int]] = {}
        for w in range(len(self.perms)):
            target = int(self.mul[self.mul[w, gid], self.inv[w]])
            out.setdefault(target, []).append(w)
        return out


def _dense_full_group(depth: int) -> _DenseGroup:
    return _DenseGroup(enumerate_full_group(depth))


@dataclass
class RigidityCheck:
    n: int
    triples_checked: int
    ok: bool
    counterexample: str | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "triples_checked": self.triples_checked,
                "ok": self.ok, "counterexample": self.counterexample}


def semi_rigidity_bruteforce(n: int) -> RigidityCheck:
    """Exhaustive semi-rigidity at depth ``n <= 3``.

    For every triple ``(b1, b2, b3)`` with ``b_i`` conjugate (in the full
    group) to ``a_i`` and ``b1 b2 b3 = id``, look for a single ``w`` and
    group elements ``x_i`` with ``b_i = (w x_i) a_i (w x_i)^-1``.
    """
    if n not in (1, 2, 3):
        raise ValueError("exhaustive rigidity is tabulated only for n in 1..3")
    dense = _dense_full_group(n)
    G = build_G(n)
    in_g = np.fromiter(
        (G.contains(np.array(p, dtype=np.intp)) for p in dense.perms),
        dtype=bool, count=len(dense.perms),
    )
    gens = [dense.id_of(generator(i, n)) for i in (1, 2, 3)]
    conjugators = [dense.conjugators_onto(g) for g in gens]
    classes = [set(conj) for conj in conjugators]
    size = len(dense.perms)
    mul, inv = dense.mul, dense.inv

    triples = 0
    for b1, b2 in itertools.product(sorted(classes[0]), sorted(classes[1])):
        b3 = int(inv[mul[b1, b2]])
        if b3 not in classes[2]:
            continue
        triples += 1
        found = False
        for w in range(size):
            winv = int(inv[w])
            if all(any(in_g[mul[winv, u]] for u in conj[b])
                   for conj, b in zip(conjugators, (b1, b2, b3))):
                found = True
                break
        if not found:
            return RigidityCheck(n, triples, False,
                                 counterexample=f"triple ids ({b1}, {b2}, {b3})")
    return RigidityCheck(n, triples, True)


def conjugate_sections_check(n: int) -> bool:
    """Exhaustive check at depth ``n``: if ``(u, v) s`` is conjugate to
    ``(id, w) s`` in the full group then ``u v`` is conjugate to ``w`` one
    level down."""
    if n not in (2, 3):
        raise ValueError("section-conjugacy check is tabulated for n in {2, 3}")
    dense = _dense_full_group(n)
    dense_small = _dense_full_group(n - 1)
    small = enumerate_full_group(n - 1)

    class_of = {}
    remaining = set(range(len(dense.perms)))
    while remaining:
        rep = min(remaining)
        cls = dense.conjugacy_class(rep)
        for member in cls:
            class_of[member] = rep
        remaining -= cls
    class_of_small = {}
    remaining = set(range(len(dense_small.perms)))
    while remaining:
        rep = min(remaining)
        cls = dense_small.conjugacy_class(rep)
        for member in cls:
            class_of_small[member] = rep
        remaining -= cls

    for u, v in itertools.product(small, repeat=2):
        lhs = dense.id_of(wreath(u, v, True))
        uv = dense_small.id_of(u * v)
        for w in small:
            rhs = dense.id_of(wreath(identity(n - 1), w, True))
            if class_of[lhs] == class_of[rhs]:
                if class_of_small[uv] != class_of_small[dense_small.id_of(w)]:
                    return False
    return True


def product_identity_holds(n_max: int = 9) -> bool:
    """``a1 a2 a3`` truncates to the identity at every level up to ``n_max``."""
    from .treeauto import MONODROMY_GENERATORS

    return all(
        MONODROMY_GENERATORS.truncate(["a1", "a2", "a3"], n).is_identity()
        for n in range(1, n_max + 1)
    )
