"""Parity bookkeeping for the cyclotomic action on trivially-restricted elements.

For an odd level ``n`` with ``j = (n+1)/2``, an automorphism that is trivial
down to level ``n-1`` fixes the constructed primitive ``2^j``-th root of unity
exactly when the parities it induces on the two marked vertex families agree
mod 2.  This module evaluates that criterion combinatorially; the numeric
counterpart lives in :mod:`monotree.preimage` and the two are compared in the
test-suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .permgrp import PermGroup, TimeBudget, pointwise_stabilizer
from .treeauto import LevelAutomorphism, Vertex, parity_witness


def par(w: LevelAutomorphism, beta: Vertex) -> int:
    """0 when ``w`` carries the first child of ``beta`` to the first child of
    ``w(beta)``, else 1."""
    if len(beta) > w.depth - 1:
        raise ValueError("vertex too deep: its children leave the tree")
    return 0 if w.apply((*beta, 1)) == (*w.apply(beta), 1) else 1


def marked_family(first_letter: int, n: int) -> list[Vertex]:
    """The level-``n-1`` vertex family ``(first, s1, 1, s2, 1, ..., 1, s_{j-1})``
    used by the fixing criterion at odd level ``n``."""
    if n < 3 or n % 2 == 0:
        raise ValueError("marked families exist for odd levels >= 3")
    j = (n + 1) // 2
    out = []
    for choices in itertools.product((1, 2), repeat=j - 1):
        path: list[int] = [first_letter]
        for k, s in enumerate(choices):
            if k:
                path.append(1)
            path.append(s)
        out.append(tuple(path))
    return out


def parity_sums(w: LevelAutomorphism) -> tuple[int, int]:
    """Sums of :func:`par` over the two marked families (first letter 1, 2)."""
    n = w.depth
    left = sum(par(w, beta) for beta in marked_family(1, n))
    right = sum(par(w, beta) for beta in marked_family(2, n))
    return left, right


def kernel_criterion(w: LevelAutomorphism) -> bool:
    """Whether a trivially-restricted element at odd depth fixes the
    constructed root of unity: the two marked parity sums agree mod 2.

    Raises for even depth (the condition is vacuous there, see
    :func:`criterion_verdict`) and for elements that move level ``n-1``.
    """
    n = w.depth
    if n % 2 == 0:
        raise ValueError("criterion is vacuous at even depth; use criterion_verdict")
    if n < 3:
        raise ValueError("criterion needs depth >= 3")
    if not w.restrict(n - 1).is_identity():
        raise ValueError("element must act trivially above the last level")
    left, right = parity_sums(w)
    return (left - right) % 2 == 0


@dataclass
class CriterionVerdict:
    n: int
    verdict: str  # "holds" | "fails" | "vacuous"
    left_sum: int | None
    right_sum: int | None

    def to_json(self) -> dict:
        return {"n": self.n, "criterion": self.verdict,
                "left_sum": self.left_sum, "right_sum": self.right_sum}


def criterion_verdict(w: LevelAutomorphism) -> CriterionVerdict:
    """Criterion with the even-depth case reported as distinct from "holds":
    at even depth the marked vertices sit at level ``n-2`` where a
    trivially-restricted element cannot move anything."""
    n = w.depth
    if not w.restrict(n - 1).is_identity():
        raise ValueError("element must act trivially above the last level")
    if n % 2 == 0:
        return CriterionVerdict(n, "vacuous", None, None)
    left, right = parity_sums(w)
    return CriterionVerdict(n, "holds" if (left - right) % 2 == 0 else "fails",
                            left, right)


# -- log-order bookkeeping ------------------------------------------------------


def en_closed_form(n: int) -> int:
    """Closed form for the expected log2 order at level ``n``."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    return (1 << n) - 1 - sum((1 << (n - 1 - m)) * (m // 2) for m in range(n))


@dataclass
class EnReport:
    values: list[int]  # e_1 .. e_n
    increments: list[int]  # s_n = e_n - e_{n-1}, aligned with values
    recurrence_ok: bool
    increment_pattern_ok: bool

    def to_json(self) -> dict:
        return {"values": self.values, "increments": self.increments,
                "recurrence_ok": self.recurrence_ok,
                "increment_pattern_ok": self.increment_pattern_ok}


def en_sequence(n_max: int) -> EnReport:
    """Closed-form values with the recurrence and increment-pattern checks.

    Verifies ``e_n = 2 e_{n-1} - floor((n-3)/2)`` for all levels and the
    doubling defect ``s_n - 2 s_{n-1}`` being 0 (even ``n``) or -1 (odd) from
    level 4 on.
    """
    if n_max < 1:
        raise ValueError("need at least one level")
    values = [en_closed_form(n) for n in range(1, n_max + 1)]
    with_zero = [0] + values
    recurrence_ok = all(
        with_zero[n] == 2 * with_zero[n - 1] - (n - 3) // 2
        for n in range(1, n_max + 1)
    )
    increments = [with_zero[n] - with_zero[n - 1] for n in range(1, n_max + 1)]
    pattern_ok = True
    for n in range(4, n_max + 1):
        defect = increments[n - 1] - 2 * increments[n - 2]
        pattern_ok &= defect == (0 if n % 2 == 0 else -1)
    return EnReport(values, increments, recurrence_ok, pattern_ok)


# -- the level kernel U_n and its doubling index ----------------------------------


def _extended_generators(n: int) -> tuple[list[np.ndarray], int, int]:
    """Leaf generators extended over the level-``n-1`` vertices.

    Points ``0 .. 2^(n-1)-1`` are the level-``n-1`` vertices (a vertex is the
    common prefix of its two leaves, i.e. the leaf number without the top
    bit), followed by the ``2^n`` leaves.
    """
    from .imgstruct import leaf_generators

    blocks = 1 << (n - 1)
    leaves = 1 << n
    out = []
    for g in leaf_generators(n):
        ext = np.empty(blocks + leaves, dtype=np.intp)
        ext[:blocks] = g[np.arange(blocks, dtype=np.intp)] & (blocks - 1)
        ext[blocks:] = blocks + g
        out.append(ext)
    return out, blocks, leaves


def level_kernel(n: int, budget: TimeBudget | None = None) -> PermGroup:
    """The subgroup of the level-``n`` group acting trivially above the last
    level, extracted as a pointwise stabilizer over the extended domain."""
    if n < 2:
        raise ValueError("level kernel needs n >= 2")
    ext_gens, blocks, leaves = _extended_generators(n)
    stab = pointwise_stabilizer(ext_gens, blocks + leaves, range(blocks),
                                budget=budget)
    leaf_gens = [s[blocks:] - blocks for s in stab]
    return PermGroup.from_generators(leaf_gens, leaves, budget=budget)


@dataclass
class UIndexCheck:
    n: int
    kernel_log2: int
    previous_kernel_log2: int
    index_log2: int
    expected_index_log2: int
    contained_in_product: bool
    witness_ok: bool

    @property
    def ok(self) -> bool:
        return (self.index_log2 == self.expected_index_log2
                and self.contained_in_product and self.witness_ok)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "kernel_log2": self.kernel_log2,
            "previous_kernel_log2": self.previous_kernel_log2,
            "index_log2": self.index_log2,
            "expected_index_log2": self.expected_index_log2,
            "contained_in_product": self.contained_in_product,
            "witness_ok": self.witness_ok,
            "ok": self.ok,
        }


def u_index_check(n: int, budget: TimeBudget | None = None) -> UIndexCheck:
    """Index of the level kernel inside the product of two copies of the
    previous one: expected 2 at odd levels, 1 at even levels, witnessed by
    ``(v_{n-1}, id)`` falling outside the kernel exactly at odd levels."""
    from .imgstruct import build_G, embed_pair

    if not 3 <= n <= 8:
        raise ValueError("the doubling index is tabulated for levels 3..8")
    U = level_kernel(n, budget)
    U_prev = level_kernel(n - 1, budget)
    half_identity = np.arange(1 << (n - 1), dtype=np.intp)
    product_gens = ([embed_pair(u, half_identity) for u in U_prev.generators]
                    + [embed_pair(half_identity, u) for u in U_prev.generators])
    product = PermGroup.from_generators(product_gens, 1 << n, budget=budget)
    contained = product.contains_group(U)
    index = product.order_log2() - U.order_log2()

    # cross-check the kernel orders against the plain group orders
    g_log = build_G(n, budget).order_log2()
    gm_log = build_G(n - 1, budget).order_log2()
    if U.order_log2() != g_log - gm_log:
        raise AssertionError("kernel order disagrees with the order quotient")

    witness = embed_pair(parity_witness(n - 1).leaf_perm(), half_identity)
    in_kernel = U.contains(witness)
    witness_ok = in_kernel == (n % 2 == 0) and product.contains(witness)
    return UIndexCheck(
        n=n,
        kernel_log2=U.order_log2(),
        previous_kernel_log2=U_prev.order_log2(),
        index_log2=index,
        expected_index_log2=0 if n % 2 == 0 else 1,
        contained_in_product=contained,
        witness_ok=witness_ok,
    )
