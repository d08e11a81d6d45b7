"""Deterministic permutation-group kernel based on stabilizer chains.

Permutations are 0-based numpy index arrays; ``compose(g, h)`` applies ``g``
first, then ``h`` (``h[g]``), matching the left-to-right convention of
:mod:`monotree.treeauto`.

The chain is built with the classic deterministic Schreier-Sims procedure:
base points are the smallest moved points in natural order (an optional
prefix can be forced, which is how pointwise stabilizers are extracted), new
strong generators are sift residues, and per-level watermarks make sure every
Schreier generator is inspected exactly once.  No randomization anywhere, so
two runs over the same generators produce identical chains.

All groups in this package are 2-groups; orders are therefore tracked as
``log2`` integers (the depth-12 group has order ``2**2736``, far beyond any
fixed-width type) and a non-2-power orbit size is reported as a hard error.
"""

from __future__ import annotations

import time
from collections import deque
from typing import Iterable, Sequence

import numpy as np


class MalformedPermutationError(ValueError):
    """Input that is not a permutation of ``0..degree-1``."""


class NonTwoPowerOrderError(ArithmeticError):
    """A chain orbit size was not a power of two (construction bug signal)."""


class NotASubgroupError(ValueError):
    """Subgroup relation required by an operation does not hold."""


class BudgetExceededError(RuntimeError):
    """A configured time budget ran out mid-computation."""


class TimeBudget:
    """Wall-clock budget; ``None`` seconds means unlimited."""

    def __init__(self, seconds: float | None):
        self.seconds = seconds
        self._deadline = None if seconds is None else time.monotonic() + seconds

    def check(self, what: str = "computation") -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceededError(f"time budget exhausted during {what}")

    def exceeded(self) -> bool:
        return self._deadline is not None and time.monotonic() > self._deadline


def compose(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Apply ``g`` then ``h``."""
    return h[g]


def invert(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = np.arange(g.size, dtype=g.dtype)
    return inv


def conjugate(g: np.ndarray, s: np.ndarray, s_inv: np.ndarray | None = None) -> np.ndarray:
    """``s^-1 g s`` under left-to-right application."""
    if s_inv is None:
        s_inv = invert(s)
    return s[g[s_inv]]


def _as_perm(perm: Sequence[int] | np.ndarray, degree: int) -> np.ndarray:
    arr = np.asarray(perm, dtype=np.intp)
    if arr.shape != (degree,):
        raise MalformedPermutationError(
            f"expected a permutation of degree {degree}, got shape {arr.shape}"
        )
    seen = np.zeros(degree, dtype=bool)
    if arr.min(initial=0) < 0 or arr.max(initial=-1) >= degree:
        raise MalformedPermutationError("permutation entries out of range")
    seen[arr] = True
    if not seen.all():
        raise MalformedPermutationError("permutation entries are not distinct")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


class _Level:
    """One stabilizer level: base point, its generators, orbit and transversal."""

    __slots__ = ("base", "gens", "done", "orbit", "orbit_pos", "u", "uinv")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.gens: list[np.ndarray] = []
        self.done: list[int] = []  # per-gen count of orbit points already tested
        ident = np.arange(degree, dtype=np.intp)
        self.orbit: list[int] = [base]
        self.orbit_pos: dict[int, int] = {base: 0}
        self.u: list[np.ndarray] = [ident]
        self.uinv: list[np.ndarray] = [ident]


class _ChainBuilder:
    def __init__(self, degree: int, base_prefix: Sequence[int] = (),
                 budget: TimeBudget | None = None):
        self.degree = degree
        self.budget = budget
        self.identity = np.arange(degree, dtype=np.intp)
        self._id_bytes = self.identity.tobytes()
        self.levels: list[_Level] = [_Level(b, degree) for b in base_prefix]
        self._forced = len(self.levels)
        self._ticks = 0

    # -- plumbing ----------------------------------------------------------

    def _tick(self) -> None:
        self._ticks += 1
        if self.budget is not None and self._ticks % 512 == 0:
            self.budget.check("stabilizer chain construction")

    def _is_identity(self, p: np.ndarray) -> bool:
        return p.tobytes() == self._id_bytes

    def _sift_from(self, p: np.ndarray, start: int) -> tuple[np.ndarray | None, int]:
        """Reduce ``p`` through levels ``start..``; residue ``None`` = member."""
        r = p
        for idx in range(start, len(self.levels)):
            lv = self.levels[idx]
            pos = lv.orbit_pos.get(int(r[lv.base]))
            if pos is None:
                return r, idx
            if pos:  # position 0 carries the identity representative
                r = lv.uinv[pos][r]
        if self._is_identity(r):
            return None, len(self.levels)
        return r, len(self.levels)

    def _extend_orbit_with_gen(self, lv: _Level, gen_index: int) -> None:
        gens = lv.gens
        new_from = len(lv.orbit)
        s = gens[gen_index]
        for pos in range(new_from):
            self._orbit_step(lv, pos, s)
        pos = new_from
        while pos < len(lv.orbit):
            for g in gens:
                self._orbit_step(lv, pos, g)
            pos += 1

    def _orbit_step(self, lv: _Level, pos: int, s: np.ndarray) -> None:
        q = int(s[lv.orbit[pos]])
        if q in lv.orbit_pos:
            return
        lv.orbit_pos[q] = len(lv.orbit)
        lv.orbit.append(q)
        u_q = s[lv.u[pos]]
        lv.u.append(u_q)
        lv.uinv.append(invert(u_q))

    def _add_strong_gen(self, r: np.ndarray, start: int, stop: int) -> None:
        """Install residue ``r`` on levels ``start..stop`` (creating ``stop``)."""
        r = r.copy()
        r.setflags(write=False)
        if stop == len(self.levels):
            moved = int(np.nonzero(r != self.identity)[0][0])
            self.levels.append(_Level(moved, self.degree))
        for idx in range(start, stop + 1):
            lv = self.levels[idx]
            lv.gens.append(r)
            lv.done.append(0)
            self._extend_orbit_with_gen(lv, len(lv.gens) - 1)

    def add_generator(self, p: np.ndarray) -> bool:
        """Sift an external generator in; returns True if the group grew."""
        residue, stop = self._sift_from(p, 0)
        if residue is None:
            return False
        self._add_strong_gen(residue, 0, stop)
        self._process()
        return True

    # -- the deterministic Schreier-Sims loop --------------------------------

    def _process(self) -> None:
        idx = len(self.levels) - 1
        while idx >= 0:
            redo_at = self._process_level(idx)
            idx = idx - 1 if redo_at is None else redo_at

    def _process_level(self, idx: int) -> int | None:
        lv = self.levels[idx]
        gi = 0
        while gi < len(lv.gens):
            s = lv.gens[gi]
            pos = lv.done[gi]
            while pos < len(lv.orbit):
                self._tick()
                beta_pos = pos
                pos += 1
                lv.done[gi] = pos
                qpos = lv.orbit_pos[int(s[lv.orbit[beta_pos]])]
                schreier = lv.uinv[qpos][s[lv.u[beta_pos]]]
                if self._is_identity(schreier):
                    continue
                residue, stop = self._sift_from(schreier, idx + 1)
                if residue is not None:
                    self._add_strong_gen(residue, idx + 1, stop)
                    return stop
            gi += 1
        return None

    def finish(self) -> None:
        self._process()


class PermGroup:
    """Immutable permutation group with a verified stabilizer chain."""

    def __init__(self, degree: int, generators: list[np.ndarray],
                 levels: list[_Level], identity: np.ndarray):
        self.degree = degree
        self.generators = generators
        self._levels = levels
        self._identity = identity
        self._id_bytes = identity.tobytes()
        self._gen_inverses: list[np.ndarray] | None = None

    # -- construction --------------------------------------------------------

    @classmethod
    def from_generators(cls, perms: Iterable[Sequence[int] | np.ndarray], degree: int,
                        base_prefix: Sequence[int] = (),
                        budget: TimeBudget | None = None) -> "PermGroup":
        gens = [_as_perm(p, degree) for p in perms]
        builder = _ChainBuilder(degree, base_prefix, budget)
        for g in gens:
            if not builder._is_identity(g):
                builder.add_generator(g)
        builder.finish()
        return cls(degree, gens, builder.levels, builder.identity)

    def _spawn(self, generators: list[np.ndarray], levels: list[_Level]) -> "PermGroup":
        return PermGroup(self.degree, generators, levels, self._identity)

    # -- basic queries ---------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self._levels]

    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self._levels]

    def order_log2(self) -> int:
        total = 0
        for size in self.orbit_sizes():
            k = size.bit_length() - 1
            if 1 << k != size:
                raise NonTwoPowerOrderError(
                    f"orbit size {size} is not a power of two; "
                    "the group is not a 2-group"
                )
            total += k
        return total

    def strong_generators(self) -> list[np.ndarray]:
        seen: dict[bytes, np.ndarray] = {}
        for lv in self._levels:
            for g in lv.gens:
                seen.setdefault(g.tobytes(), g)
        return list(seen.values())

    def sift(self, perm: Sequence[int] | np.ndarray) -> np.ndarray | None:
        """Residue after reduction along the chain; ``None`` means member."""
        p = np.asarray(perm, dtype=np.intp)
        if p.shape != (self.degree,):
            raise MalformedPermutationError(
                f"degree mismatch: group degree {self.degree}, element {p.shape}"
            )
        r = p
        for lv in self._levels:
            pos = lv.orbit_pos.get(int(r[lv.base]))
            if pos is None:
                return r
            if pos:
                r = lv.uinv[pos][r]
        if r.tobytes() == self._id_bytes:
            return None
        return r

    def contains(self, perm: Sequence[int] | np.ndarray) -> bool:
        return self.sift(perm) is None

    def contains_group(self, other: "PermGroup") -> bool:
        return all(self.contains(g) for g in other.generators)

    # -- derived subgroups -------------------------------------------------------

    def _generator_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        if self._gen_inverses is None:
            self._gen_inverses = [invert(g) for g in self.generators]
        return list(zip(self.generators, self._gen_inverses))

    def normal_closure(self, seeds: Iterable[np.ndarray],
                       budget: TimeBudget | None = None) -> "PermGroup":
        """Smallest normal subgroup of this group containing the seeds."""
        seeds = [_as_perm(s, self.degree) for s in seeds]
        for s in seeds:
            if not self.contains(s):
                raise NotASubgroupError("normal-closure seed lies outside the group")
        builder = _ChainBuilder(self.degree, (), budget)
        closure_gens: list[np.ndarray] = []
        work: deque[np.ndarray] = deque(seeds)
        pairs = self._generator_pairs()
        while work:
            if budget is not None:
                budget.check("normal closure")
            g = work.popleft()
            if builder._is_identity(g):
                continue
            if builder._sift_from(g, 0)[0] is None:
                continue
            builder.add_generator(g)
            closure_gens.append(g)
            for s, s_inv in pairs:
                work.append(s[g[s_inv]])
                work.append(s_inv[g[s]])
        builder.finish()
        return self._spawn(closure_gens, builder.levels)

    def frattini_subgroup(self, budget: TimeBudget | None = None) -> "PermGroup":
        """Frattini subgroup of a finite 2-group: the normal closure of the
        squares and pairwise commutators of the defining generators."""
        self.order_log2()  # raises unless a 2-group
        seeds = []
        pairs = self._generator_pairs()
        for g, _ in pairs:
            seeds.append(g[g])
        for i, (g, g_inv) in enumerate(pairs):
            for h, h_inv in pairs[i + 1:]:
                seeds.append(h[g[h_inv[g_inv]]])
        return self.normal_closure(seeds, budget=budget)

    def index_log2(self, subgroup: "PermGroup") -> int:
        for g in subgroup.generators:
            if not self.contains(g):
                raise NotASubgroupError("claimed subgroup has a generator outside the group")
        return self.order_log2() - subgroup.order_log2()

    def is_normalized_by(self, elements: Iterable[np.ndarray]) -> bool:
        """Whether each ``s^-1 g s`` (g a generator, s in elements) stays inside."""
        for s in elements:
            s = _as_perm(s, self.degree)
            s_inv = invert(s)
            for g in self.generators:
                if not self.contains(s[g[s_inv]]):
                    return False
        return True


def cyclic_quotient_exponent(group: PermGroup, normal: PermGroup,
                             element: np.ndarray) -> int:
    """Least ``k`` with ``element^(2^k)`` in ``normal``; demands ``G = N.<g>``.

    Verifies that ``normal`` really is normal in ``group`` and that the found
    exponent accounts for the whole index, otherwise raises.
    """
    element = _as_perm(element, group.degree)
    if not group.contains(element):
        raise NotASubgroupError("element lies outside the group")
    if not group.contains_group(normal):
        raise NotASubgroupError("normal factor is not contained in the group")
    if not normal.is_normalized_by(group.generators):
        raise NotASubgroupError("claimed normal subgroup is not normal")
    k = 0
    p = element
    bound = group.order_log2() + 1
    while not normal.contains(p):
        p = p[p]
        k += 1
        if k > bound:
            raise NotASubgroupError("element power never entered the subgroup")
    if k != group.index_log2(normal):
        raise NotASubgroupError(
            "cyclic part does not account for the whole quotient: "
            f"exponent {k} vs index log2 {group.index_log2(normal)}"
        )
    return k


def pointwise_stabilizer(group_gens: Iterable[np.ndarray], degree: int,
                         points: Sequence[int],
                         budget: TimeBudget | None = None) -> list[np.ndarray]:
    """Strong generators of the pointwise stabilizer of ``points``.

    Rebuilds a chain whose base is forced to start with ``points`` and returns
    the strong generators fixing all of them (possibly empty).
    """
    chain = PermGroup.from_generators(group_gens, degree,
                                      base_prefix=tuple(points), budget=budget)
    prefix = len(tuple(points))
    seen: dict[bytes, np.ndarray] = {}
    for lv in chain._levels[prefix:]:
        for g in lv.gens:
            seen.setdefault(g.tobytes(), g)
    return list(seen.values())
