"""Finite-depth automorphisms of the rooted binary tree.

Vertices of the depth-``n`` tree are words over ``{1, 2}`` of length at most
``n`` (the root is the empty word).  A level-``n`` leaf ``(l_1, ..., l_n)``
carries the number ``1 + sum((l_k - 1) * 2^(k-1))``, so the *first* letter is
the least significant bit and the two leaves below a common parent differ in
the top bit.

An automorphism is stored as a *portrait*: one swap/no-swap flag per internal
vertex (levels ``0 .. n-1``), ``2^n - 1`` flags in total.  The image of a path
is computed by flipping each letter according to the flag found at the
*original* prefix.  Products act left to right: ``compose(g, h)`` means "apply
``g``, then ``h``", which is exactly the convention that makes the section
exchange rule ``(x1, x2) t (y1, y2) t' = (x1 y_t(1), x2 y_t(2)) t t'`` hold
verbatim.

Everything here is immutable after construction; the flag arrays are frozen
numpy buffers, and all operations return fresh values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

Vertex = tuple[int, ...]

#: Guard on recursive symbol expansion.  The stock order scan needs depth 18;
#: a dense portrait there is a quarter megabyte, still cheap.  Reassign to go
#: deeper deliberately.
MAX_SYMBOL_DEPTH = 18


class DepthMismatchError(ValueError):
    """Two automorphisms were combined at different depths."""


class UndeclaredSymbolError(KeyError):
    """A recursion rule referenced a symbol that was never declared."""


def _check_vertex(v: Sequence[int]) -> Vertex:
    v = tuple(v)
    if any(letter not in (1, 2) for letter in v):
        raise ValueError(f"vertex letters must be 1 or 2, got {v!r}")
    return v


def leaf_index(v: Sequence[int]) -> int:
    """Number of a vertex among its level, in ``1 .. 2^level``."""
    v = _check_vertex(v)
    return 1 + sum((letter - 1) << k for k, letter in enumerate(v))


def vertex_from_index(index: int, level: int) -> Vertex:
    """Inverse of :func:`leaf_index` on the given level."""
    if not 1 <= index <= 1 << level:
        raise ValueError(f"index {index} out of range for level {level}")
    bits = index - 1
    return tuple(1 + ((bits >> k) & 1) for k in range(level))


@dataclass(frozen=True, eq=False)
class LevelAutomorphism:
    """A depth-``n`` tree automorphism stored as a dense portrait.

    ``flags[2^l - 1 : 2^(l+1) - 1]`` holds the level-``l`` flags, indexed by
    the (0-based) vertex number within the level.
    """

    depth: int
    flags: np.ndarray  # uint8, length 2**depth - 1, read-only

    def __post_init__(self) -> None:
        expected = (1 << self.depth) - 1
        if self.flags.shape != (expected,):
            raise ValueError(
                f"portrait for depth {self.depth} needs {expected} flags, "
                f"got {self.flags.shape}"
            )

    # -- level access ------------------------------------------------------

    def level_flags(self, level: int) -> np.ndarray:
        if not 0 <= level < self.depth:
            raise ValueError(f"level {level} outside 0..{self.depth - 1}")
        lo = (1 << level) - 1
        return self.flags[lo : lo + (1 << level)]

    def flag_at(self, v: Sequence[int]) -> int:
        v = _check_vertex(v)
        if len(v) >= self.depth:
            raise ValueError(f"vertex {v!r} is not internal at depth {self.depth}")
        return int(self.level_flags(len(v))[leaf_index(v) - 1])

    # -- actions -----------------------------------------------------------

    def apply(self, v: Sequence[int]) -> Vertex:
        """Image of a vertex (any level up to the depth)."""
        v = _check_vertex(v)
        if len(v) > self.depth:
            raise ValueError(f"vertex {v!r} deeper than depth {self.depth}")
        out = []
        prefix_ordinal = 0
        for k, letter in enumerate(v):
            flag = int(self.level_flags(k)[prefix_ordinal])
            out.append(3 - letter if flag else letter)
            prefix_ordinal |= (letter - 1) << k
        return tuple(out)

    def level_perms(self) -> list[np.ndarray]:
        """0-based induced permutations on levels ``0 .. depth``."""
        perms = [np.zeros(1, dtype=np.intp)]
        for level in range(self.depth):
            prev = perms[level]
            half = 1 << level
            w = np.arange(half << 1, dtype=np.intp)
            parent = w & (half - 1)
            top = w >> level
            flags = self.level_flags(level).astype(np.intp)
            perms.append(((top ^ flags[parent]) << level) | prev[parent])
        return perms

    def leaf_perm(self) -> np.ndarray:
        """0-based permutation induced on the ``2^depth`` leaves."""
        return self.level_perms()[self.depth]

    # -- group structure -----------------------------------------------------

    def compose(self, other: "LevelAutomorphism") -> "LevelAutomorphism":
        """Product acting left to right (``self`` first, then ``other``)."""
        if self.depth != other.depth:
            raise DepthMismatchError(
                f"cannot compose depths {self.depth} and {other.depth}"
            )
        own_perms = self.level_perms()
        out = np.empty_like(self.flags)
        for level in range(self.depth):
            lo = (1 << level) - 1
            hi = lo + (1 << level)
            out[lo:hi] = self.level_flags(level) ^ other.level_flags(level)[own_perms[level]]
        return LevelAutomorphism(self.depth, _freeze(out))

    def __mul__(self, other: "LevelAutomorphism") -> "LevelAutomorphism":
        return self.compose(other)

    def inverse(self) -> "LevelAutomorphism":
        out = np.empty_like(self.flags)
        for level, perm in enumerate(self.level_perms()[: self.depth]):
            inv = np.empty_like(perm)
            inv[perm] = np.arange(perm.size, dtype=np.intp)
            lo = (1 << level) - 1
            out[lo : lo + (1 << level)] = self.level_flags(level)[inv]
        return LevelAutomorphism(self.depth, _freeze(out))

    def restrict(self, level: int) -> "LevelAutomorphism":
        """Truncate the portrait to the subtree of the first ``level`` levels."""
        if not 0 <= level <= self.depth:
            raise ValueError(f"cannot restrict depth {self.depth} to {level}")
        return LevelAutomorphism(level, _freeze(self.flags[: (1 << level) - 1].copy()))

    def is_identity(self) -> bool:
        return not self.flags.any()

    def children(self) -> tuple["LevelAutomorphism", "LevelAutomorphism"]:
        """Split ``g = (u, v) t`` into the two depth-``n-1`` sections."""
        if self.depth == 0:
            raise ValueError("depth-0 automorphism has no sections")
        left = np.empty((1 << (self.depth - 1)) - 1, dtype=np.uint8)
        right = np.empty_like(left)
        for level in range(1, self.depth):
            full = self.level_flags(level)
            lo = (1 << (level - 1)) - 1
            hi = lo + (1 << (level - 1))
            left[lo:hi] = full[0::2]
            right[lo:hi] = full[1::2]
        return (
            LevelAutomorphism(self.depth - 1, _freeze(left)),
            LevelAutomorphism(self.depth - 1, _freeze(right)),
        )

    def top_flag(self) -> int:
        if self.depth == 0:
            return 0
        return int(self.flags[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LevelAutomorphism):
            return NotImplemented
        return self.depth == other.depth and np.array_equal(self.flags, other.flags)

    def __hash__(self) -> int:
        return hash((self.depth, self.flags.tobytes()))

    def __repr__(self) -> str:
        return f"LevelAutomorphism(depth={self.depth}, {to_wreath_string(self)!r})"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    arr.setflags(write=False)
    return arr


def identity(depth: int) -> LevelAutomorphism:
    return LevelAutomorphism(depth, _freeze(np.zeros((1 << depth) - 1, dtype=np.uint8)))


def sigma(depth: int) -> LevelAutomorphism:
    """Swap of the two level-1 subtrees (trivial below the root)."""
    if depth < 1:
        raise ValueError("sigma needs depth >= 1")
    flags = np.zeros((1 << depth) - 1, dtype=np.uint8)
    flags[0] = 1
    return LevelAutomorphism(depth, _freeze(flags))


def wreath(
    left: LevelAutomorphism, right: LevelAutomorphism, top: bool | int
) -> LevelAutomorphism:
    """Assemble ``(left, right) t`` one level above its two sections."""
    if left.depth != right.depth:
        raise DepthMismatchError(
            f"wreath sections must share a depth, got {left.depth} and {right.depth}"
        )
    depth = left.depth + 1
    flags = np.zeros((1 << depth) - 1, dtype=np.uint8)
    flags[0] = 1 if top else 0
    for level in range(1, depth):
        lo = (1 << level) - 1
        sub = slice(lo, lo + (1 << level))
        flags[sub][0::2] = left.level_flags(level - 1)
        flags[sub][1::2] = right.level_flags(level - 1)
    return LevelAutomorphism(depth, _freeze(flags))


def compose(g: LevelAutomorphism, h: LevelAutomorphism) -> LevelAutomorphism:
    return g.compose(h)


def inverse(g: LevelAutomorphism) -> LevelAutomorphism:
    return g.inverse()


def restrict(g: LevelAutomorphism, level: int) -> LevelAutomorphism:
    return g.restrict(level)


def compose_all(items: Iterable[LevelAutomorphism], depth: int) -> LevelAutomorphism:
    out = identity(depth)
    for item in items:
        out = out.compose(item)
    return out


def as_permutation(g: LevelAutomorphism) -> np.ndarray:
    """1-based leaf permutation; entry ``i-1`` is the image of leaf ``i``."""
    return g.leaf_perm() + 1


def from_permutation(perm: Sequence[int] | np.ndarray) -> LevelAutomorphism:
    """Rebuild the portrait of a leaf permutation that lies in the tree group.

    Raises ``ValueError`` when the permutation does not respect the sibling
    blocks of the tree (i.e. is not an automorphism image).
    """
    arr = np.asarray(perm, dtype=np.intp)
    size = arr.size
    depth = size.bit_length() - 1
    if 1 << depth != size:
        raise ValueError(f"leaf count {size} is not a power of two")
    if not np.array_equal(np.sort(arr), np.arange(size, dtype=np.intp)):
        raise ValueError("not a permutation of 0..2^n-1")
    flags = np.empty((1 << depth) - 1, dtype=np.uint8)
    # Blocks are indexed by their vertex ordinal (first letter = lowest bit),
    # so splitting on the next letter keeps the ordinal for the left child and
    # adds 2^level for the right one.
    current: list[tuple[int, np.ndarray]] = [(0, arr)]
    for level in range(depth):
        lo = (1 << level) - 1
        next_perms: list[tuple[int, np.ndarray]] = []
        for ordinal, block in current:
            first_bits = block & 1
            expected = np.arange(block.size, dtype=np.intp) & 1
            if np.array_equal(first_bits, expected):
                flag = 0
            elif np.array_equal(first_bits, expected ^ 1):
                flag = 1
            else:
                raise ValueError("permutation does not preserve sibling blocks")
            flags[lo + ordinal] = flag
            if level < depth - 1:
                next_perms.append((ordinal, block[0::2] >> 1))
                next_perms.append((ordinal | (1 << level), block[1::2] >> 1))
        current = next_perms
    return LevelAutomorphism(depth, _freeze(flags))


def element_order_exponent(g: LevelAutomorphism) -> int:
    """Least ``m`` with ``g^(2^m) = id`` (orders in the tree group are 2-powers)."""
    perm = g.leaf_perm()
    idx = np.arange(perm.size, dtype=np.intp)
    m = 0
    while not np.array_equal(perm, idx):
        perm = perm[perm]
        m += 1
        if m > perm.size.bit_length() + 1:
            raise ValueError("element order is not a power of two")
    return m


# -- wreath recursions -------------------------------------------------------


@dataclass(frozen=True)
class WreathRecursion:
    """Self-similar elements given by rules ``name -> (left word, right word, top)``.

    Words are sequences of declared symbol names; truncating to depth ``n``
    expands each rule one level at a time, so any finite table terminates.
    """

    rules: Mapping[str, tuple[tuple[str, ...], tuple[str, ...], bool]]

    def __post_init__(self) -> None:
        for name, (left, right, _top) in self.rules.items():
            for sym in (*left, *right):
                if sym not in self.rules:
                    raise UndeclaredSymbolError(
                        f"rule {name!r} references undeclared symbol {sym!r}"
                    )
        object.__setattr__(self, "_memo", {})

    def symbol(self, name: str, depth: int) -> LevelAutomorphism:
        if name not in self.rules:
            raise UndeclaredSymbolError(f"undeclared symbol {name!r}")
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        if depth > MAX_SYMBOL_DEPTH:
            raise ValueError(
                f"symbol expansion capped at depth {MAX_SYMBOL_DEPTH}; "
                "raise treeauto.MAX_SYMBOL_DEPTH to go deeper"
            )
        memo: dict[tuple[str, int], LevelAutomorphism] = self._memo  # type: ignore[attr-defined]
        key = (name, depth)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if depth == 0:
            result = identity(0)
        else:
            left_word, right_word, top = self.rules[name]
            left = compose_all((self.symbol(s, depth - 1) for s in left_word), depth - 1)
            right = compose_all((self.symbol(s, depth - 1) for s in right_word), depth - 1)
            result = wreath(left, right, top)
        memo[key] = result
        return result

    def truncate(self, word: Sequence[str], depth: int) -> LevelAutomorphism:
        """Expand a word of symbols to depth ``depth`` (empty word = identity)."""
        return compose_all((self.symbol(s, depth) for s in word), depth)


#: The three self-similar generators a1 = (id, a3), a2 = (id, a1) s,
#: a3 = (a2, id) s of the tree action attached to x -> 1/(x-1)^2.
MONODROMY_GENERATORS = WreathRecursion(
    {
        "a1": ((), ("a3",), False),
        "a2": ((), ("a1",), True),
        "a3": (("a2",), (), True),
    }
)


def generator(i: int, depth: int) -> LevelAutomorphism:
    """The generator ``a_i`` (``i`` in 1..3) truncated to the given depth."""
    if i not in (1, 2, 3):
        raise ValueError("generator index must be 1, 2 or 3")
    return MONODROMY_GENERATORS.symbol(f"a{i}", depth)


def predicted_order_exponent(i: int, n: int) -> int:
    """Closed-form exponent of ``ord(a_i)`` at depth ``n`` (order ``2^m``)."""
    if i not in (1, 2, 3):
        raise ValueError("generator index must be 1, 2 or 3")
    if n < 1:
        raise ValueError("depth must be >= 1")
    r = n % 3
    if i == 1:
        return 2 * (n // 3) + (1 if r == 2 else 0)
    if i == 2:
        return 2 * (n // 3) + (0 if r == 0 else 1)
    return 2 * (n // 3) + 1 if r == 1 else 2 * ((n - 1) // 3) + 2


# -- named depth-5 elements and the parity witnesses --------------------------


def _named_table() -> dict[str, LevelAutomorphism]:
    s1 = wreath(identity(1), sigma(1), False)
    s2 = wreath(s1, s1, False)
    s3 = wreath(s2, identity(3), False)
    w1 = wreath(s3, identity(4), False)
    u11 = wreath(identity(1), sigma(1), False)
    u1 = wreath(u11, identity(2), False)
    u2 = sigma(3)
    u = wreath(u1, u2, False)
    v21 = wreath(identity(1), sigma(1), False)
    v2 = wreath(v21, identity(2), False)
    v1 = wreath(identity(2), sigma(2), False)
    v = wreath(v1, v2, False)
    w2 = wreath(u, v, False)
    return {
        "s1": s1, "s2": s2, "s3": s3, "w1": w1,
        "u11": u11, "u1": u1, "u2": u2, "u": u,
        "v21": v21, "v2": v2, "v1": v1, "v": v, "w2": w2,
    }


_NAMED = _named_table()


def build_named(name: str) -> LevelAutomorphism:
    """One of the fixed depth-5 witnesses ``w1``/``w2`` or their named pieces."""
    try:
        return _NAMED[name]
    except KeyError:
        raise KeyError(
            f"unknown element {name!r}; expected one of {sorted(_NAMED)}"
        ) from None


def parity_witness(n: int) -> LevelAutomorphism:
    """The depth-``n`` kernel witness: sigma at depth 1, then ``(v, v)`` on odd
    levels and ``(v, id)`` on even ones."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    v = sigma(1)
    for depth in range(2, n + 1):
        if depth % 2 == 1:
            v = wreath(v, v, False)
        else:
            v = wreath(v, identity(depth - 1), False)
    return v


# -- presentation --------------------------------------------------------------


def to_wreath_string(g: LevelAutomorphism) -> str:
    """Render as nested sections, e.g. ``((id,s),id)s``."""
    if g.depth == 0:
        return "id"
    if g.is_identity():
        return "id"
    if g.depth == 1:
        return "s" if g.top_flag() else "id"
    left, right = g.children()
    body = f"({to_wreath_string(left)},{to_wreath_string(right)})"
    return body + ("s" if g.top_flag() else "")


def parse_wreath_string(text: str, depth: int | None = None) -> LevelAutomorphism:
    """Parse the output of :func:`to_wreath_string`.

    Atoms deepen as needed: ``id`` and ``s`` embed at any depth by acting
    trivially below.  ``depth`` pins the result depth (otherwise minimal).
    """
    stripped = text.replace(" ", "")
    value, rest = _parse_node(stripped)
    if rest:
        raise ValueError(f"trailing input {rest!r} in {text!r}")
    if depth is not None:
        value = _embed(value, depth)
    return value


def _parse_node(text: str) -> tuple[LevelAutomorphism, str]:
    if text.startswith("id"):
        return identity(0), text[2:]
    if text.startswith("s") and not text.startswith("s("):
        return sigma(1), text[1:]
    if text.startswith("("):
        left, rest = _parse_node(text[1:])
        if not rest.startswith(","):
            raise ValueError(f"expected ',' at {rest!r}")
        right, rest = _parse_node(rest[1:])
        if not rest.startswith(")"):
            raise ValueError(f"expected ')' at {rest!r}")
        rest = rest[1:]
        top = False
        if rest.startswith("s"):
            top = True
            rest = rest[1:]
        depth = max(left.depth, right.depth)
        return wreath(_embed(left, depth), _embed(right, depth), top), rest
    raise ValueError(f"cannot parse automorphism at {text!r}")


def _embed(g: LevelAutomorphism, depth: int) -> LevelAutomorphism:
    """Extend to a deeper tree by acting trivially below the old leaves."""
    if depth < g.depth:
        raise ValueError(f"cannot embed depth {g.depth} into shallower {depth}")
    if depth == g.depth:
        return g
    flags = np.zeros((1 << depth) - 1, dtype=np.uint8)
    flags[: g.flags.size] = g.flags
    return LevelAutomorphism(depth, _freeze(flags))


def embed(g: LevelAutomorphism, depth: int) -> LevelAutomorphism:
    return _embed(g, depth)


def to_cycle_string(perm: np.ndarray) -> str:
    """Disjoint-cycle notation on ``1..n`` for a 0-based permutation array."""
    seen = np.zeros(perm.size, dtype=bool)
    parts = []
    for start in range(perm.size):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        j = int(perm[start])
        while j != start:
            seen[j] = True
            cycle.append(j)
            j = int(perm[j])
        parts.append("(" + " ".join(str(c + 1) for c in cycle) + ")")
    return "".join(parts) if parts else "()"
