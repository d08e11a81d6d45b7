"""Square classes over Q and the degree-16 specialization criterion.

A specialization parameter ``a`` keeps the full arithmetic action exactly when
``sqrt(a)``, ``sqrt(a-1)`` and the 8th roots of unity generate a degree-16
extension of Q, i.e. when the square classes of ``-1, 2, a, a-1`` are
independent in ``Q^x / (Q^x)^2``.  The criterion is decided by F2-rank of
exponent vectors; the test-suite cross-checks against the brute-force
all-subset-products oracle.

Only the rational base field is supported: the elementary square-class
reduction needs unique factorization plus the sign, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import FactorBudgetError, factorize, squarefree_decomposition

MAX_COMPONENT_BITS = 64


@dataclass(frozen=True)
class SquareClass:
    """A nonzero rational modulo squares: a sign and a positive squarefree part."""

    sign: int
    squarefree: int

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1) or self.squarefree < 1:
            raise ValueError("square class needs sign +-1 and positive squarefree part")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        s, _ = squarefree_decomposition(self.squarefree * other.squarefree)
        return SquareClass(self.sign * other.sign, s)

    def is_trivial(self) -> bool:
        return self.sign == 1 and self.squarefree == 1

    def __str__(self) -> str:
        return f"{'-' if self.sign < 0 else '+'}{self.squarefree}"


def _check_component(value: int) -> None:
    if abs(value) >= 1 << MAX_COMPONENT_BITS:
        raise FactorBudgetError(
            f"component {value} exceeds the {MAX_COMPONENT_BITS}-bit budget"
        )


def square_class(q: Fraction | int) -> SquareClass:
    """Square class of a nonzero rational (sign and squarefree part)."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no square class")
    _check_component(q.numerator)
    _check_component(q.denominator)
    s, _ = squarefree_decomposition(q.numerator * q.denominator)
    return SquareClass(1 if q > 0 else -1, s)


def _class_vector(cls: SquareClass, prime_index: dict[int, int]) -> int:
    """Exponent vector over F2 as a bitmask; bit 0 is the sign."""
    mask = 1 if cls.sign < 0 else 0
    for p in factorize(cls.squarefree):
        mask |= 1 << prime_index[p]
    return mask


def _f2_rank(vectors: list[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def degree16_condition(a: Fraction | int) -> bool:
    """Whether ``-1, 2, a, a-1`` are independent modulo rational squares."""
    a = Fraction(a)
    if a in (0, 1):
        raise ValueError("parameter must avoid the postcritical values 0 and 1")
    classes = [
        SquareClass(-1, 1),
        SquareClass(1, 2),
        square_class(a),
        square_class(a - 1),
    ]
    primes = sorted({p for c in classes for p in factorize(c.squarefree)})
    prime_index = {p: i + 1 for i, p in enumerate(primes)}
    vectors = [_class_vector(c, prime_index) for c in classes]
    return _f2_rank(vectors) == 4


def brute_force_degree16(a: Fraction | int) -> bool:
    """Independent oracle: among all 16 subset products of ``-1, 2, a, a-1``
    only the empty one may be a rational square.

    Uses only integer square-root tests, no factorization, so it checks the
    rank decision through a disjoint code path.
    """
    from math import isqrt

    a = Fraction(a)
    if a in (0, 1):
        raise ValueError("parameter must avoid the postcritical values 0 and 1")
    values = [Fraction(-1), Fraction(2), a, a - 1]
    for mask in range(1, 16):
        prod = Fraction(1)
        for i in range(4):
            if mask >> i & 1:
                prod *= values[i]
        if prod > 0 and (isqrt(prod.numerator) ** 2 == prod.numerator
                         and isqrt(prod.denominator) ** 2 == prod.denominator):
            return False
    return True


@dataclass
class SpecializationReport:
    a: Fraction
    classes: list[SquareClass]
    rank: int
    degree16: bool

    @property
    def note(self) -> str:
        if self.degree16:
            return ("degree-16 condition holds: the specialized action equals the "
                    "full arithmetic action at every level")
        return "degree-16 condition fails: no conclusion is asserted"

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "classes": [str(c) for c in self.classes],
            "rank": self.rank,
            "degree16": self.degree16,
            "note": self.note,
        }


def theorem_verdict(a: Fraction | int) -> SpecializationReport:
    """Degree-16 verdict together with the class data backing it.

    Only the field-degree condition is computed; the group-equality statement
    it is known to be equivalent to is quoted in the note, not re-derived.
    """
    a = Fraction(a)
    if a in (0, 1):
        raise ValueError("parameter must avoid the postcritical values 0 and 1")
    classes = [
        SquareClass(-1, 1),
        SquareClass(1, 2),
        square_class(a),
        square_class(a - 1),
    ]
    primes = sorted({p for c in classes for p in factorize(c.squarefree)})
    prime_index = {p: i + 1 for i, p in enumerate(primes)}
    rank = _f2_rank([_class_vector(c, prime_index) for c in classes])
    return SpecializationReport(a, classes, rank, rank == 4)
