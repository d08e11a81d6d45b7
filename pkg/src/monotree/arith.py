"""Small exact-integer helpers: budgeted factorization and primality."""

from __future__ import annotations

from math import gcd, isqrt

TRIAL_DIVISION_BOUND = 10**6

# Enough Miller-Rabin bases for a deterministic answer below 3.3 * 10**24,
# far beyond the 64-bit inputs this package accepts.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FactorBudgetError(ValueError):
    """Factorization would exceed the configured trial-division budget."""


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of n, or None."""
    if n < 0:
        return None
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def factorize(n: int, bound: int = TRIAL_DIVISION_BOUND) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division up to ``bound`` plus
    deterministic primality / perfect-power recognition for the cofactor.

    Raises :class:`FactorBudgetError` when the leftover cofactor is composite
    and not a perfect power (it would need real factoring work).
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # wheel over 6k +- 1
    p = 7
    step = 4
    while p * p <= n and p <= bound:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n == 1:
        return factors
    if is_probable_prime(n):
        factors[n] = factors.get(n, 0) + 1
        return factors
    for k in range(2, n.bit_length() + 1):
        root = _integer_root(n, k)
        if root is not None and root > 1:
            sub = factorize(root, bound)
            for q, e in sub.items():
                factors[q] = factors.get(q, 0) + e * k
            return factors
    raise FactorBudgetError(
        f"cofactor {n} is composite with no prime factor below {bound}"
    )


def divisors(n: int, limit: int = 100_000) -> list[int]:
    """All positive divisors of ``|n|``, sorted."""
    out = [1]
    for p, e in factorize(n).items():
        powers = [p**i for i in range(e + 1)]
        out = [d * q for d in out for q in powers]
        if len(out) > limit:
            raise FactorBudgetError(f"{n} has more than {limit} divisors")
    return sorted(out)


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """``|n| = s * q**2`` with ``s`` squarefree; returns ``(s, q)``."""
    s = q = 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
        q *= p ** (e // 2)
    return s, q


def is_two_power(n: int) -> bool:
    """Whether ``|n|`` is a power of two (1 counts)."""
    n = abs(n)
    return n != 0 and (n & (n - 1)) == 0


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1


def perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
