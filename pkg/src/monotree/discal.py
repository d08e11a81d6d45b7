"""Exact arithmetic for the iterate fractions of ``1/(x-1)^2`` over Z[t].

The iterates are tracked as coprime numerator/denominator pairs ``(g_n, h_n)``
with ``g_1 = 1``, ``h_1 = (x-1)^2`` and

    g_n = h_{n-1}^2,        h_n = (g_{n-1} - h_{n-1})^2.

Discriminants of ``g_n - t h_n`` (in ``x``) are computed by evaluating the
integer discriminant at enough integer values of ``t`` and interpolating: all
Sylvester entries are linear in ``t``, so the ``t``-degree is at most
``2 deg_x - 1``.  Integer resultants run over a primitive polynomial remainder
sequence with exact factor tracking; correctness is cross-checked in the test
suite against an independent symbolic path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .arith import divisors, is_two_power

NEG_INF = float("-inf")


class ShapeError(ArithmeticError):
    """A discriminant did not factor as sign * 2^m * t^a * (1-t)^b."""


class InterpolationError(ArithmeticError):
    """An extra evaluation point changed the interpolated polynomial."""


@dataclass(frozen=True)
class IntPoly:
    """Dense univariate polynomial over Z, ascending coefficients, trimmed."""

    coeffs: tuple[int, ...]

    @staticmethod
    def of(coeffs: Sequence[int]) -> "IntPoly":
        trimmed = list(coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        return IntPoly(tuple(int(c) for c in trimmed))

    @staticmethod
    def const(c: int) -> "IntPoly":
        return IntPoly.of([c])

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly.of(out)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] -= c
        return IntPoly.of(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly.of(out)

    def scale(self, c: int) -> "IntPoly":
        if c == 0:
            return IntPoly(())
        return IntPoly(tuple(a * c for a in self.coeffs))

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return IntPoly((0,) * k + self.coeffs)

    def square(self) -> "IntPoly":
        return self * self

    def derivative(self) -> "IntPoly":
        return IntPoly.of([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def exact_div_scalar(self, c: int) -> "IntPoly":
        out = []
        for a in self.coeffs:
            q, r = divmod(a, c)
            if r:
                raise ArithmeticError("inexact scalar division")
            out.append(q)
        return IntPoly.of(out)

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def valuation(self) -> int:
        """Multiplicity of the root 0 (0 for nonzero constant term)."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise AssertionError

    def to_json(self) -> list[str]:
        """Ascending coefficients as decimal strings (exact at any size)."""
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return " + ".join(parts)


X = IntPoly((0, 1))
ONE = IntPoly((1,))


def pseudo_remainder(a: IntPoly, b: IntPoly) -> IntPoly:
    """``lc(b)^(deg a - deg b + 1) * a  mod  b`` over Z."""
    if b.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    if a.degree < b.degree:
        return a
    steps = int(a.degree) - int(b.degree) + 1
    lb = b.leading
    r = a
    while not r.is_zero() and r.degree >= b.degree:
        k = int(r.degree) - int(b.degree)
        r = r.scale(lb) - b.scale(r.leading).shift(k)
        steps -= 1
    if steps > 0:
        r = r.scale(lb**steps)
    return r


def resultant(a: IntPoly, b: IntPoly) -> int:
    """Resultant over Z via a primitive remainder sequence.

    Each pseudo-division step contributes an exact known factor, accumulated
    as a fraction; the final value is an integer by construction.
    """
    if a.is_zero() or b.is_zero():
        return 0
    sign = 1
    if a.degree < b.degree:
        if (int(a.degree) * int(b.degree)) % 2:
            sign = -sign
        a, b = b, a
    acc = Fraction(1)
    while b.degree > 0:
        m, n = int(a.degree), int(b.degree)
        r = pseudo_remainder(a, b)
        if r.is_zero():
            return 0
        c = abs(r.content())
        r = r.exact_div_scalar(c)
        k = int(r.degree)
        # Res(a, b) = (-1)^(mn) lc(b)^(m - k - (m-n+1)n) c^n Res(b, r)
        if (m * n) % 2:
            sign = -sign
        e = m - k - (m - n + 1) * n
        acc *= Fraction(b.leading) ** e * Fraction(c) ** n
        a, b = b, r
    acc *= Fraction(b.leading) ** int(a.degree)
    value = sign * acc
    if value.denominator != 1:
        raise ArithmeticError("resultant tracking lost exactness")
    return int(value)


def discriminant(p: IntPoly) -> int:
    """``(-1)^(m(m-1)/2) Res(p, p') / lc(p)`` for ``m = deg p >= 1``."""
    m = int(p.degree)
    if m < 1:
        raise ValueError("discriminant needs degree >= 1")
    res = resultant(p, p.derivative())
    q, r = divmod(res, p.leading)
    if r:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    return q if (m * (m - 1) // 2) % 2 == 0 else -q


# -- the iterate fractions -----------------------------------------------------

MAX_ITERATE = 6


def iterate_fraction(n: int) -> tuple[IntPoly, IntPoly]:
    """Numerator and denominator of the ``n``-th iterate, ``1 <= n <= 6``."""
    if not 1 <= n <= MAX_ITERATE:
        raise ValueError(f"iterates supported for 1 <= n <= {MAX_ITERATE}")
    g = ONE
    h = IntPoly((1, -2, 1))  # (x-1)^2
    for _ in range(n - 1):
        g, h = h.square(), (g - h).square()
    return g, h


@dataclass(frozen=True)
class BiPoly:
    """``g - t*h`` as a polynomial in x whose coefficients are linear in t."""

    g: IntPoly
    h: IntPoly

    @property
    def x_degree(self) -> int:
        return int(max(self.g.degree, self.h.degree))

    def coefficient(self, k: int) -> tuple[int, int]:
        """Coefficient of ``x^k`` as ``(constant, t-coefficient)``."""
        gc = self.g.coeffs[k] if k <= self.g.degree else 0
        hc = self.h.coeffs[k] if k <= self.h.degree else 0
        return gc, -hc

    def at_t(self, t: int) -> IntPoly:
        return self.g - self.h.scale(t)

    def leading_in_t(self) -> tuple[int, int]:
        """Leading x-coefficient as ``(constant, t-coefficient)``."""
        return self.coefficient(self.x_degree)


def iterate_bipoly(n: int) -> BiPoly:
    g, h = iterate_fraction(n)
    return BiPoly(g, h)


# -- leading coefficients and degree pattern --------------------------------------


@dataclass
class LeadingData:
    n: int
    leading_g: int
    leading_h: int
    degree_relation: str  # "<", "=", ">"
    relation_ok: bool
    g_recurrence_ok: bool | None  # None when the recurrence does not apply yet
    h_recurrence_ok: bool | None

    @property
    def ok(self) -> bool:
        return (self.relation_ok and self.g_recurrence_ok is not False
                and self.h_recurrence_ok is not False)

    def to_json(self) -> dict:
        return {"n": self.n, "leading_g": self.leading_g, "leading_h": self.leading_h,
                "degree_relation": self.degree_relation, "relation_ok": self.relation_ok,
                "g_recurrence_ok": self.g_recurrence_ok,
                "h_recurrence_ok": self.h_recurrence_ok}


def leading_data(n: int) -> LeadingData:
    """Leading coefficients of the iterate pair against their three-step
    recurrences, and the degree trichotomy by ``n mod 3``."""
    g, h = iterate_fraction(n)
    expected = {1: "<", 2: "=", 0: ">"}[n % 3]
    measured = "<" if g.degree < h.degree else ("=" if g.degree == h.degree else ">")

    g_ok: bool | None = None
    h_ok: bool | None = None
    if n >= 4:
        g3, h3 = iterate_fraction(n - 3)
        if n % 3 == 1:
            g_ok = g.leading == 16 * g3.leading**4 * h3.leading**4
        else:
            g_ok = g.leading == g3.leading**8
    if n >= 3:
        g2, h2 = iterate_fraction(n - 2)
        if n % 3 == 0:
            h_ok = h.leading == 4 * g2.leading**2 * h2.leading**2
        else:
            h_ok = h.leading == g2.leading**4
    return LeadingData(n, g.leading, h.leading, measured, measured == expected,
                       g_ok, h_ok)


# -- discriminants of the iterates -------------------------------------------------


@dataclass(frozen=True)
class DiscriminantForm:
    """Exactly ``sign * 2^two_exponent * t^t_exponent * (1-t)^one_minus_t_exponent``."""

    sign: int
    two_exponent: int
    t_exponent: int
    one_minus_t_exponent: int

    def evaluate(self, t: Fraction | int):
        return (self.sign * (1 << self.two_exponent)
                * t**self.t_exponent * (1 - t) ** self.one_minus_t_exponent)

    def to_json(self) -> dict:
        return {"sign": self.sign, "m": self.two_exponent,
                "a": self.t_exponent, "b": self.one_minus_t_exponent}

    def __str__(self) -> str:
        s = "-" if self.sign < 0 else "+"
        return (f"{s}2^{self.two_exponent} * t^{self.t_exponent}"
                f" * (1-t)^{self.one_minus_t_exponent}")


def _interpolate(points: list[tuple[int, int]]) -> list[Fraction]:
    """Newton interpolation; ascending coefficients over Q."""
    xs = [Fraction(x) for x, _ in points]
    divided = [Fraction(y) for _, y in points]
    for j in range(1, len(points)):
        for i in range(len(points) - 1, j - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * len(points)
    coeffs[0] = divided[-1]
    # Horner expansion of the Newton form, highest node first
    for i in range(len(points) - 2, -1, -1):
        for k in range(len(points) - 1, 0, -1):
            coeffs[k] = coeffs[k - 1] - xs[i] * coeffs[k]

        coeffs[0] = divided[i] - xs[i] * coeffs[0]
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: int) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


MAX_DISCRIMINANT_LEVEL = 5


def discriminant_form(n: int) -> DiscriminantForm:
    """Factored discriminant of ``g_n - t h_n`` for ``1 <= n <= 5``.

    Evaluates the integer discriminant at ``t = 2, 3, ...`` (``2 deg_x``
    points, enough for the ``t``-degree bound), interpolates, verifies the
    result against one extra point, and factors it as
    ``sign * 2^m * t^a * (1-t)^b``; any other shape raises.
    """
    if not 1 <= n <= MAX_DISCRIMINANT_LEVEL:
        raise ValueError(f"discriminants supported for 1 <= n <= {MAX_DISCRIMINANT_LEVEL}")
    bp = iterate_bipoly(n)
    m = bp.x_degree
    count = 2 * m
    points = []
    for t in range(2, 2 + count + 1):  # one extra point for the stability check
        p = bp.at_t(t)
        if p.degree != m:
            raise ShapeError("x-degree dropped at an evaluation point")
        points.append((t, discriminant(p)))
    coeffs = _interpolate(points[:count])
    check_t, check_val = points[count]
    if _poly_eval(coeffs, check_t) != check_val:
        raise InterpolationError("extra evaluation point changed the polynomial")
    if any(c.denominator != 1 for c in coeffs):
        raise ShapeError("interpolated discriminant is not integral")
    poly = IntPoly.of([int(c) for c in coeffs])
    if poly.is_zero():
        raise ShapeError("discriminant vanished identically")

    a = poly.valuation()
    poly = IntPoly(poly.coeffs[a:])
    b = 0
    one_minus_t = IntPoly((1, -1))
    while not poly(1) and poly.degree >= 1:
        quotient, rem = _divmod_exact(poly, one_minus_t)
        if rem is None:
            break
        poly = quotient
        b += 1
    if poly.degree != 0:
        raise ShapeError(f"leftover factor {poly} is not constant")
    c = poly.coeffs[0]
    if not is_two_power(c):
        raise ShapeError(f"constant {c} is not a signed power of two")
    return DiscriminantForm(1 if c > 0 else -1, abs(c).bit_length() - 1, a, b)


def _divmod_exact(p: IntPoly, d: IntPoly) -> tuple[IntPoly, IntPoly | None]:
    """Division returning ``(q, None)`` when the remainder is nonzero.

    Only used with monic-up-to-sign divisors, so coefficients stay integral.
    """
    r = list(p.coeffs)
    dd = int(d.degree)
    out = [0] * (len(r) - dd)
    lead = d.leading
    for k in range(len(out) - 1, -1, -1):
        q, rem = divmod(r[k + dd], lead)
        if rem:
            return p, None
        out[k] = q
        for j, c in enumerate(d.coeffs):
            r[k + j] -= q * c
    if any(r[:dd]):
        return p, None
    return IntPoly.of(out), IntPoly(())


# -- signed 2-power checks --------------------------------------------------------


def wronskian(n: int) -> IntPoly:
    """``h_n g_n' - g_n h_n'`` (its roots are the finite ramification points)."""
    g, h = iterate_fraction(n)
    return h * g.derivative() - g * h.derivative()


@dataclass
class ResultantPowerCheck:
    n: int
    resultant_value: int
    wronskian_leading: int
    resultant_is_two_power: bool
    leading_is_two_power: bool

    @property
    def ok(self) -> bool:
        return self.resultant_is_two_power and self.leading_is_two_power

    def to_json(self) -> dict:
        return {"n": self.n, "resultant": str(self.resultant_value),
                "wronskian_leading": self.wronskian_leading,
                "resultant_is_two_power": self.resultant_is_two_power,
                "leading_is_two_power": self.leading_is_two_power}


def resultant_power_check(n: int) -> ResultantPowerCheck:
    """``Res(g_n, h_n)`` and the leading Wronskian coefficient are signed
    2-powers (which also witnesses coprimality of the pair)."""
    g, h = iterate_fraction(n)
    res = resultant(g, h)
    lead = wronskian(n).leading
    return ResultantPowerCheck(n, res, lead,
                               res != 0 and is_two_power(res),
                               is_two_power(lead))


@dataclass
class RamificationReport:
    n: int
    rational_roots: list[Fraction]
    values: list[tuple[Fraction, Fraction]]  # (g(r), h(r)) per root
    all_two_power_or_zero: bool
    irrational_degree: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rational_roots": [str(r) for r in self.rational_roots],
            "values": [[str(a), str(b)] for a, b in self.values],
            "all_two_power_or_zero": self.all_two_power_or_zero,
            "irrational_degree": self.irrational_degree,
        }


def _is_two_power_or_zero(q: Fraction) -> bool:
    if q == 0:
        return True
    return is_two_power(q.numerator) and is_two_power(q.denominator)


def ramification_values(n: int) -> RamificationReport:
    """Rational roots of the Wronskian with the iterate values there.

    Candidates come from divisors of the trailing/leading coefficients
    (rational root bound); irrational roots are counted via the degree left
    after deflation and reported, not evaluated.
    """
    if not 1 <= n <= 4:
        raise ValueError("ramification scan supported for 1 <= n <= 4")
    g, h = iterate_fraction(n)
    w = wronskian(n)
    val = w.valuation()
    roots: list[Fraction] = []
    if val:
        roots.append(Fraction(0))
        w = IntPoly(w.coeffs[val:])
    trailing = w.coeffs[0]
    leading = w.leading
    for p in divisors(trailing):
        for q in divisors(leading):
            if gcd(p, q) != 1:
                continue
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if w(cand) == 0 and cand not in roots:
                    roots.append(cand)
    roots.sort()
    # deflate all rational roots (with multiplicity) to count irrational content
    remaining = [Fraction(c) for c in w.coeffs]
    for r in roots:
        if r == 0:
            continue
        while True:
            deflated = _deflate(remaining, r)
            if deflated is None:
                break
            remaining = deflated
    values = [(Fraction(g(r)), Fraction(h(r))) for r in roots]
    flat = [v for pair in values for v in pair]
    return RamificationReport(
        n=n,
        rational_roots=roots,
        values=values,
        all_two_power_or_zero=all(_is_two_power_or_zero(v) for v in flat),
        irrational_degree=len(remaining) - 1,
    )


def _deflate(coeffs: list[Fraction], r: Fraction) -> list[Fraction] | None:
    """Synthetic division by ``x - r``; None when ``r`` is not a root."""
    quotient = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for k in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[k] + r * acc
        quotient[k - 1] = acc
    if coeffs[0] + r * acc != 0:
        return None
    return quotient
