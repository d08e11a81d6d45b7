"""Iterate fractions, resultants and the discriminant pipeline."""

import random
from fractions import Fraction

import pytest
import sympy

from monotree import discal
from monotree.discal import IntPoly


def poly_to_sympy(p, x):
    return sum(c * x**i for i, c in enumerate(p.coeffs))


def test_intpoly_basics():
    p = IntPoly.of([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert IntPoly.of([]).degree == discal.NEG_INF
    assert (p * IntPoly.of([0, 1])).coeffs == (0, 1, 2)
    assert p(3) == 7
    assert p(Fraction(1, 2)) == 2
    assert IntPoly.of([1, 0, 3]).derivative().coeffs == (0, 6)


def test_iterate_base_cases():
    g1, h1 = discal.iterate_fraction(1)
    assert g1.coeffs == (1,)
    assert h1.coeffs == (1, -2, 1)
    g2, h2 = discal.iterate_fraction(2)
    square = IntPoly((1, -2, 1))
    assert g2 == square * square
    inner = IntPoly((1,)) - square  # 1 - (x-1)^2
    assert h2 == inner * inner
    g3, h3 = discal.iterate_fraction(3)
    assert h3 == IntPoly((1, -4, 2)) * IntPoly((1, -4, 2))  # (2(x-1)^2 - 1)^2


def test_iterate_degrees_and_cap():
    for n in range(1, 7):
        g, h = discal.iterate_fraction(n)
        assert max(g.degree, h.degree) == 1 << n
    with pytest.raises(ValueError):
        discal.iterate_fraction(7)


def test_iterates_recur_correctly():
    for n in range(2, 7):
        g_prev, h_prev = discal.iterate_fraction(n - 1)
        g, h = discal.iterate_fraction(n)
        assert g == h_prev * h_prev
        diff = g_prev - h_prev
        assert h == diff * diff


def sylvester_resultant(a, b):
    """Exact determinant of the Sylvester matrix; the sign-true oracle."""
    m, n = int(a.degree), int(b.degree)
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(a.coeffs)):
            row[i + j] = Fraction(c)
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(b.coeffs)):
            row[i + j] = Fraction(c)
        rows.append(row)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] * inv
            if factor:
                for c in range(col, size):
                    rows[r][c] -= factor * rows[col][c]
    assert det.denominator == 1
    return int(det)


def random_intpoly(rng, max_deg=6):
    return IntPoly.of([rng.randrange(-9, 10) for _ in range(rng.randrange(1, max_deg + 1))]
                      + [rng.choice([-3, -2, -1, 1, 2, 3])])


def test_resultant_against_sylvester_determinant():
    rng = random.Random(50)
    for _ in range(150):
        a, b = random_intpoly(rng), random_intpoly(rng)
        assert discal.resultant(a, b) == sylvester_resultant(a, b), (a.coeffs, b.coeffs)


def test_resultant_against_sympy():
    # sympy drops the order-swap sign, so compare where conventions agree
    rng = random.Random(51)
    x = sympy.symbols("x")
    for _ in range(120):
        a, b = random_intpoly(rng), random_intpoly(rng)
        if a.degree < b.degree:
            a, b = b, a
        want = sympy.resultant(poly_to_sympy(a, x), poly_to_sympy(b, x), x)
        assert discal.resultant(a, b) == int(want)


def test_resultant_degenerate_cases():
    assert discal.resultant(IntPoly.of([]), IntPoly.of([1, 1])) == 0
    assert discal.resultant(IntPoly.of([5]), IntPoly.of([1, 2, 1])) == 25
    assert discal.resultant(IntPoly.of([1, 1]), IntPoly.of([1, 1])) == 0
    g1, h1 = discal.iterate_fraction(1)
    assert discal.resultant(g1, h1) == 1


def test_discriminant_against_sympy():
    rng = random.Random(52)
    x = sympy.symbols("x")
    for _ in range(80):
        p = IntPoly.of([rng.randrange(-9, 10) for _ in range(rng.randrange(2, 8))]
                       + [rng.choice([-3, -2, -1, 1, 2, 3])])
        if p.degree < 1:
            continue
        want = sympy.discriminant(poly_to_sympy(p, x), x)
        assert discal.discriminant(p) == int(want)


def test_discriminant_form_level1_level2():
    f1 = discal.discriminant_form(1)
    assert (f1.sign, f1.two_exponent, f1.t_exponent, f1.one_minus_t_exponent) == (1, 2, 1, 0)
    assert f1.evaluate(Fraction(7)) == 28  # literally 4t
    f2 = discal.discriminant_form(2)
    assert (f2.two_exponent, f2.t_exponent, f2.one_minus_t_exponent) == (8, 3, 1)
    assert f2.sign == -1  # recorded as computed; the published value is a +-


def test_discriminant_form_symbolic_oracle_level3():
    # independent route: the full symbolic discriminant over Z[t]
    x, t = sympy.symbols("x t")
    g, h = discal.iterate_fraction(3)
    sym = sympy.Poly(poly_to_sympy(g, x) - t * poly_to_sympy(h, x), x)
    want = sympy.Poly(sympy.discriminant(sym.as_expr(), x), t)
    form = discal.discriminant_form(3)
    got = sympy.Poly(
        form.sign * 2**form.two_exponent * t**form.t_exponent
        * (1 - t) ** form.one_minus_t_exponent, t)
    assert want == got


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_discriminant_shape_holds(n):
    form = discal.discriminant_form(n)
    assert form.two_exponent >= 0 and form.t_exponent >= 0
    assert form.one_minus_t_exponent >= 0
    assert form.sign in (-1, 1)


def test_discriminant_form_reproducible():
    assert discal.discriminant_form(4) == discal.discriminant_form(4)
    with pytest.raises(ValueError):
        discal.discriminant_form(6)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_specialization_consistency(n):
    form = discal.discriminant_form(n)
    bp = discal.iterate_bipoly(n)
    assert discal.discriminant(bp.at_t(2)) == form.evaluate(2)


def test_bipoly_coefficients_are_t_linear():
    bp = discal.iterate_bipoly(3)
    for k in range(bp.x_degree + 1):
        const, linear = bp.coefficient(k)
        assert isinstance(const, int) and isinstance(linear, int)
    gc, hc = bp.leading_in_t()
    assert (gc, hc) != (0, 0)


def test_leading_data_all_levels():
    for n in range(1, 7):
        data = discal.leading_data(n)
        assert data.ok, data.to_json()
    assert discal.leading_data(4).leading_g == 16
    assert discal.leading_data(3).leading_h == 4
    assert discal.leading_data(2).degree_relation == "="


def test_wronskian_and_power_checks():
    assert discal.wronskian(1) == IntPoly((2, -2))
    assert discal.wronskian(1).leading == -2
    assert discal.wronskian(2).leading == -4
    for n in range(1, 7):
        check = discal.resultant_power_check(n)
        assert check.ok, check.to_json()


def test_ramification_values():
    r1 = discal.ramification_values(1)
    assert r1.rational_roots == [Fraction(1)]
    g1, h1 = discal.iterate_fraction(1)
    assert g1(1) == 1 and h1(1) == 0
    r2 = discal.ramification_values(2)
    assert r2.rational_roots == [Fraction(0), Fraction(1), Fraction(2)]
    assert all(v in (0, 1) for pair in r2.values for v in pair)
    assert r2.irrational_degree == 0
    r3 = discal.ramification_values(3)
    assert r3.all_two_power_or_zero
    assert r3.irrational_degree == 2  # the two non-rational branch preimages
    r4 = discal.ramification_values(4)
    assert r4.all_two_power_or_zero
