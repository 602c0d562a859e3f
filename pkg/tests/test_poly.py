from fractions import Fraction

from hypothesis import given, strategies as st

from coalsat.poly import Poly, poly_sum

x, y = Poly.var(0), Poly.var(1)

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def test_arithmetic_normalizes():
    p = (x + 1) * (x - 1)
    assert p == x * x - 1
    assert (x - x).is_zero()
    assert p.degree() == 2
    assert p.variables() == {0}
    assert p.constant() == -1


def test_linear_coeffs_and_rename():
    p = 2 * x - Fraction(1, 2) * y + 3
    assert p.linear_coeffs() == {0: 2, 1: Fraction(-1, 2)}
    assert p.rename({0: 1, 1: 0}) == 2 * y - Fraction(1, 2) * x + 3


def test_substitute():
    assert (x * y).substitute([y, x + 1]) == y * x + y


def test_poly_sum_empty_is_zero():
    assert poly_sum([]).is_zero()
    assert poly_sum([x, y, x]) == 2 * x + y


@given(small, small, small)
def test_evaluate_matches_arithmetic(a, b, c):
    p = a * x * x + b * y + c
    assert p.evaluate([Fraction(1, 2), Fraction(3)]) == a / 4 + 3 * b + c


@given(small, small, small, small)
def test_interval_encloses_values(a, b, u, v):
    p = a * x * y + b * x - y
    lo, hi = p.interval([(Fraction(0), Fraction(1)), (Fraction(0), Fraction(1))])
    px = min(max(u, 0), 1)
    py = min(max(v, 0), 1)
    assert lo <= p.evaluate([px, py]) <= hi
