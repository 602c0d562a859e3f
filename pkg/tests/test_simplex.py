from fractions import Fraction

from coalsat.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp


def test_optimum():
    # maximise x + y subject to x + 2y <= 4, 3x + y <= 6
    res = solve_lp([[1, 2], [3, 1]], ["<=", "<="], [4, 6], 2, objective=[-1, -1])
    assert res.status == OPTIMAL
    assert res.x == [Fraction(8, 5), Fraction(6, 5)]
    assert res.value == Fraction(-14, 5)


def test_infeasible():
    res = solve_lp([[1], [1]], [">=", "<="], [2, 1], 1)
    assert res.status == INFEASIBLE


def test_unbounded():
    res = solve_lp([[1, -1]], ["<="], [1], 2, objective=[-1, 0])
    assert res.status == UNBOUNDED


def test_equalities_and_negative_rhs():
    res = solve_lp([[1, 1], [1, -1]], ["=", ">="], [2, -4], 2)
    assert res.status == OPTIMAL
    x, y = res.x
    assert x + y == 2 and x - y >= -4 and x >= 0 and y >= 0


def test_degenerate_cycle_free():
    # a classic degenerate instance; Bland-style choice must terminate
    rows = [[Fraction(1, 4), -8, -1, 9], [Fraction(1, 2), -12, Fraction(-1, 2), 3], [0, 0, 1, 0]]
    res = solve_lp(rows, ["<=", "<=", "<="], [0, 0, 1], 4, objective=[Fraction(-3, 4), 20, Fraction(-1, 2), 6])
    assert res.status == OPTIMAL
    assert res.value == Fraction(-5, 4)
