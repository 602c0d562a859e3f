import random

from hypothesis import given, strategies as st

from coalsat.intsolve import (
    IntConstraintSystem, IntRow, feasible, holds, lattice_feasible, normalize, propagate,
)

from oracles import exhaustive, random_int_system


def system(n, *rows):
    return IntConstraintSystem(n, [IntRow(*r) for r in rows])


def test_strict_lower_bound_gets_slack():
    (eq,) = normalize(system(1, ((1,), ">", 1)))
    assert eq.A == [[1, -1]] and eq.b == [2]
    assert eq.orig_vars == 1 and eq.num_vars == 2


def test_congruence_splits_sign():
    branches = normalize(system(1, ((2,), "mod", 1, 2)))
    assert sorted(e.A[0] for e in branches) == [[2, -2], [2, 2]]
    assert all(e.b == [1] for e in branches)
    assert not feasible(system(1, ((2,), "mod", 1, 2))).sat


def test_equality_unchanged():
    (eq,) = normalize(system(1, ((1,), "=", 0)))
    assert eq.A == [[1]] and eq.b == [0] and eq.num_vars == 1


def test_examples():
    res = feasible(system(2, ((1, 1), "=", 2), ((1, -1), "=", 0)))
    assert res.sat and res.x == [1, 1]
    res = feasible(system(1, ((1,), ">", 1), ((1,), "mod", 0, 3)))
    assert res.sat and res.x == [3]
    assert not feasible(system(1, ((2,), "=", 1))).sat


def test_lattice_test():
    assert not lattice_feasible([[2, 4]], [3], 2)
    assert lattice_feasible([[2, 3]], [1], 2)


def test_propagation_detects_forced_zero():
    # x + y = 0 over the naturals forces both to zero
    (eq,) = normalize(system(2, ((1, 1), "=", 0)))
    lower, upper = propagate(eq, {}, {})
    assert upper[0] == 0 and upper[1] == 0
    (eq,) = normalize(system(1, ((1,), "=", -1)))
    assert propagate(eq, {}, {}) is None


def test_agrees_with_exhaustive_search_in_box():
    rng = random.Random(4)
    sat = 0
    for _ in range(600):
        sys = random_int_system(rng, box=8)
        res = feasible(sys)
        assert res.sat == (exhaustive(sys, 8) is not None)
        if res.sat:
            assert holds(sys, res.x)
            sat += 1
    assert sat > 100


def test_unboxed_solutions_are_real():
    rng = random.Random(5)
    for _ in range(300):
        sys = random_int_system(rng)
        res = feasible(sys)
        if res.sat:
            assert holds(sys, res.x)
        # solutions may lie outside the search box, so only one direction is exact
        if exhaustive(sys, 8) is not None:
            assert res.sat


@given(st.integers(0, 10 ** 6))
def test_small_unsat_really_empty(seed):
    sys = random_int_system(random.Random(seed), max_vars=2, max_rows=2)
    if not feasible(sys).sat:
        assert exhaustive(sys, 12) is None
