import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coalsat import formula as F
from coalsat.closure import closure
from coalsat.elim import all_types
from coalsat.onestep import (
    SAT, OneStepResult, check_witness, get_logic, make_pair, pair_for_state, pair_for_type,
    type_constraint, type_variables,
)
from coalsat.parser import parse
from coalsat.poly import Poly

from oracles import random_type_pairs

a, b, c, p = (F.Atom(n) for n in "abcp")


def valuations(names, pred=lambda v: True):
    out = []
    for bits in itertools.product([False, True], repeat=len(names)):
        v = dict(zip(names, bits))
        if pred(v):
            out.append(v)
    return out


def test_type_pair_shape():
    f = F.And(F.Neg(F.Diamond(a)), F.And(F.Neg(F.Diamond(b)), F.Diamond(c)))
    psi = F.Implies(c, F.Or(a, b))
    table = closure(psi, f)
    types = all_types(table)
    gamma = next(g for g in types if g >> table.phi0_index & 1)
    pair = pair_for_type(gamma, types, table)
    assert [(lit.positive, lit.formula) for lit in pair.clause] == [
        (False, F.Diamond(a)), (False, F.Diamond(b)), (True, F.Diamond(c))]
    assert len(pair.variables) == 3
    # c -> a | b rules out one of the 8 argument valuations
    assert len(pair.constraint) == 7
    assert not get_logic("k").solve(pair).sat


def test_empty_set_gives_empty_constraint():
    table = closure(F.Top(), F.Diamond(p))
    gamma = next(g for g in all_types(table) if g >> table.phi0_index & 1)
    pair = pair_for_type(gamma, [], table)
    assert pair.constraint == []
    assert not get_logic("k").solve(pair).sat


def test_no_modal_atoms_is_trivially_satisfiable():
    pair = make_pair([], [{}])
    assert pair.clause == []
    assert get_logic("presburger").solve(pair).sat


def test_state_pair_with_both_children():
    f = parse("(#(p) > 0) & ~(#(p) > 1)")
    table = closure(F.Top(), f)
    gamma = table.mask([parse("#(p) > 0"), F.Neg(parse("#(p) > 1"))])
    top = table.mask([F.Top()])
    kids = [top | table.mask([p]), top | table.mask([F.Neg(p)])]
    pair = pair_for_state(gamma, kids, table)
    assert len(pair.variables) == 2
    assert len(pair.constraint) == 2
    assert pair_for_state(gamma, [], table).constraint == []


def test_clashing_state_gets_separate_variables():
    table = closure(F.Top(), F.And(F.Diamond(p), F.Neg(F.Diamond(p))))
    gamma = table.mask([F.Diamond(p), F.Neg(F.Diamond(p))])
    kids = [table.mask([p]), table.mask([F.Neg(p)])]
    pair = pair_for_state(gamma, kids, table)
    assert [lit.positive for lit in pair.clause] == [True, False]
    assert pair.clause[0].vars != pair.clause[1].vars
    assert sorted(pair.constraint) == [(False, False), (True, True)]
    assert not get_logic("k").solve(pair).sat


def test_check_witness_presburger():
    pair = make_pair([(True, parse("#(a) > 0"))], valuations("a"))
    assert check_witness(pair, OneStepResult(SAT, {(True,): 1}))
    assert not check_witness(pair, OneStepResult(SAT, {(False,): 1}))
    assert not check_witness(pair, OneStepResult(SAT, {(True,): Fraction(1, 2)}), "presburger")


def test_check_witness_prob():
    pair = make_pair([(True, parse("2*w(a) < 1")), (True, parse("2*w(a) > 0"))],
                     valuations("a", lambda v: v["a"]))
    assert check_witness(pair, OneStepResult(SAT, {(True, True): Fraction(1, 4)}), "prob")
    assert not check_witness(pair, OneStepResult(SAT, {(True, True): Fraction(3, 4)}), "prob")


def test_make_pair_deduplicates():
    pair = make_pair([(True, F.Diamond(F.Or(a, b)))], valuations("ab"))
    assert sorted(pair.constraint) == [(False,), (True,)]
    assert sorted(map(len, pair.origins.values())) == [1, 3]


@given(st.integers(0, 10 ** 6))
def test_constraint_monotone_and_bounded(seed):
    rng = random.Random(seed)
    table = closure(parse("<>p | <>(q & ~p)"), parse("~<>q & <><>p"))
    variables, _, _ = type_variables(table)
    types = all_types(table)
    small = rng.sample(types, rng.randint(0, len(types)))
    big = small + rng.sample(types, rng.randint(0, len(types)))
    cs, _ = type_constraint(table, variables, small)
    cb, _ = type_constraint(table, variables, big)
    assert set(cs) <= set(cb)
    assert len(cs) <= len(set(small))
    pair = pair_for_type(types[0], small, table)
    assert len(pair.variables) == len([i for i in table.modal if table.formulas[i].children])
    assert len({lit.formula for lit in pair.clause}) == len(pair.clause)


@pytest.mark.parametrize("logic", ["k", "presburger", "prob"])
def test_every_sat_result_checks(logic):
    solver = get_logic(logic)
    for pair in random_type_pairs(logic, 150, seed=3):
        res = solver.solve(pair)
        if res.sat:
            assert check_witness(pair, res, logic)
