import itertools
import random
import time

import pytest

from coalsat import formula as F
from coalsat.closure import closure
from coalsat.elim import all_types, decide_elim
from coalsat.errors import ResourceLimit
from coalsat.generate import FormulaGen, GenConfig, random_problem
from coalsat.hybrid import (
    consistent, consistent_assignments, decide_hybrid, decide_universal, eliminate_at,
    reduce_universal,
)
from coalsat.onestep import SAT, UNSAT, get_logic
from coalsat.oracle import oracle_search
from coalsat.parser import parse
from coalsat.semantics import model_check, satisfies_globally

K = get_logic("k")
PRES = get_logic("presburger")
PROB = get_logic("prob")
p, q = F.Atom("p"), F.Atom("q")


def test_no_universal_gives_one_instance():
    (red,) = list(reduce_universal(F.And(p, q)))
    assert red.assumption is F.Top() and red.goal is F.And(p, q) and red.side_goals == []


def test_universal_guess_substitution():
    reds = list(reduce_universal(F.And(F.Univ(p), q)))
    assert [r.U for r in reds] == [frozenset(), frozenset({0})]
    none, one = reds
    assert (none.assumption, none.goal, none.side_goals) == (F.Top(), F.And(F.Bot(), q), [F.Neg(p)])
    assert (one.assumption, one.goal, one.side_goals) == (p, F.And(F.Top(), q), [])


def test_hybrid_guess_uses_fresh_nominals():
    reds = list(reduce_universal(F.And(F.Univ(p), q), hybrid=True))
    assert reds[0].assumption is F.Implies(F.Nominal("#1"), F.Neg(p))
    assert reds[0].side_goals == []


def test_at_becomes_universal():
    assert eliminate_at(parse("@'i p")) is F.Univ(F.Implies(F.Nominal("i"), p))


def test_multigraph_vs_kripke_nominal():
    phi0 = parse("#('i) > 1")
    assert decide_hybrid(F.Top(), phi0, PRES).verdict == SAT
    assert decide_hybrid(F.Top(), phi0, PRES, kripke=True).verdict == UNSAT


def test_count_entailment():
    phi0 = parse("@'i (#('i) > #(p)) & ~@'i ~p")
    assert decide_hybrid(F.Top(), phi0, PRES).verdict == UNSAT
    # dropping the negated consequence leaves a satisfiable formula
    assert decide_hybrid(F.Top(), parse("@'i (#('i) > #(p))"), PRES).sat


def test_weight_entailment():
    phi0 = parse("@'i ((w('j) > w(~'j)) & (w('k) >= w(~'k))) & ~@'j 'k")
    assert decide_hybrid(F.Top(), phi0, PROB).verdict == UNSAT
    assert decide_hybrid(F.Top(), parse("@'i ((w('j) > w(~'j)) & (w('k) >= w(~'k)))"), PROB).sat


def test_k_nominal_clashes():
    assert decide_hybrid(F.Top(), parse("'i & <>'i & ~p & []p"), K).verdict == UNSAT
    assert decide_hybrid(F.Top(), parse("'i & 'j & p & @'j ~p"), K).verdict == UNSAT
    v = decide_hybrid(F.Top(), parse("'i & <>'i & p"), K)
    assert v.sat and satisfies_globally(v.model, F.Top(), parse("'i & <>'i & p"))


def test_universal_without_nominals():
    assert decide_universal(F.Top(), parse("A p & <>~p"), K).verdict == UNSAT
    v = decide_universal(F.Top(), parse("~A p & q"), K)
    assert v.sat and model_check(v.model, parse("~A p & q"))


def test_reserved_names_rejected():
    with pytest.raises(ValueError):
        decide_hybrid(F.Top(), F.Nominal("#3"), K)


def definition_consistent(beta, table):
    """For all i, j: the nominal i belongs to beta(j) iff beta(i) = beta(j)."""
    for i, j in itertools.product(beta, repeat=2):
        members = set(table.sequent_formulas(beta[j]))
        if (F.Nominal(i) in members) != (beta[i] == beta[j]):
            return False
    return True


@pytest.mark.parametrize("text", ["'i | <>'j", "<>'j & (p -> 'i) & ~'j", "'i"])
def test_consistency_matches_definition(text):
    table = closure(F.Top(), parse(text))
    noms = F.nominals_of(parse(text))
    types = all_types(table)
    expected = []
    for combo in itertools.product(types, repeat=len(noms)):
        beta = dict(zip(noms, combo))
        assert consistent(beta, table) == definition_consistent(beta, table)
        if definition_consistent(beta, table):
            expected.append(beta)
    got = list(consistent_assignments(noms, {i: types for i in noms}, table))
    assert got == expected


def test_assignment_cap():
    table = closure(F.Top(), parse("'i | 'j | <>p | <>q"))
    types = all_types(table)
    with pytest.raises(ResourceLimit):
        list(consistent_assignments(["i", "j"], {"i": types, "j": types}, table, cap=1))


@pytest.mark.parametrize("logic", ["k", "presburger", "prob"])
def test_nominal_free_agrees_with_elim(logic):
    solver = get_logic(logic)
    rng = random.Random(17)
    for _ in range(25):
        psi, phi0 = random_problem(GenConfig(logic=logic), rng)
        assert decide_hybrid(psi, phi0, solver).verdict == decide_elim(psi, phi0, solver).verdict


def test_universal_procedures_agree():
    rng = random.Random(23)
    cfg = GenConfig(logic="k", univ=True, max_closure=10)
    for _ in range(25):
        psi, phi0 = random_problem(cfg, rng)
        a = decide_universal(psi, phi0, K).verdict
        b = decide_hybrid(psi, phi0, K).verdict
        assert a == b


@pytest.mark.parametrize("logic", ["k", "presburger"])
def test_oracle_direction(logic):
    solver = get_logic(logic)
    rng = random.Random(31)
    cfg = GenConfig(logic=logic, atoms=("p",), nominals=("i", "j"), univ=True, depth=2, max_closure=10)
    for _ in range(20):
        psi, phi0 = random_problem(cfg, rng)
        v = decide_hybrid(psi, phi0, solver)
        found = oracle_search(psi, phi0, "multigraph", max_states=2, max_weight=2)
        if found is not None:
            assert v.sat
        if v.sat:
            for i, s in v.model.nominals.items():
                assert model_check(v.model, F.Nominal(i)) == {s}
