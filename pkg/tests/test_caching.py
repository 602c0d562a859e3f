import random

import pytest

from coalsat import formula as F
from coalsat.caching import Graph, SequentSpace, Strategy, decide_caching
from coalsat.closure import closure
from coalsat.elim import all_types, decide_elim
from coalsat.errors import ResourceLimit
from coalsat.generate import chain_problem
from coalsat.onestep import SAT, UNSAT, get_logic
from coalsat.parser import parse
from coalsat.semantics import satisfies_globally

from oracles import small_corpus

p, q = F.Atom("p"), F.Atom("q")
K = get_logic("k")
PRES = get_logic("presburger")


def space_for(psi, phi0, logic=K):
    table = closure(psi, phi0)
    return table, SequentSpace(table, logic)


def test_conjunction_rule():
    table, sp = space_for(F.Top(), F.And(p, q))
    seq = table.mask([F.And(p, q)])
    assert sp.prop_rules(seq) == [(table.idx(F.And(p, q)), [table.mask([p, q])])]


def test_negated_conjunction_branches():
    f = F.Neg(F.And(p, q))
    table, sp = space_for(F.Top(), f)
    (rule,) = sp.prop_rules(table.mask([f]))
    assert rule[1] == [table.mask([F.Neg(p)]), table.mask([F.Neg(q)])]


def test_falsum_rule_has_no_conclusions():
    table, sp = space_for(F.Top(), F.And(F.Bot(), p))
    rules = sp.prop_rules(table.mask([F.Bot(), p]))
    assert (table.bot_index, []) in rules


def test_double_negation_replaced():
    f = F.Neg(F.Neg(p))
    table, sp = space_for(F.Top(), f)
    assert sp.prop_rules(table.mask([f])) == [(table.idx(f), [table.mask([p])])]


def test_state_children():
    f = parse("#(p) > 0")
    table, sp = space_for(F.Top(), f, PRES)
    top = table.mask([F.Top()])
    kids = list(sp.state_children(table.mask([f])))
    assert kids == [top | table.mask([p]), top | table.mask([F.Neg(p)])]
    assert all(sp.is_child_of_state(table.mask([f]), k) for k in kids)


def test_chain_state_has_two_children():
    psi, phi0 = chain_problem(4)
    table, sp = space_for(psi, phi0, PRES)
    assert len(list(sp.state_children(table.mask([phi0])))) == 2


def test_child_cap():
    f = F.conj(F.Diamond(F.Atom(f"p{k}")) for k in range(5))
    table, sp = space_for(F.Top(), f)
    state = table.mask([F.Diamond(F.Atom(f"p{k}")) for k in range(5)])
    sp.child_cap = 8
    with pytest.raises(ResourceLimit):
        list(sp.state_children(state))


def close_graph(g, start):
    sp = g.space
    todo = [start]
    g.add(start)
    while todo:
        s = todo.pop()
        kids = list(sp.state_children(s)) if sp.is_state(s) else sp.rule_children(s)
        for k in kids:
            if g.add(k):
                todo.append(k)
        g.complete.add(s)


def test_functionals_on_small_graph():
    table, sp = space_for(F.Top(), F.Diamond(p))
    g = Graph(sp)
    state = table.mask([F.Diamond(p)])
    g.add(state)
    assert state not in g.eg(set())          # no children: the diamond fails
    close_graph(g, state)
    E = g.nu_e()
    assert state in E
    # a non-state with one conclusion in S is in E_G(S)
    child = table.mask([F.Top(), p])
    assert child in g.eg({table.mask([p])})
    assert g.mu_a() == set()


def test_negative_example_state_in_a():
    # <>c with ~<>a, ~<>b under c -> a | b: every child is useless
    a, b, c = (F.Atom(n) for n in "abc")
    psi = F.Implies(c, F.Or(a, b))
    lits = [F.Neg(F.Diamond(a)), F.Neg(F.Diamond(b)), F.Diamond(c)]
    table, sp = space_for(psi, F.conj(lits))
    state = table.mask(lits)
    g = Graph(sp)
    g.add(state)
    kids = list(sp.state_children(state))
    for k in kids:
        g.add(k)
    g.complete.add(state)
    # the one child with c, ~a, ~b violates the assumption
    bad = {k for k in kids if k >> table.idx(c) & 1 and k >> table.idx(F.Neg(a)) & 1
           and k >> table.idx(F.Neg(b)) & 1}
    assert len(bad) == 1
    assert state in g.ag(bad)
    assert state not in g.ag(set())


def test_falsum_assumption_is_refuted():
    assert decide_caching(F.Bot(), F.Top(), K).verdict == UNSAT


def test_chain_economy():
    n = 12
    psi, phi0 = chain_problem(n)
    v = decide_caching(psi, phi0, PRES)
    assert v.sat
    assert v.stats["generated"] <= 4 * n + 4
    assert len(all_types(closure(psi, phi0))) >= 2 ** n


def check_invariants(graph, E, A):
    assert E <= graph.nu_e()
    assert A <= graph.mu_a()
    for g in A:
        if graph.space.is_state(g):
            assert g in graph.complete
    # seeding with the fixpoint itself changes nothing
    assert graph.nu_e(graph.nu_e()) == graph.nu_e()
    assert graph.mu_a(graph.mu_a()) == graph.mu_a()


@pytest.mark.parametrize("logic", ["k", "presburger", "prob"])
def test_propagation_invariants_and_agreement(logic):
    solver = get_logic(logic)
    for psi, phi0 in small_corpus(logic, 40, seed=8):
        v = decide_caching(psi, phi0, solver, Strategy(batch=2), on_propagate=check_invariants)
        lazy = decide_caching(psi, phi0, solver, Strategy(propagate_every=0))
        ref = decide_elim(psi, phi0, solver)
        assert v.verdict == lazy.verdict == ref.verdict
        if v.sat:
            assert satisfies_globally(v.model, psi, phi0)
