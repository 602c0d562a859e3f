from fractions import Fraction

import pytest

from coalsat import formula as F
from coalsat.elim import decide_elim
from coalsat.generate import GenConfig, random_corpus
from coalsat.onestep import get_logic
from coalsat.oracle import oracle_run, oracle_search
from coalsat.parser import parse
from coalsat.semantics import satisfies_globally

from oracles import small_corpus


def test_single_successor():
    m = oracle_search(F.Top(), parse("#(a) > 0"), "multigraph")
    assert m.n == 1 and m.succ == [{0: 1}] and m.atoms == [{"a"}]


def test_nothing_for_contradiction():
    out = oracle_run(F.Neg(F.Atom("p")), parse("<>p"), "multigraph")
    assert out.model is None and out.complete


def test_even_count():
    phi0 = parse("(#(a) =mod 2= 0) & (#(a) > 0)")
    m = oracle_search(F.Top(), phi0, "multigraph")
    s = next(iter(range(m.n)))
    assert sum(w for t, w in m.succ[s].items() if "a" in m.atoms[t]) == 2


def test_quarter_weight():
    phi0 = parse("(2*w(a) < 1) & (2*w(a) > 0)")
    m = oracle_search(F.Top(), phi0, "subdist")
    assert m is not None and satisfies_globally(m, F.Top(), phi0)
    assert all(isinstance(w, Fraction) for row in m.succ for w in row.values())


def test_time_budget():
    out = oracle_run(F.Top(), parse("#(p) + #(q) + #(r) = 13"), "multigraph", time_budget=0.0)
    assert not out.complete and out.model is None


def test_agrees_with_solver_on_tiny_corpus():
    for logic, kind in (("k", "multigraph"), ("presburger", "multigraph"), ("prob", "subdist")):
        solver = get_logic(logic)
        for psi, phi0 in small_corpus(logic, 15, seed=41):
            m = oracle_search(psi, phi0, kind, max_states=2, max_weight=2, max_denominator=2)
            v = decide_elim(psi, phi0, solver)
            if m is not None:
                assert v.sat


def test_at_label_only_nominal():
    m = oracle_search(F.Top(), parse("@'i p & @'i ~q"), "multigraph")
    assert m is not None and "p" in m.atoms[m.nominals["i"]]
    assert oracle_search(F.Top(), parse("@'i p & @'i ~p"), "multigraph") is None


def test_methods_agree_on_plain_corpus():
    for logic, kind in (("k", "multigraph"), ("presburger", "multigraph"), ("prob", "subdist")):
        for psi, phi0 in small_corpus(logic, 30, seed=7):
            a = oracle_run(psi, phi0, kind, 2, 2, 2, method="labels").model is not None
            b = oracle_run(psi, phi0, kind, 2, 2, 2, method="matrices").model is not None
            assert a == b, (F.render(psi), F.render(phi0))


def test_methods_agree_on_hybrid_corpus():
    cfg_kinds = (("k", "multigraph"), ("presburger", "multigraph"), ("prob", "subdist"))
    for logic, kind in cfg_kinds:
        cfg = GenConfig(logic=logic, nominals=("i", "j"), univ=True, max_closure=10)
        for psi, phi0 in random_corpus(cfg, 25, seed=3):
            a = oracle_run(psi, phi0, kind, 2, 1, 1, method="labels").model is not None
            b = oracle_run(psi, phi0, kind, 2, 1, 1, method="matrices").model is not None
            assert a == b, (F.render(psi), F.render(phi0))


def test_unknown_method():
    with pytest.raises(ValueError):
        oracle_run(F.Top(), F.Top(), "multigraph", method="guess")
