import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coalsat import formula as F
from coalsat.generate import FormulaGen, GenConfig, random_multigraph, random_subdist
from coalsat.parser import parse
from coalsat.semantics import KindMismatch, Multigraph, SubdistModel, model_check, satisfies_globally


def test_self_loop_count():
    m = Multigraph(1, [{0: 1}], [set()])
    assert model_check(m, parse("#(true) > 0")) == {0}


def test_deadlock_validates_disjunction():
    m = Multigraph(1, [{}], [set()])
    assert model_check(m, parse("(2*#(true) < 1) | (2*#(true) > 1)")) == {0}


def test_subdistribution_quarter():
    m = SubdistModel(1, [{0: Fraction(1, 4)}], [set()])
    assert model_check(m, parse("(2*w(true) < 1) & (2*w(true) > 0)")) == {0}


def test_validation_rejects_bad_models():
    with pytest.raises(ValueError):
        SubdistModel(2, [{0: Fraction(3, 4), 1: Fraction(1, 2)}, {}], [set(), set()])
    with pytest.raises(ValueError):
        Multigraph(1, [{0: -1}], [set()])


def test_kind_mismatch():
    m = SubdistModel(1, [{}], [set()])
    with pytest.raises(KindMismatch):
        model_check(m, parse("<>p"))


def test_hybrid_operators():
    m = Multigraph(2, [{1: 1}, {}], [{"p"}, set()], {"i": 1})
    assert model_check(m, parse("@'i ~p")) == {0, 1}
    assert model_check(m, parse("<>'i")) == {0}
    assert model_check(m, parse("A p")) == frozenset()
    assert satisfies_globally(m, parse("'i | p"), parse("p"))


def _random_model(logic, rng):
    n = rng.randint(1, 3)
    if logic == "prob":
        return random_subdist(rng, n, nominals=("i",))
    return random_multigraph(rng, n, nominals=("i",))


@given(st.integers(0, 10 ** 6), st.sampled_from(["k", "presburger", "prob"]))
def test_boolean_laws(seed, logic):
    rng = random.Random(seed)
    gen = FormulaGen(GenConfig(logic=logic, nominals=("i",), univ=True), rng)
    m = _random_model(logic, rng)
    f, g = gen.formula(3), gen.formula(3)
    everything = frozenset(range(m.n))
    assert model_check(m, F.And(f, g)) == model_check(m, f) & model_check(m, g)
    assert model_check(m, F.Neg(f)) == everything - model_check(m, f)
    assert model_check(m, F.nneg(f)) == model_check(m, F.Neg(f))
