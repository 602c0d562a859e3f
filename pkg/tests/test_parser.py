import random
from fractions import Fraction

import pytest

from coalsat import formula as F
from coalsat.errors import ParseError
from coalsat.generate import FormulaGen, GenConfig
from coalsat.parser import parse
from coalsat.poly import Poly

p, q = F.Atom("p"), F.Atom("q")


def test_precedence():
    assert parse("p & q | ~p") is F.Or(F.And(p, q), F.Neg(p))
    assert parse("p -> q -> p") is F.Implies(p, F.Implies(q, p))
    assert parse("[]p") is F.Box(p)


def test_presburger_comparison():
    f = parse("2*#(true) < 1")
    assert f is F.Presburger([(2, F.Top())], "<", 1)
    assert parse("#(p) >= #(q)") is F.Presburger([(1, p), (-1, q)], ">", -1)


def test_probabilistic_comparison():
    # strict comparisons are negated non-strict ones
    f = parse("2*w(p) > 1/2")
    assert f is F.Neg(F.Prob(Fraction(1, 2) - 2 * Poly.var(0), [p]))
    assert parse("w(p) >= 1/2") is F.Prob(Poly.var(0) - Fraction(1, 2), [p])


def test_probabilistic_product():
    f = parse("w(p) * w(q) >= 1/4")
    assert f is F.Prob(Poly.var(0) * Poly.var(1) - Fraction(1, 4), [p, q])


def test_hybrid_syntax():
    assert parse("@'i p") is F.Sat("i", p)
    assert parse("A ~p") is F.Univ(F.Neg(p))


@pytest.mark.parametrize("text", ["p &", "(p", "#(p) < ", "2*#(p) < w(q)", "p q", "$"])
def test_errors(text):
    with pytest.raises(ParseError):
        parse(text)


@pytest.mark.parametrize("logic", ["k", "presburger", "prob"])
def test_render_round_trip(logic):
    gen = FormulaGen(GenConfig(logic=logic, nominals=("i",), univ=True, nonlinear=True),
                     random.Random(7))
    for _ in range(300):
        f = gen.formula(4)
        assert parse(F.render(f)) is f
