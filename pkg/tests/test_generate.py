import random

import pytest

from coalsat import formula as F
from coalsat.generate import (
    GenConfig, chain_problem, closure_size, format_corpus, parse_corpus, random_corpus,
    random_multigraph, random_subdist,
)


@pytest.mark.parametrize("logic", ["k", "presburger", "prob"])
def test_corpus_respects_bounds(logic):
    cfg = GenConfig(logic=logic)
    corpus = random_corpus(cfg, 100, seed=1)
    assert corpus == random_corpus(cfg, 100, seed=1)
    for psi, phi0 in corpus:
        assert closure_size(psi, phi0) <= 12
        for g in F.subformulas(F.And(psi, phi0)):
            if g.kind == F.PRES:
                coeffs, rel, bound, modulus = g.data
                assert all(-3 <= c <= 3 for c in coeffs)
                assert modulus is None or modulus <= 3
            if g.kind == F.PROB:
                assert g.data.degree() <= 1


def test_chain_shape():
    psi, phi0 = chain_problem(3)
    assert psi is F.Top()
    assert F.render(phi0) == "(1*#((1*#((1*#(~false) > 0)) > 0)) > 0)"


def test_corpus_text_round_trip():
    corpus = random_corpus(GenConfig(logic="presburger"), 20, seed=2)
    text = format_corpus(corpus, header="twenty problems")
    parsed = parse_corpus(text)
    assert [(a, b) for _, a, b in parsed] == corpus
    assert parsed[0][0] == 2


def test_corpus_rejects_missing_turnstile():
    with pytest.raises(ValueError):
        parse_corpus("p & q\n")


def test_random_models_are_valid():
    rng = random.Random(0)
    for _ in range(50):
        m = random_multigraph(rng, 3, nominals=("i",))
        assert m.nominals["i"] in range(3)
        d = random_subdist(rng, 3)
        assert all(sum(row.values()) <= 1 for row in d.succ)
