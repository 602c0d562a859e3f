import pytest

from coalsat import formula as F
from coalsat.logic_k import solve_k
from coalsat.onestep import check_witness, make_pair

from oracles import abc_valuations, all_rows, k_brute_force, random_type_pairs

a, b, c = F.Atom("a"), F.Atom("b"), F.Atom("c")


def test_excluded_middle_successor_is_impossible():
    rows = [r for r in all_rows() if not r[2] or r[0] or r[1]]   # c -> a | b
    pair = make_pair([(False, F.Diamond(a)), (False, F.Diamond(b)), (True, F.Diamond(c))],
                     abc_valuations(rows))
    assert not solve_k(pair).sat


def test_single_diamond():
    pair = make_pair([(True, F.Diamond(a))], [{"a": False}, {"a": True}])
    res = solve_k(pair)
    assert res.sat and res.witness == {(True,): 1}


def test_negative_diamond_needs_no_successor():
    pair = make_pair([(False, F.Diamond(a))], [{"a": True}])
    res = solve_k(pair)
    assert res.sat and res.witness == {}


def test_rejects_foreign_modalities():
    pair = make_pair([(True, F.Presburger([(2, a)], ">", 1))], [{"a": True}])
    with pytest.raises(ValueError):
        solve_k(pair)


def test_agrees_with_subset_search():
    pairs = random_type_pairs("k", 400, seed=11, max_vars=4)
    assert len(pairs) == 400
    for pair in pairs:
        res = solve_k(pair)
        assert res.sat == k_brute_force(pair)
        if res.sat:
            assert check_witness(pair, res, "k")
