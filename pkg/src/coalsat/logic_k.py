"""One-step solver for the relational modal logic K."""

from __future__ import annotations

from . import formula as F
from .onestep import SAT, UNSAT, Logic, OneStepPair, OneStepResult, atoms_consistent


def solve_k(pair: OneStepPair) -> OneStepResult:
    """Pick one successor valuation per positive diamond.

    A successor set works iff every positive diamond has a valuation in it
    making its variable true while falsifying all negated diamonds, so the
    choices can be made independently.
    """
    if not atoms_consistent(pair):
        return OneStepResult(UNSAT)
    for lit in pair.clause:
        if lit.formula.kind != F.DIA:
            raise ValueError(f"K cannot interpret {F.render(lit.formula)}")
    negative = [lit.vars[0] for lit in pair.clause if not lit.positive]
    witness: dict = {}
    for lit in pair.clause:
        if not lit.positive:
            continue
        v = lit.vars[0]
        chosen = None
        for val in pair.constraint:
            if val[v] and not any(val[u] for u in negative):
                chosen = val
                break
        if chosen is None:
            return OneStepResult(UNSAT)
        witness[chosen] = 1
    return OneStepResult(SAT, witness)


class KLogic(Logic):
    name = "k"
    model_kind = "multigraph"
    kinds = frozenset({F.DIA})

    def solve(self, pair: OneStepPair) -> OneStepResult:
        return solve_k(pair)
