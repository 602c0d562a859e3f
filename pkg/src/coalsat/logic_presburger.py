"""One-step solver for Presburger modal logic over multigraphs.

Every constraint valuation gets a variable counting the successors of that
shape; each modal literal then becomes a linear row over those counts.
Negated equalities and congruences turn into a disjunction of rows, which is
handled by enumerating the cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import formula as F
from .intsolve import IntConstraintSystem, IntRow, feasible
from .onestep import SAT, UNSAT, Logic, OneStepPair, OneStepResult, atoms_consistent


@dataclass
class PresburgerReduction:
    num_vars: int
    rows: list = field(default_factory=list)       # always present
    choices: list = field(default_factory=list)    # each: list of alternative rows

    def systems(self):
        """Conjunctive systems, one per combination of case choices."""
        for pick in itertools.product(*self.choices):
            yield IntConstraintSystem(self.num_vars, list(self.rows) + list(pick))


def _literal_rows(lit, pair: OneStepPair) -> tuple:
    f = lit.formula
    if f.kind == F.DIA:
        coeffs, rel, bound, modulus = (1,), ">", 0, None
    elif f.kind == F.PRES:
        coeffs, rel, bound, modulus = f.data
    else:
        raise ValueError(f"Presburger logic cannot interpret {F.render(f)}")
    row = tuple(
        sum(c for c, v in zip(coeffs, lit.vars) if val[v]) for val in pair.constraint
    )
    if lit.positive:
        return [IntRow(row, rel, bound, modulus)], None
    if rel == ">":
        return [IntRow(row, "<", bound + 1)], None
    if rel == "<":
        return [IntRow(row, ">", bound - 1)], None
    if rel == "=":
        return [], [IntRow(row, ">", bound), IntRow(row, "<", bound)]
    others = [r for r in range(modulus) if (r - bound) % modulus != 0]
    return [], [IntRow(row, "mod", r, modulus) for r in others]


def reduce_presburger(pair: OneStepPair) -> PresburgerReduction:
    red = PresburgerReduction(len(pair.constraint))
    for lit in pair.clause:
        rows, alternatives = _literal_rows(lit, pair)
        red.rows.extend(rows)
        if alternatives is not None:
            red.choices.append(alternatives)
    return red


def solve_presburger(pair: OneStepPair) -> OneStepResult:
    if not atoms_consistent(pair):
        return OneStepResult(UNSAT)
    red = reduce_presburger(pair)
    for system in red.systems():
        res = feasible(system)
        if res.sat:
            witness = {val: x for val, x in zip(pair.constraint, res.x) if x}
            return OneStepResult(SAT, witness)
    return OneStepResult(UNSAT)


class PresburgerLogic(Logic):
    name = "presburger"
    model_kind = "multigraph"
    kinds = frozenset({F.PRES, F.DIA})

    def solve(self, pair: OneStepPair) -> OneStepResult:
        return solve_presburger(pair)
