"""One-step solver for probabilistic modal logic with polynomial constraints.

Each constraint valuation gets a variable holding the probability mass of
successors of that shape.  The weight of an argument is the sum of the
variables whose valuation makes it true, and the total mass is at most one
(the remainder is the probability of deadlock).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formula as F
from .onestep import SAT, UNKNOWN, UNSAT, Logic, OneStepPair, OneStepResult, atoms_consistent
from .poly import Poly, poly_sum
from .realsolve import PolySystem, lin_feasible, poly_feasible
from . import realsolve


def reduce_prob(pair: OneStepPair) -> PolySystem:
    n = len(pair.constraint)
    xs = [Poly.var(j) for j in range(n)]
    sys = PolySystem(n)
    for lit in pair.clause:
        f = lit.formula
        if f.kind != F.PROB:
            raise ValueError(f"probabilistic logic cannot interpret {F.render(f)}")
        images = [
            poly_sum(xs[j] for j, val in enumerate(pair.constraint) if val[v]) for v in lit.vars
        ]
        p = f.data.substitute(images)
        sys.constraints.append((p, ">=" if lit.positive else "<"))
    for x in xs:
        sys.constraints.append((x, ">="))
    sys.constraints.append((Poly.const(1) - poly_sum(xs), ">="))
    return sys


def solve_prob(pair: OneStepPair, depth: int = 24, max_nodes: int = 20000) -> OneStepResult:
    if not atoms_consistent(pair):
        return OneStepResult(UNSAT)
    sys = reduce_prob(pair)
    if sys.degree() <= 1:
        res = lin_feasible(sys, nonneg=True)
    else:
        res = poly_feasible(sys, depth=depth, max_nodes=max_nodes)
    if res.verdict == realsolve.SAT:
        witness = {val: x for val, x in zip(pair.constraint, res.point) if x}
        return OneStepResult(SAT, witness)
    if res.verdict == realsolve.UNKNOWN:
        return OneStepResult(UNKNOWN)
    return OneStepResult(UNSAT)


@dataclass
class ProbLogic(Logic):
    depth: int = 24
    max_nodes: int = 20000

    name = "prob"
    model_kind = "subdist"
    kinds = frozenset({F.PROB})

    def solve(self, pair: OneStepPair) -> OneStepResult:
        return solve_prob(pair, self.depth, self.max_nodes)
