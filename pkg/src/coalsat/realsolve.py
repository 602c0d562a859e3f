"""Real feasibility back ends.

``lin_feasible`` decides systems of linear constraints exactly: strict rows
are handled by maximising a common slack ``eps`` and testing ``eps > 0``.
``poly_feasible`` is a sound but incomplete branch-and-prune search over
sub-boxes of the unit cube, using exact interval bounds to discard boxes
and exact rational candidate points to certify satisfiability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import Poly
from .simplex import OPTIMAL, UNBOUNDED, solve_lp

RELS = (">=", ">", "=", "<=", "<")

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


@dataclass
class PolySystem:
    """Constraints ``poly rel 0`` over variables ``0 .. num_vars - 1``."""

    num_vars: int
    constraints: list = field(default_factory=list)   # (Poly, rel)

    def degree(self) -> int:
        return max((p.degree() for p, _ in self.constraints), default=0)

    def holds(self, point: Sequence[Fraction]) -> bool:
        return all(_rel_holds(p.evaluate(point), rel) for p, rel in self.constraints)


@dataclass
class RealResult:
    verdict: str
    point: list | None = None
    certificate: object | None = None
    nodes: int = 0


def _rel_holds(value: Fraction, rel: str) -> bool:
    if rel == ">=":
        return value >= 0
    if rel == ">":
        return value > 0
    if rel == "=":
        return value == 0
    if rel == "<=":
        return value <= 0
    if rel == "<":
        return value < 0
    raise ValueError(f"unknown relation {rel!r}")


def lin_feasible(sys: PolySystem, nonneg: bool = False) -> RealResult:
    """Exact decision for linear systems.

    Variables are free unless ``nonneg``; free variables are split into a
    difference of two non-negative ones for the simplex.
    """
    if sys.degree() > 1:
        raise ValueError("lin_feasible needs linear constraints")
    n = sys.num_vars
    width = n if nonneg else 2 * n
    eps = width  # column of the strictness slack
    rows, senses, rhs = [], [], []
    strict = False
    for p, rel in sys.constraints:
        lin = p.linear_coeffs()
        c = p.constant()
        row = [Fraction(0)] * (width + 1)
        for v, a in lin.items():
            row[v] = a
            if not nonneg:
                row[n + v] = -a
        if rel in ("<", "<="):
            row = [-a for a in row]
            c = -c
        rel = {"<": ">", "<=": ">="}.get(rel, rel)
        if rel == ">":
            row[eps] = Fraction(-1)
            strict = True
            senses.append(">=")
        elif rel == ">=":
            senses.append(">=")
        else:
            senses.append("=")
        rows.append(row)
        rhs.append(-c)
    rows.append([Fraction(0)] * width + [Fraction(1)])
    senses.append("<=")
    rhs.append(Fraction(1))
    objective = [Fraction(0)] * width + [Fraction(-1 if strict else 0)]
    res = solve_lp(rows, senses, rhs, width + 1, objective)
    if res.status not in (OPTIMAL, UNBOUNDED):
        return RealResult(UNSAT)
    x = res.x
    if strict and x[eps] <= 0:
        return RealResult(UNSAT)
    point = x[:n] if nonneg else [x[i] - x[n + i] for i in range(n)]
    if not sys.holds(point):
        raise AssertionError("simplex point violates the system")
    return RealResult(SAT, point)


# polynomial branch and prune -------------------------------------------------

def _interval_infeasible(p: Poly, rel: str, box) -> bool:
    lo, hi = p.interval(box)
    if rel == ">=":
        return hi < 0
    if rel == ">":
        return hi <= 0
    if rel == "=":
        return lo > 0 or hi < 0
    if rel == "<=":
        return lo > 0
    return lo >= 0


def _candidates(box, n: int):
    yield [(a + b) / 2 for a, b in box]
    if n <= 10:
        for corner in itertools.product((0, 1), repeat=n):
            yield [box[i][c] for i, c in enumerate(corner)]


def _split(box):
    widths = [b - a for a, b in box]
    j = max(range(len(box)), key=lambda i: (widths[i], -i))
    a, b = box[j]
    mid = (a + b) / 2
    left = list(box)
    right = list(box)
    left[j] = (a, mid)
    right[j] = (mid, b)
    return j, left, right


def poly_feasible(sys: PolySystem, depth: int = 24, max_nodes: int = 20000,
                  certify: bool = False) -> RealResult:
    """Branch and prune over ``[0, 1]^n``.

    Returns SAT only with an exactly verified rational point, UNSAT only when
    every box was discarded by an interval bound, and UNKNOWN otherwise.
    With ``certify`` the UNSAT answer carries a pruning tree that
    ``check_certificate`` re-validates.
    """
    n = sys.num_vars
    root = [(Fraction(0), Fraction(1))] * n
    nodes = 0
    unknown = False
    # explicit stack of (box, depth, certificate slot)
    cert_root: list = [None]
    stack = [(root, 0, cert_root, 0)]
    while stack:
        box, d, parent, slot = stack.pop()
        nodes += 1
        pruned = next(
            (i for i, (p, rel) in enumerate(sys.constraints) if _interval_infeasible(p, rel, box)),
            None,
        )
        if pruned is not None:
            parent[slot] = ("prune", pruned)
            continue
        for pt in _candidates(box, n):
            if sys.holds(pt):
                return RealResult(SAT, pt, None, nodes)
        if d >= depth or nodes >= max_nodes or n == 0:
            unknown = True
            parent[slot] = ("open",)
            continue
        j, left, right = _split(box)
        node = ["split", j, None, None]
        parent[slot] = node
        stack.append((right, d + 1, node, 3))
        stack.append((left, d + 1, node, 2))
    if unknown:
        return RealResult(UNKNOWN, None, None, nodes)
    return RealResult(UNSAT, None, cert_root[0] if certify else None, nodes)


def check_certificate(sys: PolySystem, cert) -> bool:
    """Re-check a pruning tree: every leaf box is interval-infeasible."""
    root = [(Fraction(0), Fraction(1))] * sys.num_vars
    stack = [(root, cert)]
    while stack:
        box, node = stack.pop()
        if node is None or node[0] == "open":
            return False
        if node[0] == "prune":
            p, rel = sys.constraints[node[1]]
            if not _interval_infeasible(p, rel, box):
                return False
            continue
        j, left, right = _split(box)
        if j != node[1]:
            return False
        stack.append((left, node[2]))
        stack.append((right, node[3]))
    return True
