"""Dense two-phase simplex over exact rationals with Bland's rule.

Solves ``min c.x`` subject to rows ``a.x (<=|>=|=) b`` and ``x >= 0``.  All
arithmetic uses ``fractions.Fraction``; Bland's rule rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list | None = None
    value: Fraction | None = None


def _pivot(T: list, obj: list, basis: list, r: int, c: int):
    row = T[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        for j in range(len(row)):
            if row[j]:
                row[j] *= inv
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j in range(len(row)):
                    if row[j]:
                        other[j] -= f * row[j]
    f = obj[c]
    if f:
        for j in range(len(row)):
            if row[j]:
                obj[j] -= f * row[j]
    basis[r] = c


def _run(T: list, obj: list, basis: list, allowed: Sequence[bool]) -> str:
    """Minimise; ``obj`` holds reduced costs and ``-value`` in the last slot."""
    ncols = len(obj) - 1
    while True:
        enter = -1
        for j in range(ncols):
            if allowed[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        best = None
        leave = -1
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(T, obj, basis, leave, enter)


def solve_lp(rows: Sequence[Sequence], senses: Sequence[str], rhs: Sequence, nvars: int,
             objective: Sequence | None = None) -> LPResult:
    """Solve the LP; ``senses`` entries are ``"<="``, ``">="`` or ``"="``."""
    m = len(rows)
    A = [[Fraction(a) for a in r] + [Fraction(0)] * (nvars - len(r)) for r in rows]
    b = [Fraction(v) for v in rhs]
    sense = list(senses)
    for i in range(m):
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]
            sense[i] = {"<=": ">=", ">=": "<=", "=": "="}[sense[i]]
    n_slack = sum(1 for s in sense if s != "=")
    n_art = sum(1 for s in sense if s != "<=")
    ncols = nvars + n_slack + n_art
    T = []
    basis = []
    art_cols = []
    si = nvars
    ai = nvars + n_slack
    for i in range(m):
        row = A[i] + [Fraction(0)] * (n_slack + n_art) + [b[i]]
        if sense[i] == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if sense[i] == ">=":
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        T.append(row)

    allowed = [True] * ncols
    if art_cols:
        # phase one: minimise the sum of artificials
        obj = [Fraction(0)] * (ncols + 1)
        for c in art_cols:
            obj[c] = Fraction(1)
        for i, row in enumerate(T):
            if basis[i] in art_cols:
                for j in range(ncols + 1):
                    obj[j] -= row[j]
        _run(T, obj, basis, allowed)
        if obj[-1] != 0:
            return LPResult(INFEASIBLE)
        art = set(art_cols)
        # drive remaining zero-level artificials out of the basis
        keep = []
        for i in range(len(T)):
            if basis[i] in art:
                col = next((j for j in range(nvars + n_slack) if T[i][j] != 0), None)
                if col is None:
                    continue  # redundant row
                _pivot(T, obj, basis, i, col)
            keep.append(i)
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
        for c in art_cols:
            allowed[c] = False
            for row in T:
                row[c] = Fraction(0)

    cost = [Fraction(0)] * ncols
    if objective is not None:
        for j, c in enumerate(objective):
            cost[j] = Fraction(c)
    obj = cost + [Fraction(0)]
    for i, row in enumerate(T):
        cb = cost[basis[i]]
        if cb:
            for j in range(ncols + 1):
                obj[j] -= cb * row[j]
    status = _run(T, obj, basis, allowed)
    x = [Fraction(0)] * ncols
    for i, row in enumerate(T):
        x[basis[i]] = row[-1]
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, x[:nvars])
    return LPResult(OPTIMAL, x[:nvars], -obj[-1])
