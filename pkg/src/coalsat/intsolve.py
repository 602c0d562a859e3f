"""Feasibility of linear integer constraint systems over the naturals.

Rows are ``sum c_i x_i (<|>|=) v`` or congruences ``sum c_i x_i = v (mod k)``.
Systems are first brought into equational form with slack variables, then
each equational branch is checked for integer-lattice solvability and
decided by depth-first branch and bound on exact rational relaxations.

Search bound: if ``A x = b`` (``m`` rows, ``N`` columns, all entries of
``A`` and ``b`` at most ``a`` in absolute value) has a solution in the
naturals, it has one with every component at most ``N * (m * a) ** (2m + 1)``
(Papadimitriou 1981).  Branches whose lower bounds exceed this value are
pruned, which makes the search finite without losing solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ResourceLimit
from .simplex import OPTIMAL, solve_lp


@dataclass(frozen=True)
class IntRow:
    coeffs: tuple
    rel: str            # "<", ">", "=" or "mod"
    bound: int
    modulus: int | None = None


@dataclass
class IntConstraintSystem:
    num_vars: int
    rows: list = field(default_factory=list)


@dataclass
class EqSystem:
    num_vars: int        # total, including slacks
    orig_vars: int
    A: list
    b: list


@dataclass
class IntResult:
    sat: bool
    x: list | None = None
    nodes: int = 0


def row_value(row: IntRow, x: Sequence[int]) -> int:
    return sum(c * v for c, v in zip(row.coeffs, x))


def row_holds(row: IntRow, x: Sequence[int]) -> bool:
    s = row_value(row, x)
    if row.rel == "<":
        return s < row.bound
    if row.rel == ">":
        return s > row.bound
    if row.rel == "=":
        return s == row.bound
    return (s - row.bound) % row.modulus == 0


def holds(sys: IntConstraintSystem, x: Sequence[int]) -> bool:
    return all(v >= 0 for v in x) and all(row_holds(r, x) for r in sys.rows)


def normalize(sys: IntConstraintSystem) -> list:
    """Equational branches; congruences contribute a two-way sign split."""
    n = sys.num_vars
    branches = [([], [], 0)]  # (A rows as dict col->coeff, b, slack count)
    for row in sys.rows:
        base = {j: c for j, c in enumerate(row.coeffs) if c}
        if row.rel == "=":
            options = [(None, row.bound)]
        elif row.rel == ">":
            options = [(-1, row.bound + 1)]
        elif row.rel == "<":
            options = [(1, row.bound - 1)]
        else:
            k = row.modulus
            options = [(-k, row.bound), (k, row.bound)]
        new = []
        for A, b, ns in branches:
            for slack_coeff, rhs in options:
                r = dict(base)
                extra = ns
                if slack_coeff is not None:
                    r[n + ns] = slack_coeff
                    extra = ns + 1
                new.append((A + [r], b + [rhs], extra))
        branches = new
    out = []
    for A, b, ns in branches:
        N = n + ns
        dense = [[r.get(j, 0) for j in range(N)] for r in A]
        out.append(EqSystem(N, n, dense, list(b)))
    return out


def lattice_feasible(A: Sequence[Sequence[int]], b: Sequence[int], N: int) -> bool:
    """Does ``A x = b`` have a solution in the integers (signs unrestricted)?

    Column operations by extended Euclid bring ``A`` to lower-triangular
    form; the triangular system is then solved by forward substitution.
    """
    M = [list(r) for r in A]
    m = len(M)
    pivots = []  # (row, col)
    k = 0
    for i in range(m):
        # gcd-reduce row i over columns k..N-1
        while True:
            nz = [j for j in range(k, N) if M[i][j] != 0]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda j: abs(M[i][j]))
            for j in nz:
                if j == p:
                    continue
                q = M[i][j] // M[i][p]
                if q:
                    for r in range(m):
                        M[r][j] -= q * M[r][p]
        nz = [j for j in range(k, N) if M[i][j] != 0]
        if nz:
            j = nz[0]
            if j != k:
                for r in range(m):
                    M[r][j], M[r][k] = M[r][k], M[r][j]
            pivots.append((i, k))
            k += 1
    y = [0] * N
    pivot_of_row = dict(pivots)
    for i in range(m):
        s = b[i] - sum(M[i][j] * y[j] for j in range(k))
        if i in pivot_of_row:
            c = pivot_of_row[i]
            s += M[i][c] * y[c]
            if s % M[i][c] != 0:
                return False
            y[c] = s // M[i][c]
        elif s != 0:
            return False
    return True


def search_bound(eq: EqSystem) -> int:
    m = max(len(eq.A), 1)
    a = max([1] + [abs(v) for r in eq.A for v in r] + [abs(v) for v in eq.b])
    return eq.num_vars * (m * a) ** (2 * m + 1)


def propagate(eq: EqSystem, lower: dict, upper: dict, rounds: int | None = None):
    """Interval bound propagation over the equality rows.

    Returns tightened ``(lower, upper)`` dicts, or None when some row has
    no integer solution within the bounds.  Missing lower bounds are 0 and
    missing upper bounds are infinite.  The number of sweeps is capped so
    that slowly creeping bounds cannot loop for long.
    """
    N = eq.num_vars
    lo = [lower.get(j, 0) for j in range(N)]
    hi = [upper.get(j) for j in range(N)]
    rounds = 2 * N + 2 if rounds is None else rounds
    for _ in range(rounds):
        changed = False
        for row, b in zip(eq.A, eq.b):
            # range of sum(row * x) over the box, None meaning unbounded
            min_terms, max_terms = [], []
            for j, a in enumerate(row):
                if a > 0:
                    min_terms.append(a * lo[j])
                    max_terms.append(None if hi[j] is None else a * hi[j])
                elif a < 0:
                    min_terms.append(None if hi[j] is None else a * hi[j])
                    max_terms.append(a * lo[j])
            for j, a in enumerate(row):
                if a == 0:
                    continue
                # a * x_j = b - (sum of the other terms)
                k = [t for t in range(N) if row[t]].index(j)
                rest_min = _sum_or_none(min_terms[:k] + min_terms[k + 1:])
                rest_max = _sum_or_none(max_terms[:k] + max_terms[k + 1:])
                top = None if rest_min is None else b - rest_min
                bot = None if rest_max is None else b - rest_max
                if a > 0:
                    new_hi = None if top is None else math.floor(Fraction(top, a))
                    new_lo = None if bot is None else math.ceil(Fraction(bot, a))
                else:
                    new_hi = None if bot is None else math.floor(Fraction(bot, a))
                    new_lo = None if top is None else math.ceil(Fraction(top, a))
                if new_lo is not None and new_lo > lo[j]:
                    lo[j] = new_lo
                    changed = True
                if new_hi is not None and (hi[j] is None or new_hi < hi[j]):
                    hi[j] = new_hi
                    changed = True
                if hi[j] is not None and hi[j] < lo[j]:
                    return None
        if not changed:
            break
    new_lower = {j: v for j, v in enumerate(lo) if v}
    new_upper = {j: v for j, v in enumerate(hi) if v is not None}
    return new_lower, new_upper


def _sum_or_none(terms: list):
    if any(t is None for t in terms):
        return None
    return sum(terms)


def _fixed_lattice_ok(eq: EqSystem, lower: dict, upper: dict) -> bool:
    """Lattice test on the system left after substituting fixed variables.

    Without it, a branch whose remaining rows have no integer solution at
    all can keep raising lower bounds until the search bound is reached.
    """
    fixed = {j: u for j, u in upper.items() if lower.get(j, 0) == u}
    if not fixed:
        return True
    free = [j for j in range(eq.num_vars) if j not in fixed]
    A = [[r[j] for j in free] for r in eq.A]
    b = [bv - sum(r[j] * v for j, v in fixed.items()) for r, bv in zip(eq.A, eq.b)]
    if not all(_row_gcd_ok(r, bv) for r, bv in zip(A, b)):
        return False
    return lattice_feasible(A, b, len(free))


def _branch_and_bound(eq: EqSystem, max_nodes: int | None = None) -> IntResult:
    N = eq.num_vars
    B = search_bound(eq)
    objective = [1] * eq.orig_vars + [0] * (N - eq.orig_vars)
    best: list | None = None
    best_val: int | None = None
    nodes = 0
    stack = [({}, {})]  # lower, upper bounds
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise ResourceLimit("branch-and-bound node limit exceeded")
        tight = propagate(eq, lower, upper)
        if tight is None:
            continue
        lower, upper = tight
        if not _fixed_lattice_ok(eq, lower, upper):
            continue
        rows = list(eq.A)
        senses = ["="] * len(rows)
        rhs = list(eq.b)
        for j, l in lower.items():
            rows.append([1 if t == j else 0 for t in range(N)])
            senses.append(">=")
            rhs.append(l)
        for j, u in upper.items():
            rows.append([1 if t == j else 0 for t in range(N)])
            senses.append("<=")
            rhs.append(u)
        res = solve_lp(rows, senses, rhs, N, objective)
        if res.status != OPTIMAL:
            continue
        if best_val is not None and math.ceil(res.value) >= best_val:
            continue
        frac = [(abs(v - round(v)), j) for j, v in enumerate(res.x) if v.denominator != 1]
        if not frac:
            best = [int(v) for v in res.x]
            best_val = sum(best[: eq.orig_vars])
            if best_val == 0:
                break
            continue
        # most fractional variable, lowest index on ties
        _, j = max(frac, key=lambda t: (t[0], -t[1]))
        v = res.x[j]
        lo = math.floor(v)
        hi = lo + 1
        down = (lower, {**upper, j: lo})
        if hi <= B:
            stack.append(({**lower, j: hi}, upper))
        stack.append(down)
    if best is None:
        return IntResult(False, None, nodes)
    return IntResult(True, best, nodes)


def _row_gcd_ok(row: Sequence[int], rhs: int) -> bool:
    g = math.gcd(*row) if row else 0
    return rhs == 0 if g == 0 else rhs % g == 0


def _solve_conjunctive(sys: IntConstraintSystem, max_nodes=None) -> IntResult:
    nodes = 0
    for eq in normalize(sys):
        if not all(_row_gcd_ok(r, bv) for r, bv in zip(eq.A, eq.b)):
            continue
        if not lattice_feasible(eq.A, eq.b, eq.num_vars):
            continue
        res = _branch_and_bound(eq, max_nodes)
        nodes += res.nodes
        if res.sat:
            x = res.x[: sys.num_vars]
            if not holds(sys, x):
                raise AssertionError("integer solution fails the original rows")
            return IntResult(True, x, nodes)
    return IntResult(False, None, nodes)


def minimize_support(sys: IntConstraintSystem, x: list, max_nodes=None) -> list:
    """Greedily zero out variables while the system stays feasible.

    Runs only while the support is larger than the number of rows, matching
    the small-support guarantee; every accepted step is re-verified.
    """
    x = list(x)
    limit = max(len(sys.rows), 1)
    for j in range(sys.num_vars):
        if sum(1 for v in x if v) <= limit:
            break
        if x[j] == 0:
            continue
        zero_rows = [IntRow(tuple(1 if t == j else 0 for t in range(sys.num_vars)), "=", 0)]
        trial = IntConstraintSystem(sys.num_vars, list(sys.rows) + zero_rows)
        res = _solve_conjunctive(trial, max_nodes)
        if res.sat and holds(sys, res.x):
            x = res.x
    return x


def feasible(sys: IntConstraintSystem, shrink_support: bool = True, max_nodes=None) -> IntResult:
    """Decide whether the system has a solution in the naturals."""
    res = _solve_conjunctive(sys, max_nodes)
    if res.sat and shrink_support:
        res.x = minimize_support(sys, res.x, max_nodes)
    return res


def brute_force(sys: IntConstraintSystem, limit: int = 8):
    """Exhaustive search over assignments with components at most ``limit``."""
    import itertools

    for x in itertools.product(range(limit + 1), repeat=sys.num_vars):
        if holds(sys, x):
            return list(x)
    return None
