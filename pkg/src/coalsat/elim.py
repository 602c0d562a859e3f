"""Satisfiability under a global assumption by type elimination.

Start from all types over the closure and repeatedly discard types whose
one-step pair against the surviving set is unsatisfiable.  The greatest
fixpoint consists of exactly the satisfiable types; a model is read off the
solver witnesses of the survivors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formula as F
from .closure import ClosureTable, closure
from .errors import BackendIncomplete
from .formula import Formula
from .onestep import SAT, UNKNOWN, UNSAT, Logic, pair_for_type, type_constraint, type_variables
from .semantics import Multigraph, SubdistModel, model_check, satisfies_globally


def _children_first(table: ClosureTable) -> list:
    """Closure indices ordered so that subformulas precede their parents."""
    order, seen = [], set()

    def visit(i):
        if i in seen:
            return
        seen.add(i)
        for c in table.formulas[i].children:
            visit(table.index[c])
        order.append(i)

    for i in range(len(table)):
        visit(i)
    return order


def all_types(table: ClosureTable) -> list:
    """Every type over the closure, by backtracking over the modal atoms.

    A type contains the assumption, excludes falsum and is propositionally
    coherent; it is determined by the truth values of the modal atoms, so we
    branch on those and prune as soon as the assumption evaluates to false.
    """
    order = _children_first(table)
    decisions = list(table.modal)
    psi = table.psi_index
    result = []
    values: dict = {}

    def evaluate():
        out = [None] * len(table)
        for i in order:
            f = table.formulas[i]
            k = f.kind
            if k == F.BOT:
                out[i] = False
            elif k in F.MODAL_KINDS:
                out[i] = values.get(i)
            elif k == F.NEG:
                c = out[table.index[f.children[0]]]
                out[i] = None if c is None else not c
            elif k == F.AND:
                a = out[table.index[f.children[0]]]
                b = out[table.index[f.children[1]]]
                if a is False or b is False:
                    out[i] = False
                elif a is None or b is None:
                    out[i] = None
                else:
                    out[i] = True
            else:
                raise ValueError(f"{F.render(f)} must be reduced before type enumeration")
        return out

    def go(pos: int):
        vals = evaluate()
        if vals[psi] is False:
            return
        if pos == len(decisions):
            mask = 0
            for i, v in enumerate(vals):
                if v:
                    mask |= 1 << i
            result.append(mask)
            return
        d = decisions[pos]
        for v in (True, False):
            values[d] = v
            go(pos + 1)
        del values[d]

    go(0)
    return result


def is_type(table: ClosureTable, gamma: int) -> bool:
    """Check the defining conditions of a type directly."""
    if not gamma >> table.psi_index & 1:
        return False
    if table.bot_index is not None and gamma >> table.bot_index & 1:
        return False
    for i in table.negs:
        inner = table.index[table.formulas[i].children[0]]
        if bool(gamma >> i & 1) == bool(gamma >> inner & 1):
            return False
    for i in table.conj:
        a, b = (table.index[c] for c in table.formulas[i].children)
        if bool(gamma >> i & 1) != bool(gamma >> a & 1 and gamma >> b & 1):
            return False
    return True


@dataclass
class ElimStats:
    types: int = 0
    iterations: int = 0
    solver_calls: int = 0
    cache_hits: int = 0


class Eliminator:
    """Type elimination over a fixed closure with one-step result caching."""

    def __init__(self, table: ClosureTable, logic: Logic):
        self.table = table
        self.logic = logic
        self.variables, self.clause, self.atoms = type_variables(table)
        self.modal_mask = 0
        for i in table.modal:
            self.modal_mask |= 1 << i
        self.cache: dict = {}
        self.stats = ElimStats()
        self.witness: dict = {}   # type -> (witness, origins)

    def shared(self, S) -> tuple:
        constraint, origins = type_constraint(self.table, self.variables, S)
        return self.variables, self.clause, self.atoms, constraint, origins

    def solve(self, gamma: int, shared: tuple):
        key = (gamma & self.modal_mask, frozenset(shared[3]))
        hit = self.cache.get(key)
        if hit is not None:
            self.stats.cache_hits += 1
            return hit
        pair = pair_for_type(gamma, (), self.table, shared)
        self.stats.solver_calls += 1
        res = self.logic.solve(pair)
        if res.verdict == SAT and not self.logic.check(pair, res):
            raise AssertionError("one-step solver returned an invalid witness")
        self.cache[key] = res
        return res

    def step(self, S: list) -> list:
        shared = self.shared(S)
        out = []
        for gamma in S:
            res = self.solve(gamma, shared)
            if res.verdict == UNKNOWN:
                raise BackendIncomplete(gamma)
            if res.verdict == SAT:
                out.append(gamma)
                self.witness[gamma] = (res.witness, shared[4])
        return out

    def fixpoint(self, S: list) -> list:
        while True:
            self.stats.iterations += 1
            nxt = self.step(S)
            if len(nxt) == len(S):
                return S
            S = nxt


def elim_step(S: list, table: ClosureTable, logic: Logic) -> list:
    return Eliminator(table, logic).step(list(S))


def extract_model(S: list, witnesses: dict, table: ClosureTable, logic: Logic,
                  nominals: dict | None = None):
    """Build a model whose states are the types in ``S``.

    Each witness valuation is sent to the first type of ``S`` producing it.
    """
    pos = {g: i for i, g in enumerate(S)}
    succ = []
    for gamma in S:
        if gamma not in witnesses:
            raise ValueError(f"no witness stored for {table.render_sequent(gamma)}")
        witness, origins = witnesses[gamma]
        row: dict = {}
        for val, w in witness.items():
            target = pos[origins[val][0]]
            row[target] = row.get(target, 0) + w
        succ.append(row)
    atoms = [
        {table.formulas[i].data for i in table.modal
         if table.formulas[i].kind == F.ATOM and gamma >> i & 1}
        for gamma in S
    ]
    cls = SubdistModel if logic.model_kind == "subdist" else Multigraph
    return cls(len(S), succ, atoms, dict(nominals or {}))


def truth_lemma_holds(model, S: list, table: ClosureTable) -> bool:
    for i, f in enumerate(table.formulas):
        expected = frozenset(s for s, g in enumerate(S) if g >> i & 1)
        if model_check(model, f) != expected:
            return False
    return True


@dataclass
class Verdict:
    verdict: str
    model: object | None = None
    stats: dict = field(default_factory=dict)
    culprit: object | None = None

    @property
    def sat(self) -> bool:
        return self.verdict == SAT


def decide_elim(psi: Formula, phi0: Formula, logic: Logic, check: bool = True) -> Verdict:
    table = closure(psi, phi0)
    types = all_types(table)
    elim = Eliminator(table, logic)
    elim.stats.types = len(types)
    try:
        S = elim.fixpoint(types)
    except BackendIncomplete as exc:
        return Verdict(UNKNOWN, stats=vars(elim.stats), culprit=exc.sequent)
    stats = dict(vars(elim.stats), survivors=len(S))
    winners = [g for g in S if g >> table.phi0_index & 1]
    if not winners:
        return Verdict(UNSAT, stats=stats)
    model = extract_model(S, elim.witness, table, logic)
    if check:
        if not satisfies_globally(model, psi, phi0):
            raise AssertionError("extracted model fails the model check")
        if not truth_lemma_holds(model, S, table):
            raise AssertionError("extracted model violates the truth lemma")
    return Verdict(SAT, model, stats)
