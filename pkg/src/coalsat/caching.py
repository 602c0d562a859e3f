"""Global caching over tableau sequents.

Sequents are arbitrary subsets of the closure.  Non-state sequents are
decomposed by the propositional rules; states (sets of modal literals) have
as children the sequents that contain the assumption and decide every
argument of every modal literal.  The generated graph is evaluated by two
fixpoint computations: the greatest fixpoint of the satisfiability
functional and the least fixpoint of the unsatisfiability functional.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import formula as F
from .closure import ClosureTable, closure
from .elim import Verdict
from .errors import BackendIncomplete, ResourceLimit
from .formula import Formula
from .onestep import SAT, UNKNOWN, UNSAT, Logic, pair_for_state
from .semantics import Multigraph, SubdistModel, satisfies_globally

DEFAULT_CHILD_CAP = 2 ** 16
DEFAULT_BATCH = 64


class SequentSpace:
    """Rules, children and one-step checks over sequents of one closure."""

    def __init__(self, table: ClosureTable, logic: Logic, child_cap: int = DEFAULT_CHILD_CAP):
        self.table = table
        self.logic = logic
        self.child_cap = child_cap
        self.psi_bit = 1 << table.psi_index
        self._state: dict = {}
        self._rules: dict = {}
        self._classes: dict = {}
        self._memo: dict = {}
        self.solver_calls = 0

    # classification ---------------------------------------------------------
    def is_state(self, seq: int) -> bool:
        hit = self._state.get(seq)
        if hit is None:
            hit = self.table.is_state(seq)
            self._state[seq] = hit
        return hit

    def prop_rules(self, seq: int) -> list:
        """Applicable propositional rules as ``(principal, [conclusions])``.

        The principal formula is removed from each conclusion; negated
        components are formed by normalized negation so that conclusions
        stay inside the closure.  Besides the four usual rules, the negated
        falsum (truth) is simply dropped.
        """
        hit = self._rules.get(seq)
        if hit is not None:
            return hit
        t = self.table
        rules = []
        for i in t.members(seq):
            f = t.formulas[i]
            rest = seq & ~(1 << i)
            if f.kind == F.BOT:
                rules.append((i, []))
            elif f.kind == F.AND:
                a, b = (t.index[c] for c in f.children)
                rules.append((i, [rest | 1 << a | 1 << b]))
            elif f.kind == F.NEG:
                g = f.children[0]
                if g.kind == F.AND:
                    a, b = (t.nneg_link[t.index[c]] for c in g.children)
                    rules.append((i, [rest | 1 << a, rest | 1 << b]))
                elif g.kind == F.NEG:
                    rules.append((i, [rest | 1 << t.index[g.children[0]]]))
                elif g.kind == F.BOT:
                    rules.append((i, [rest]))
        self._rules[seq] = rules
        return rules

    def rule_children(self, seq: int) -> list:
        out: dict = {}
        for _, concl in self.prop_rules(seq):
            for c in concl:
                out.setdefault(c, None)
        return list(out)

    def arg_classes(self, seq: int) -> list:
        """Argument pairs (rho, ~rho) to decide in the children of a state."""
        hit = self._classes.get(seq)
        if hit is not None:
            return hit
        t = self.table
        seen = set()
        classes = []
        for i in t.members(seq):
            f = t.formulas[i]
            atom = f.children[0] if f.kind == F.NEG else f
            for arg in atom.children:
                a = t.index[arg]
                key = frozenset((a, t.nneg_link[a]))
                if key not in seen:
                    seen.add(key)
                    classes.append((a, t.nneg_link[a]))
        self._classes[seq] = classes
        return classes

    def state_children(self, seq: int) -> Iterable[int]:
        """Children of a state in deterministic order, generated lazily."""
        classes = self.arg_classes(seq)
        count = 0
        seen = set()
        for pick in itertools.product(*classes):
            child = self.psi_bit
            for a in pick:
                child |= 1 << a
            if child in seen:
                continue
            seen.add(child)
            count += 1
            if count > self.child_cap:
                raise ResourceLimit(
                    f"state {self.table.render_sequent(seq)} has more than "
                    f"{self.child_cap} children", seq,
                )
            yield child

    def is_child_of_state(self, seq: int, child: int) -> bool:
        if not child & self.psi_bit:
            return False
        covered = self.psi_bit
        for a, b in self.arg_classes(seq):
            bits = (child >> a & 1) + (child >> b & 1)
            in_psi = self.table.psi_index in (a, b)
            if bits == 0 or (bits == 2 and not in_psi):
                return False
            covered |= 1 << a | 1 << b
        return child & ~covered == 0

    # one-step checks --------------------------------------------------------
    def check(self, seq: int, kids: Iterable[int]):
        """Solve the pair of a state against the given children."""
        pair = pair_for_state(seq, kids, self.table)
        key = (seq, frozenset(pair.constraint))
        hit = self._memo.get(key)
        if hit is None:
            self.solver_calls += 1
            hit = self.logic.solve(pair)
            if hit.verdict == SAT and not self.logic.check(pair, hit):
                raise AssertionError("one-step solver returned an invalid witness")
            self._memo[key] = hit
        if hit.verdict == UNKNOWN:
            raise BackendIncomplete(seq)
        return hit, pair


class Graph:
    """The generated part of the sequent graph."""

    def __init__(self, space: SequentSpace):
        self.space = space
        self.nodes: dict = {}       # insertion-ordered set
        self.kids: dict = {}        # state -> generated children (ordered)
        self.complete: set = set()  # sequents with every child generated

    def add(self, seq: int) -> bool:
        if seq in self.nodes:
            return False
        self.nodes[seq] = None
        sp = self.space
        if sp.is_state(seq):
            self.kids[seq] = {d: None for d in self.nodes if sp.is_child_of_state(seq, d)}
        for st, ks in self.kids.items():
            if st != seq and sp.is_child_of_state(st, seq):
                ks[seq] = None
        return True

    def __contains__(self, seq: int) -> bool:
        return seq in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    # functionals ------------------------------------------------------------
    def eg(self, S: set) -> set:
        sp = self.space
        out = set()
        for g in self.nodes:
            if sp.is_state(g):
                kids = [d for d in self.kids[g] if d in S]
                if sp.check(g, kids)[0].verdict == SAT:
                    out.add(g)
            elif any(c in S for c in sp.rule_children(g)):
                out.add(g)
        return out

    def ag(self, S: set) -> set:
        sp = self.space
        out = set()
        for g in self.nodes:
            if sp.is_state(g):
                if g not in self.complete:
                    continue
                kids = [d for d in self.kids[g] if d not in S]
                if sp.check(g, kids)[0].verdict == UNSAT:
                    out.add(g)
            elif any(all(c in S for c in concl) for _, concl in sp.prop_rules(g)):
                out.add(g)
        return out

    def nu_e(self, seed: set = frozenset()) -> set:
        """Greatest fixpoint of ``S -> E_G(S | seed)``."""
        S = set(self.nodes)
        while True:
            nxt = self.eg(S | seed)
            if nxt == S:
                return S
            S = nxt

    def mu_a(self, seed: set = frozenset()) -> set:
        """Least fixpoint of ``S -> A_G(S | seed)``."""
        S: set = set()
        while True:
            nxt = self.ag(S | seed)
            if nxt == S:
                return S
            S = nxt


@dataclass
class Strategy:
    batch: int = DEFAULT_BATCH          # state children added per expansion
    propagate_every: int = 1            # 0: only in the final step
    child_cap: int = DEFAULT_CHILD_CAP


@dataclass
class CachingStats:
    generated: int = 0
    expansions: int = 0
    propagations: int = 0
    solver_calls: int = 0


def extract_from_e(graph: Graph, E: set, root: int, psi: Formula, phi0: Formula | None = None,
                   check: bool = True):
    """Model on the states reachable from ``root`` through ``E``.

    Non-state sequents are resolved to states by following rule conclusions
    that lie in ``E``; state witnesses are pushed forward along that map.
    """
    sp = graph.space
    table = sp.table

    def resolve(seq: int) -> int:
        while not sp.is_state(seq):
            seq = next(c for c in sp.rule_children(seq) if c in E)
        return seq

    start = resolve(root)
    index = {start: 0}
    order = [start]
    succ: list = []
    k = 0
    while k < len(order):
        st = order[k]
        kids = [d for d in graph.kids[st] if d in E]
        res, pair = sp.check(st, kids)
        if res.verdict != SAT:
            raise AssertionError("state in E without a one-step witness")
        row: dict = {}
        for val, w in res.witness.items():
            target = resolve(pair.origins[val][0])
            if target not in index:
                index[target] = len(order)
                order.append(target)
            t = index[target]
            row[t] = row.get(t, 0) + w
        succ.append(row)
        k += 1
    atoms = []
    for st in order:
        names = set()
        for i in table.members(st):
            f = table.formulas[i]
            if f.kind == F.ATOM:
                names.add(f.data)
        atoms.append(names)
    cls = SubdistModel if sp.logic.model_kind == "subdist" else Multigraph
    model = cls(len(order), succ, atoms)
    if check and phi0 is not None:
        if not satisfies_globally(model, psi, phi0):
            raise AssertionError("extracted model fails the model check")
    return model


def decide_caching(psi: Formula, phi0: Formula, logic: Logic, strategy: Strategy | None = None,
                   check: bool = True,
                   on_propagate: Callable | None = None) -> Verdict:
    """Global caching with FIFO expansion and optional propagation."""
    strategy = strategy or Strategy()
    table = closure(psi, phi0)
    space = SequentSpace(table, logic, strategy.child_cap)
    graph = Graph(space)
    root = (1 << table.phi0_index) | (1 << table.psi_index)
    graph.add(root)
    stats = CachingStats()
    E: set = set()
    A: set = set()
    queue = [root]
    pending: dict = {}   # state -> lazy child iterator
    head = 0

    def finish(verdict, model=None):
        stats.generated = len(graph)
        stats.solver_calls = space.solver_calls
        return Verdict(verdict, model, vars(stats))

    try:
        while True:
            # expansion: first queued sequent still missing children
            while head < len(queue) and queue[head] in graph.complete:
                head += 1
            if head == len(queue):
                break
            g = queue[head]
            stats.expansions += 1
            if space.is_state(g):
                it = pending.setdefault(g, space.state_children(g))
                added = 0
                for child in it:
                    if graph.add(child):
                        queue.append(child)
                    added += 1
                    if added >= strategy.batch:
                        break
                else:
                    graph.complete.add(g)
                    pending.pop(g, None)
            else:
                for child in space.rule_children(g):
                    if graph.add(child):
                        queue.append(child)
                graph.complete.add(g)
            if strategy.propagate_every and stats.expansions % strategy.propagate_every == 0:
                stats.propagations += 1
                E = graph.nu_e(E)
                A = graph.mu_a(A)
                if on_propagate is not None:
                    on_propagate(graph, E, A)
                if root in E:
                    return finish(SAT, extract_from_e(graph, E, root, psi, phi0, check))
                if root in A:
                    return finish(UNSAT)
        stats.propagations += 1
        E = graph.nu_e(E)
        if on_propagate is not None:
            on_propagate(graph, E, A)
        if root in E:
            return finish(SAT, extract_from_e(graph, E, root, psi, phi0, check))
        return finish(UNSAT)
    except BackendIncomplete as exc:
        v = finish(UNKNOWN)
        v.culprit = exc.sequent
        return v
