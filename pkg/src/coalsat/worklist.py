"""Global caching as a hyperedge worklist in the style of Liu and Smolka.

Each sequent gets a label: 1 (assumed satisfiable), 0 (refuted) or
undefined.  Hyperedges are either one per propositional rule application
(targets: the rule's conclusions) or one per state (targets: its children,
enumerated lazily).  Dependency sets record which edges must be revisited
when a sequent is refuted.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable

from .caching import DEFAULT_CHILD_CAP, Graph, SequentSpace, extract_from_e
from .closure import closure
from .elim import Verdict
from .errors import BackendIncomplete
from .formula import Formula
from .onestep import SAT, UNKNOWN, UNSAT, Logic


@dataclass(frozen=True)
class HyperEdge:
    source: int
    modal: bool
    rule: int = -1   # index into prop_rules(source) for propositional edges


@dataclass
class WorklistStats:
    generated: int = 0
    processed: int = 0
    expansions: int = 0
    solver_calls: int = 0


class Worklist:
    def __init__(self, psi: Formula, phi0: Formula, logic: Logic,
                 child_cap: int = DEFAULT_CHILD_CAP,
                 checkpoint: Callable | None = None):
        self.psi = psi
        self.phi0 = phi0
        self.table = closure(psi, phi0)
        self.space = SequentSpace(self.table, logic, child_cap)
        self.root = (1 << self.table.phi0_index) | (1 << self.table.psi_index)
        self.alpha: dict = {}
        self.D: dict = {}
        self.W: OrderedDict = OrderedDict()
        self.in_w_by_source: dict = {}
        self.targets: dict = {}      # state -> materialized children (ordered)
        self.iters: dict = {}        # state -> lazy child iterator (None when exhausted)
        self.counts: dict = {}       # edge -> times processed
        self.stats = WorklistStats()
        self.checkpoint = checkpoint

    # worklist helpers -------------------------------------------------------
    def edges(self, seq: int) -> list:
        if self.space.is_state(seq):
            return [HyperEdge(seq, True)]
        return [HyperEdge(seq, False, r) for r in range(len(self.space.prop_rules(seq)))]

    def push(self, e: HyperEdge):
        if e not in self.W:
            self.W[e] = None
            self.in_w_by_source.setdefault(e.source, set()).add(e)

    def pop(self) -> HyperEdge:
        e, _ = self.W.popitem(last=False)
        self.in_w_by_source[e.source].discard(e)
        return e

    def drop_source(self, seq: int):
        for e in list(self.in_w_by_source.get(seq, ())):
            del self.W[e]
        self.in_w_by_source[seq] = set()

    def define(self, seq: int):
        self.alpha[seq] = 1
        self.D[seq] = set()
        if self.space.is_state(seq):
            self.targets[seq] = []
            self.iters[seq] = self.space.state_children(seq)
        for e in self.edges(seq):
            self.push(e)

    def refute(self, seq: int):
        self.alpha[seq] = 0
        for e in self.D[seq]:
            self.push(e)
        self.D[seq] = set()

    def concrete_targets(self, e: HyperEdge) -> list:
        if e.modal:
            return self.targets[e.source]
        return self.space.prop_rules(e.source)[e.rule][1]

    def first_undefined(self, e: HyperEdge):
        """Find an undefined target, materializing state children on the way."""
        if not e.modal:
            return next((t for t in self.concrete_targets(e) if t not in self.alpha), None)
        it = self.iters[e.source]
        if it is None:
            return None
        mat = self.targets[e.source]
        for child in it:
            mat.append(child)
            if child not in self.alpha:
                return child
        self.iters[e.source] = None
        return None

    # main loop --------------------------------------------------------------
    def run(self) -> Verdict:
        try:
            verdict = self._loop()
        except BackendIncomplete as exc:
            v = Verdict(UNKNOWN, stats=self._stats())
            v.culprit = exc.sequent
            return v
        if verdict == UNSAT:
            return Verdict(UNSAT, stats=self._stats())
        return Verdict(SAT, self.extract(), self._stats())

    def _stats(self) -> dict:
        self.stats.generated = len(self.alpha)
        self.stats.solver_calls = self.space.solver_calls
        return dict(vars(self.stats))

    def _loop(self) -> str:
        self.define(self.root)
        while self.W:
            e = self.pop()
            self.counts[e] = self.counts.get(e, 0) + 1
            self.stats.processed += 1
            new = self.first_undefined(e)
            if new is not None:
                # expansion with the singleton choice U = {new}
                self.stats.expansions += 1
                self.define(new)
            gamma = e.source
            if not e.modal:
                targets = self.concrete_targets(e)
                if all(self.alpha.get(t) == 0 for t in targets):
                    self.refute(gamma)
                else:
                    one = next((t for t in targets if self.alpha.get(t) == 1), None)
                    if one is not None:
                        self.D[one].add(e)
                        self.drop_source(gamma)
            else:
                mat = self.targets[gamma]
                s1 = [t for t in mat if self.alpha[t] == 1]
                complete = self.iters[gamma] is None
                res, _ = self.space.check(gamma, s1)
                if complete and res.verdict == UNSAT:
                    self.refute(gamma)
                elif res.verdict == SAT:
                    for t in s1:
                        self.D[t].add(e)
                elif not complete:
                    self.push(e)
            if self.checkpoint is not None:
                self.checkpoint(self)
            if self.alpha[self.root] == 0:
                return UNSAT
        return SAT if self.alpha[self.root] == 1 else UNSAT

    # analysis ---------------------------------------------------------------
    def domain_graph(self, full_children: bool = False) -> Graph:
        """The generated sequents as a caching graph (for fixpoint checks)."""
        g = Graph(self.space)
        for seq in self.alpha:
            g.add(seq)
        for seq in self.alpha:
            if self.space.is_state(seq):
                if full_children:
                    if all(c in g for c in self.space.state_children(seq)):
                        g.complete.add(seq)
            else:
                g.complete.add(seq)
        return g

    def extract(self):
        g = self.domain_graph()
        E = g.nu_e()
        ones = {s for s, v in self.alpha.items() if v == 1}
        if not ones <= E:
            raise AssertionError("sequents labelled 1 outside the greatest fixpoint")
        return extract_from_e(g, E, self.root, self.psi, self.phi0)

    def edge_sizes(self) -> dict:
        return {e: len(self.concrete_targets(e)) for e in self.counts}


def edge_bound_audit(wl: Worklist) -> bool:
    """Processing counts: modal edges at most 2|targets|, rule edges |targets|+1."""
    for e, n in wl.counts.items():
        size = len(wl.concrete_targets(e))
        bound = 2 * size if e.modal else size + 1
        if n > bound:
            return False
    return True


def decide_worklist(psi: Formula, phi0: Formula, logic: Logic, child_cap: int = DEFAULT_CHILD_CAP,
                    checkpoint: Callable | None = None) -> Verdict:
    wl = Worklist(psi, phi0, logic, child_cap, checkpoint)
    v = wl.run()
    v.stats["edge_audit"] = edge_bound_audit(wl)
    return v
