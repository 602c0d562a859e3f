"""Concrete models and an exact model checker.

Multigraphs carry non-negative integer edge multiplicities and interpret
``<>`` and Presburger constraints; subdistribution models carry rational
weights with per-state total at most one and interpret probabilistic
constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import formula as F
from .formula import Formula


@dataclass
class Multigraph:
    n: int
    succ: list = field(default_factory=list)       # per state: {target: int}
    atoms: list = field(default_factory=list)      # per state: set of names
    nominals: dict = field(default_factory=dict)   # name -> state

    kind = "multigraph"

    def __post_init__(self):
        if not self.succ:
            self.succ = [dict() for _ in range(self.n)]
        if not self.atoms:
            self.atoms = [set() for _ in range(self.n)]
        self.validate()

    def validate(self):
        if len(self.succ) != self.n or len(self.atoms) != self.n:
            raise ValueError("per-state tables must have one entry per state")
        for row in self.succ:
            for t, m in row.items():
                if not 0 <= t < self.n:
                    raise ValueError(f"edge to unknown state {t}")
                if not isinstance(m, int) or m < 0:
                    raise ValueError("multiplicities must be non-negative integers")
        for name, s in self.nominals.items():
            if not 0 <= s < self.n:
                raise ValueError(f"nominal {name} names unknown state {s}")


@dataclass
class SubdistModel:
    n: int
    succ: list = field(default_factory=list)       # per state: {target: Fraction}
    atoms: list = field(default_factory=list)
    nominals: dict = field(default_factory=dict)

    kind = "subdist"

    def __post_init__(self):
        if not self.succ:
            self.succ = [dict() for _ in range(self.n)]
        if not self.atoms:
            self.atoms = [set() for _ in range(self.n)]
        self.succ = [{t: Fraction(w) for t, w in row.items()} for row in self.succ]
        self.validate()

    def validate(self):
        if len(self.succ) != self.n or len(self.atoms) != self.n:
            raise ValueError("per-state tables must have one entry per state")
        for row in self.succ:
            for t, w in row.items():
                if not 0 <= t < self.n:
                    raise ValueError(f"edge to unknown state {t}")
                if w < 0:
                    raise ValueError("weights must be non-negative")
            if sum(row.values(), Fraction(0)) > 1:
                raise ValueError("outgoing weight exceeds one")
        for name, s in self.nominals.items():
            if not 0 <= s < self.n:
                raise ValueError(f"nominal {name} names unknown state {s}")


class KindMismatch(ValueError):
    pass


def lift(f: Formula, measures: Sequence) -> bool:
    """Evaluate the top modality of ``f`` given the measure of each argument.

    ``measures[i]`` is the total multiplicity or weight of successors
    satisfying ``f.children[i]``.
    """
    if f.kind == F.DIA:
        return measures[0] > 0
    if f.kind == F.PRES:
        coeffs, rel, bound, modulus = f.data
        total = sum(c * m for c, m in zip(coeffs, measures))
        if rel == "<":
            return total < bound
        if rel == ">":
            return total > bound
        if rel == "=":
            return total == bound
        return (total - bound) % modulus == 0
    if f.kind == F.PROB:
        return f.data.evaluate(list(measures)) >= 0
    raise ValueError(f"not a modality with arguments: {f.kind}")


def _check_kind(model, f: Formula):
    if f.kind in (F.DIA, F.PRES) and model.kind != "multigraph":
        raise KindMismatch(f"{F.render(f)} needs a multigraph model")
    if f.kind == F.PROB and model.kind != "subdist":
        raise KindMismatch(f"{F.render(f)} needs a subdistribution model")


def model_check(model, f: Formula) -> frozenset:
    """Return the set of states satisfying ``f``."""
    cache: dict = {}
    everything = frozenset(range(model.n))

    def ext(g: Formula) -> frozenset:
        hit = cache.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == F.BOT:
            out = frozenset()
        elif k == F.ATOM:
            out = frozenset(s for s in range(model.n) if g.data in model.atoms[s])
        elif k == F.NOM:
            if g.data not in model.nominals:
                raise KindMismatch(f"nominal '{g.data} has no denotation")
            out = frozenset({model.nominals[g.data]})
        elif k == F.NEG:
            out = everything - ext(g.children[0])
        elif k == F.AND:
            out = ext(g.children[0]) & ext(g.children[1])
        elif k == F.SAT:
            if g.data not in model.nominals:
                raise KindMismatch(f"nominal '{g.data} has no denotation")
            out = everything if model.nominals[g.data] in ext(g.children[0]) else frozenset()
        elif k == F.UNIV:
            out = everything if ext(g.children[0]) == everything else frozenset()
        else:
            _check_kind(model, g)
            arg_exts = [ext(c) for c in g.children]
            zero = 0 if model.kind == "multigraph" else Fraction(0)
            sel = []
            for s in range(model.n):
                row = model.succ[s]
                measures = [sum((w for t, w in row.items() if t in e), zero) for e in arg_exts]
                if lift(g, measures):
                    sel.append(s)
            out = frozenset(sel)
        cache[g] = out
        return out

    return ext(f)


def satisfies_globally(model, psi: Formula, phi0: Formula) -> bool:
    """``psi`` holds everywhere and ``phi0`` somewhere."""
    return model_check(model, psi) == frozenset(range(model.n)) and bool(model_check(model, phi0))
