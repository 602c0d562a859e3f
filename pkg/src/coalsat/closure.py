"""Closure of a formula set under subformulas and normalized negation.

Sequents and types are represented as Python ints used as bitsets over the
closure's indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import formula as F
from .formula import Formula, nneg


@dataclass
class ClosureTable:
    formulas: list
    index: dict
    nneg_link: list
    psi_index: int
    phi0_index: int
    modal: list = field(default_factory=list)      # indices of modal atoms
    conj: list = field(default_factory=list)       # indices of conjunctions
    negs: list = field(default_factory=list)       # indices of negations
    bot_index: int | None = None

    def __len__(self) -> int:
        return len(self.formulas)

    def idx(self, f: Formula) -> int:
        return self.index[f]

    def mask(self, fs: Iterable[Formula]) -> int:
        m = 0
        for f in fs:
            m |= 1 << self.index[f]
        return m

    def members(self, seq: int) -> list:
        out = []
        i = 0
        while seq:
            if seq & 1:
                out.append(i)
            seq >>= 1
            i += 1
        return out

    def sequent_formulas(self, seq: int) -> list:
        return [self.formulas[i] for i in self.members(seq)]

    def is_modal_literal(self, i: int) -> bool:
        f = self.formulas[i]
        if f.kind in F.MODAL_KINDS:
            return True
        return f.kind == F.NEG and f.children[0].kind in F.MODAL_KINDS

    def is_state(self, seq: int) -> bool:
        return all(self.is_modal_literal(i) for i in self.members(seq))

    def render_sequent(self, seq: int) -> str:
        return "{" + ", ".join(F.render(f) for f in self.sequent_formulas(seq)) + "}"


def closure(psi: Formula, phi0: Formula, extra: Iterable[Formula] = ()) -> ClosureTable:
    """Least set containing ``psi``, ``phi0`` closed under subformulas and nneg.

    Indices follow depth-first preorder over the roots, then nneg partners in
    order of their originals.
    """
    order: dict = {}
    for root in (psi, phi0, *extra):
        for g in F.subformulas(root):
            order.setdefault(g, None)
    base = list(order)
    for g in base:
        order.setdefault(nneg(g), None)
    formulas = list(order)
    index = {f: i for i, f in enumerate(formulas)}
    table = ClosureTable(
        formulas=formulas,
        index=index,
        nneg_link=[index[nneg(f)] for f in formulas],
        psi_index=index[psi],
        phi0_index=index[phi0],
    )
    for i, f in enumerate(formulas):
        if f.kind in F.MODAL_KINDS:
            table.modal.append(i)
        elif f.kind == F.AND:
            table.conj.append(i)
        elif f.kind == F.NEG:
            table.negs.append(i)
        elif f.kind == F.BOT:
            table.bot_index = i
    return table
