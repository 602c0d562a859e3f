"""Satisfiability of coalgebraic modal logics under global assumptions.

Three deciders share one interface, ``decide_*(psi, phi0, logic)``: type
elimination, global caching and a hyperedge worklist.  ``psi`` must hold
at every state and ``phi0`` at some state.  Logics are obtained with
``get_logic("k" | "presburger" | "prob")``.
"""

from .caching import decide_caching
from .elim import Verdict, decide_elim
from .errors import BackendIncomplete, ParseError, ResourceLimit
from .formula import render
from .hybrid import decide_hybrid, decide_universal
from .onestep import SAT, UNKNOWN, UNSAT, get_logic
from .parser import parse
from .semantics import Multigraph, SubdistModel, model_check, satisfies_globally
from .worklist import decide_worklist

__all__ = [
    "BackendIncomplete", "Multigraph", "ParseError", "ResourceLimit", "SAT", "SubdistModel",
    "UNKNOWN", "UNSAT", "Verdict", "decide_caching", "decide_elim", "decide_hybrid",
    "decide_universal", "decide_worklist", "get_logic", "model_check", "parse", "render",
    "satisfies_globally",
]
