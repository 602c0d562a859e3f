"""One-step pairs and the solver interface shared by all instance logics.

A one-step pair consists of a clean conjunction of modal literals over fresh
variables and a propositional constraint given as an explicit list of
valuations.  A solver decides whether some weighted set of those valuations
satisfies every literal; the weighted valuations are the witness and double
as the successor structure during model extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import formula as F
from .closure import ClosureTable
from .semantics import lift

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class VarInfo:
    literal: int   # position of the owning literal in the clause
    slot: int      # argument position within that literal's modality
    arg: int       # closure index of the argument formula


@dataclass(frozen=True)
class ModalLiteral:
    positive: bool
    formula: F.Formula   # the modal atom, e.g. <>p or a Presburger constraint
    vars: tuple          # one variable per argument slot


@dataclass
class OneStepPair:
    variables: list
    clause: list
    atom_literals: list = field(default_factory=list)   # (positive, Formula)
    constraint: list = field(default_factory=list)      # tuples of bools
    origins: dict = field(default_factory=dict)         # valuation -> [sequent]

    def measures(self, witness: dict) -> list:
        """Per-variable total weight of the valuations making it true."""
        out = [0] * len(self.variables)
        for val, w in witness.items():
            for v, bit in enumerate(val):
                if bit:
                    out[v] = out[v] + w
        return out


@dataclass
class OneStepResult:
    verdict: str
    witness: dict | None = None   # valuation -> weight

    @property
    def sat(self) -> bool:
        return self.verdict == SAT


def _literal_slots(table: ClosureTable, lits: Iterable[tuple]) -> tuple:
    """Build variables, clause and atom literals from (positive, formula) pairs."""
    variables: list = []
    clause: list = []
    atoms: list = []
    for positive, f in lits:
        if not f.children:
            atoms.append((positive, f))
            continue
        pos = len(clause)
        vs = []
        for slot, arg in enumerate(f.children):
            vs.append(len(variables))
            variables.append(VarInfo(pos, slot, table.index[arg]))
        clause.append(ModalLiteral(positive, f, tuple(vs)))
    return variables, clause, atoms


def type_variables(table: ClosureTable) -> tuple:
    """Variables shared by every type pair: one per argument of each modal atom."""
    lits = [(True, table.formulas[i]) for i in table.modal]
    return _literal_slots(table, lits)


def type_constraint(table: ClosureTable, variables: list, S: Iterable[int]) -> tuple:
    """Deduplicated valuations of ``S`` over ``variables`` plus their origins."""
    args = [v.arg for v in variables]
    constraint: list = []
    origins: dict = {}
    for delta in S:
        val = tuple(bool(delta >> a & 1) for a in args)
        if val in origins:
            origins[val].append(delta)
        else:
            origins[val] = [delta]
            constraint.append(val)
    return constraint, origins


def pair_for_type(gamma: int, S: Iterable[int], table: ClosureTable, shared=None) -> OneStepPair:
    """The pair of a type against a set of candidate successor types.

    ``shared`` may carry a precomputed ``(variables, clause, atoms, constraint,
    origins)`` tuple for ``S`` to avoid recomputation across a sweep.
    """
    if shared is None:
        variables, clause, atoms = type_variables(table)
        constraint, origins = type_constraint(table, variables, S)
    else:
        variables, clause, atoms, constraint, origins = shared
    signed = [
        ModalLiteral(bool(gamma >> table.index[lit.formula] & 1), lit.formula, lit.vars)
        for lit in clause
    ]
    signed_atoms = [(bool(gamma >> table.index[f] & 1), f) for _, f in atoms]
    return OneStepPair(variables, signed, signed_atoms, constraint, origins)


def state_literals(gamma: int, table: ClosureTable) -> list:
    lits = []
    for i in table.members(gamma):
        f = table.formulas[i]
        if f.kind in F.MODAL_KINDS:
            lits.append((True, f))
        elif f.kind == F.NEG and f.children[0].kind in F.MODAL_KINDS:
            lits.append((False, f.children[0]))
        else:
            raise ValueError(f"{F.render(f)} is not a modal literal")
    return lits


def pair_for_state(gamma: int, children: Iterable[int], table: ClosureTable) -> OneStepPair:
    """The pair of a state against a subset of its children.

    Each signed literal gets its own variables, so the clause stays clean even
    when the state contains both a modal atom and its negation.  A child that
    contains both an argument and its negation contributes no valuation.
    """
    variables, clause, atoms = _literal_slots(table, state_literals(gamma, table))
    constraint: list = []
    origins: dict = {}
    for delta in children:
        bits = []
        for v in variables:
            has = bool(delta >> v.arg & 1)
            has_neg = bool(delta >> table.nneg_link[v.arg] & 1)
            if has and has_neg:
                bits = None
                break
            if not has and not has_neg:
                raise ValueError(
                    f"sequent {table.render_sequent(delta)} is not a child of "
                    f"{table.render_sequent(gamma)}"
                )
            bits.append(has)
        if bits is None:
            continue
        val = tuple(bits)
        if val in origins:
            origins[val].append(delta)
        else:
            origins[val] = [delta]
            constraint.append(val)
    return OneStepPair(variables, clause, atoms, constraint, origins)


def _prop_value(f: F.Formula, valuation: dict) -> bool:
    if f.kind == F.BOT:
        return False
    if f.kind == F.NEG:
        return not _prop_value(f.children[0], valuation)
    if f.kind == F.AND:
        return _prop_value(f.children[0], valuation) and _prop_value(f.children[1], valuation)
    if f.kind == F.ATOM:
        return bool(valuation[f.data])
    raise ValueError(f"{F.render(f)} is not propositional")


def make_pair(literals: Iterable[tuple], valuations: Iterable[dict]) -> OneStepPair:
    """A pair written directly: signed modal atoms over propositional arguments.

    ``literals`` are ``(positive, formula)``; a negated modal atom flips the
    sign.  The arguments of each modal atom are propositional formulas over
    atom names, and ``valuations`` assign those names.  Each distinct
    argument valuation becomes one constraint entry.
    """
    variables: list = []
    clause: list = []
    atoms: list = []
    arg_formulas: list = []
    for positive, f in literals:
        while f.kind == F.NEG:
            positive, f = not positive, f.children[0]
        if not f.children:
            atoms.append((positive, f))
            continue
        vs = []
        for slot, arg in enumerate(f.children):
            vs.append(len(variables))
            variables.append(VarInfo(len(clause), slot, -1))
            arg_formulas.append(arg)
        clause.append(ModalLiteral(positive, f, tuple(vs)))
    constraint: list = []
    origins: dict = {}
    for k, valuation in enumerate(valuations):
        val = tuple(_prop_value(a, valuation) for a in arg_formulas)
        if val not in origins:
            constraint.append(val)
        origins.setdefault(val, []).append(k)
    return OneStepPair(variables, clause, atoms, constraint, origins)


def atoms_consistent(pair: OneStepPair) -> bool:
    seen: dict = {}
    for positive, f in pair.atom_literals:
        if seen.setdefault(f, positive) != positive:
            return False
    return True


def literal_holds(lit: ModalLiteral, measures: list) -> bool:
    value = lift(lit.formula, [measures[v] for v in lit.vars])
    return value if lit.positive else not value


def check_witness(pair: OneStepPair, result: OneStepResult, logic: str | None = None) -> bool:
    """Independently re-check a SAT result against the pair's semantics."""
    if result.verdict != SAT or result.witness is None:
        return False
    if not atoms_consistent(pair):
        return False
    if logic is None:
        logic = "prob" if any(l.formula.kind == F.PROB for l in pair.clause) else "presburger"
    allowed = set(pair.constraint)
    total = Fraction(0)
    for val, w in result.witness.items():
        if val not in allowed or len(val) != len(pair.variables):
            return False
        if logic == "prob":
            if not isinstance(w, (int, Fraction)) or w < 0:
                return False
        elif not isinstance(w, int) or isinstance(w, bool) or w < 0:
            return False
        total += w
    if logic == "prob" and total > 1:
        return False
    measures = pair.measures(result.witness)
    return all(literal_holds(lit, measures) for lit in pair.clause)


class Logic:
    """Interface of an instance logic's one-step solver."""

    name = "abstract"
    model_kind = "multigraph"
    kinds: frozenset = frozenset()

    def solve(self, pair: OneStepPair) -> OneStepResult:
        raise NotImplementedError

    def check(self, pair: OneStepPair, result: OneStepResult) -> bool:
        return check_witness(pair, result, self.name)


def get_logic(name: str, **options) -> Logic:
    name = name.lower()
    if name == "k":
        from .logic_k import KLogic

        return KLogic()
    if name == "presburger":
        from .logic_presburger import PresburgerLogic

        return PresburgerLogic()
    if name == "prob":
        from .logic_prob import ProbLogic

        return ProbLogic(**options)
    raise ValueError(f"unknown logic {name!r}")
