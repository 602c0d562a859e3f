"""Nominals, satisfaction operators and the universal modality.

``@i f`` is rewritten to ``A (i -> f)``.  Universal-modality subformulas are
eliminated by guessing which of them hold: in the purely modal case each
guess becomes a family of satisfiability checks under a global assumption;
in the hybrid case the refuted ones are pinned to fresh nominals.  Hybrid
global satisfiability is decided by enumerating consistent assignments of
types to nominals and running type elimination for each.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from . import formula as F
from .closure import ClosureTable, closure
from .elim import Eliminator, Verdict, all_types, decide_elim, extract_model, truth_lemma_holds
from .errors import BackendIncomplete, ResourceLimit
from .formula import Formula
from .onestep import SAT, UNKNOWN, UNSAT, Logic
from .semantics import model_check, satisfies_globally

FRESH_PREFIX = "#"


def fresh_nominal(k: int) -> Formula:
    return F.Nominal(f"{FRESH_PREFIX}{k}")


def eliminate_at(f: Formula) -> Formula:
    """Rewrite every ``@i g`` as ``A (i -> g)``."""
    cache: dict = {}

    def go(g: Formula) -> Formula:
        if g in cache:
            return cache[g]
        if g.kind == F.SAT:
            out = F.Univ(F.Implies(F.Nominal(g.data), go(g.children[0])))
        elif not g.children:
            out = g
        else:
            out = F._rebuild(g, tuple(go(c) for c in g.children))
        cache[g] = out
        return out

    return go(f)


def univ_subformulas(f: Formula) -> list:
    """Distinct universal subformulas, outermost first."""
    return [g for g in F.subformulas(f) if g.kind == F.UNIV]


def strip_univ(f: Formula, univs: list, U: frozenset) -> Formula:
    """Replace outermost ``A g`` by truth (index in ``U``) or falsum."""
    pos = {g: k for k, g in enumerate(univs)}
    mapping = {g: (F.Top() if pos[g] in U else F.Bot()) for g in univs}
    return F.substitute(f, mapping)


@dataclass
class Reduced:
    U: frozenset
    assumption: Formula
    goal: Formula
    side_goals: list = field(default_factory=list)


def reduce_universal(phi: Formula, hybrid: bool = False, first_fresh: int = 1):
    """Yield one reduced instance per subset of universal subformulas.

    Subsets are enumerated in lexicographic order of their sorted index
    tuples, smallest subsets first.
    """
    univs = univ_subformulas(phi)
    n = len(univs)
    subsets = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    for U in subsets:
        bodies = [strip_univ(u.children[0], univs, U) for u in univs]
        goal = strip_univ(phi, univs, U)
        if not hybrid:
            assumption = F.conj(bodies[k] for k in sorted(U))
            sides = [F.Neg(bodies[k]) for k in range(n) if k not in U]
            yield Reduced(U, assumption, goal, sides)
        else:
            parts = [bodies[k] for k in sorted(U)]
            parts += [
                F.Implies(fresh_nominal(first_fresh + k), F.Neg(bodies[k]))
                for k in range(n) if k not in U
            ]
            yield Reduced(U, F.conj(parts), goal, [])


def _disjoint_union(models: list):
    kind = type(models[0])
    succ, atoms = [], []
    offset = 0
    for m in models:
        for row in m.succ:
            succ.append({t + offset: w for t, w in row.items()})
        atoms.extend(m.atoms)
        offset += m.n
    return kind(offset, succ, atoms)


def decide_universal(psi: Formula, phi0: Formula, logic: Logic,
                     decide: Callable = decide_elim) -> Verdict:
    """Satisfiability with universal modalities and no nominals.

    ``decide(psi, phi0, logic)`` is any of the three global-assumption
    procedures.  The model returned for a SAT answer is the disjoint union
    of the models of the goal and of every side goal.
    """
    phi = F.And(phi0, F.Univ(psi))
    univs = univ_subformulas(phi)
    unknown = None
    tried = 0
    for red in reduce_universal(phi):
        tried += 1
        models = []
        ok = True
        for goal in [red.goal] + red.side_goals:
            v = decide(red.assumption, goal, logic)
            if v.verdict == UNKNOWN:
                unknown = v
                ok = False
                break
            if v.verdict != SAT:
                ok = False
                break
            models.append(v.model)
        if ok:
            model = _disjoint_union(models)
            if not model_check(model, phi):
                raise AssertionError("combined model fails the universal formula")
            return Verdict(SAT, model, {"subsets_tried": tried, "univ": len(univs)})
    if unknown is not None:
        return Verdict(UNKNOWN, stats={"subsets_tried": tried}, culprit=unknown.culprit)
    return Verdict(UNSAT, stats={"subsets_tried": tried, "univ": len(univs)})


# type assignments ---------------------------------------------------------------

def consistent(beta: dict, table: ClosureTable) -> bool:
    """``i`` lies in ``beta[j]`` exactly when ``beta[i] == beta[j]``."""
    for i, ti in beta.items():
        bit = table.index[F.Nominal(i)]
        for j, tj in beta.items():
            if bool(tj >> bit & 1) != (ti == tj):
                return False
    return True


def consistent_assignments(noms: list, candidates: dict, table: ClosureTable, cap: int | None = None):
    """Backtracking enumeration with the consistency test inlined."""
    bits = {i: table.index[F.Nominal(i)] for i in noms}
    beta: dict = {}
    count = [0]

    def ok_with(i: str, t: int) -> bool:
        if not t >> bits[i] & 1:
            return False
        for j, tj in beta.items():
            same = t == tj
            if bool(tj >> bits[i] & 1) != same or bool(t >> bits[j] & 1) != same:
                return False
        return True

    def go(pos: int):
        if pos == len(noms):
            count[0] += 1
            if cap is not None and count[0] > cap:
                raise ResourceLimit(f"more than {cap} type assignments")
            yield dict(beta)
            return
        i = noms[pos]
        for t in candidates[i]:
            if ok_with(i, t):
                beta[i] = t
                yield from go(pos + 1)
                del beta[i]

    yield from go(0)


def kripke_constraints(noms: list) -> list:
    return [F.Presburger([(1, F.Nominal(i))], "<", 2) for i in noms]


def global_sat(psi: Formula, logic: Logic, phi0: Formula | None = None,
               max_assignments: int | None = 100000, check: bool = True) -> Verdict:
    """Global satisfiability of a hybrid assumption (optionally with a goal).

    With ``phi0`` set and no nominals present this is plain type
    elimination with the goal test; otherwise every consistent assignment
    is tried in turn.
    """
    goal = phi0 if phi0 is not None else F.Top()
    table = closure(psi, goal)
    types = all_types(table)
    elim = Eliminator(table, logic)
    stats = {"types": len(types), "assignments": 0}
    try:
        alive = elim.fixpoint(types)
        noms = [f.data for f in table.formulas if f.kind == F.NOM]
        nom_mask = 0
        for i in noms:
            nom_mask |= 1 << table.index[F.Nominal(i)]
        if not noms:
            winners = [g for g in alive if g >> table.phi0_index & 1]
            if not winners:
                return Verdict(UNSAT, stats=stats)
            model = extract_model(alive, elim.witness, table, logic)
            return Verdict(SAT, model, stats)
        free = [g for g in alive if not g & nom_mask]
        # any denotation survives elimination over all types, so restrict to those
        candidates = {i: [g for g in alive if g >> table.index[F.Nominal(i)] & 1] for i in noms}
        for beta in consistent_assignments(noms, candidates, table, max_assignments):
            stats["assignments"] += 1
            images = list(dict.fromkeys(beta.values()))
            start = images + [g for g in free if g not in images]
            S = elim.fixpoint(start)
            survivors = set(S)
            if all(t in survivors for t in images):
                if phi0 is not None and not any(g >> table.phi0_index & 1 for g in S):
                    continue
                nominals = {i: S.index(t) for i, t in beta.items()}
                model = extract_model(S, elim.witness, table, logic, nominals)
                if check:
                    if not truth_lemma_holds(model, S, table):
                        raise AssertionError("hybrid model violates the truth lemma")
                stats["beta"] = {i: table.render_sequent(t) for i, t in beta.items()}
                return Verdict(SAT, model, stats)
    except BackendIncomplete as exc:
        return Verdict(UNKNOWN, stats=stats, culprit=exc.sequent)
    return Verdict(UNSAT, stats=stats)


def decide_hybrid(psi: Formula, phi0: Formula, logic: Logic, kripke: bool = False,
                  max_assignments: int | None = 100000, check: bool = True) -> Verdict:
    """Hybrid satisfiability of ``phi0`` under the global assumption ``psi``."""
    user_noms = list(dict.fromkeys(F.nominals_of(psi) + F.nominals_of(phi0)))
    for name in user_noms:
        if name.startswith(FRESH_PREFIX):
            raise ValueError(f"nominal name '{name} is reserved")
    if kripke:
        psi = F.conj([psi] + kripke_constraints(user_noms))
    psi1 = eliminate_at(psi)
    phi1 = eliminate_at(phi0)
    plain = not user_noms and not univ_subformulas(psi1) and not univ_subformulas(phi1)
    if plain:
        v = global_sat(psi1, logic, phi1, max_assignments, check)
        if v.sat and check and not satisfies_globally(v.model, psi, phi0):
            raise AssertionError("extracted model fails the model check")
        return v
    phi = F.And(phi1, F.Univ(psi1))
    n_univ = len(univ_subformulas(phi))
    target = fresh_nominal(0)
    unknown = None
    total_assignments = 0
    for red in reduce_universal(phi, hybrid=True, first_fresh=1):
        assumption = F.And(red.assumption, F.Implies(target, red.goal))
        v = global_sat(assumption, logic, None, max_assignments, check)
        total_assignments += v.stats.get("assignments", 0)
        if v.verdict == UNKNOWN:
            unknown = v
            continue
        if v.sat:
            model = v.model
            if check:
                # all universal guesses must be honoured by the model
                if not satisfies_globally(model, psi, phi0):
                    raise AssertionError("hybrid model fails the original problem")
            v.stats.update(univ=n_univ, assignments=total_assignments)
            return v
    if unknown is not None:
        return Verdict(UNKNOWN, stats={"assignments": total_assignments}, culprit=unknown.culprit)
    return Verdict(UNSAT, stats={"univ": n_univ, "assignments": total_assignments})
