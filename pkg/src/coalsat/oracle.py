"""Brute-force model search within small bounds.

Searches every model with at most ``max_states`` states, edge
multiplicities up to ``max_weight`` (multigraphs) or weights with
denominator at most ``max_denominator`` (subdistributions), and every atom
and nominal valuation.  A hit is rebuilt as a proper model and confirmed by
the exact model checker.  Finding nothing proves nothing beyond the bounds.

Two enumeration methods cover the same model space:

* ``matrices`` walks all transition matrices for every valuation and
  evaluates the formulas on whole batches with numpy;
* ``labels`` guesses, per state, the truth of every opaque subformula
  (atoms, nominals, modalities, ``@`` and ``A``), keeps guesses that are
  globally coherent, and then checks each state's successor row on its
  own.  Each model's true labelling is among the guesses, so both methods
  find a model exactly when one exists; ``labels`` is much faster.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import formula as F
from .formula import Formula
from .closure import closure
from .semantics import Multigraph, SubdistModel, satisfies_globally

CHUNK = 1 << 17


@dataclass
class OracleOutcome:
    model: object | None
    complete: bool          # False when the time budget ran out
    models_checked: int = 0


def _rows_multigraph(n: int, max_weight: int) -> np.ndarray:
    return np.array(list(itertools.product(range(max_weight + 1), repeat=n)), dtype=np.int64)


def _grid_scale(max_denominator: int) -> int:
    return math.lcm(*range(1, max_denominator + 1))


def _rows_subdist(n: int, max_denominator: int) -> np.ndarray:
    scale = _grid_scale(max_denominator)
    grid = sorted({Fraction(a, b) for b in range(1, max_denominator + 1) for a in range(b + 1)})
    nums = [int(g * scale) for g in grid]
    rows = [r for r in itertools.product(nums, repeat=n) if sum(r) <= scale]
    return np.array(rows, dtype=np.int64)


class _BatchEval:
    """Extensions of formulas over a batch of models sharing one valuation."""

    def __init__(self, M: np.ndarray, atoms: dict, nominals: dict, scale: int):
        self.M = M                  # (batch, n, n) integer weights
        self.B, self.n = M.shape[0], M.shape[1]
        self.atoms = atoms          # name -> bool array (n,)
        self.nominals = nominals    # name -> state
        self.scale = scale          # weights are M / scale
        self.cache: dict = {}

    def full(self, row: np.ndarray) -> np.ndarray:
        return np.broadcast_to(row, (self.B, self.n))

    def measure(self, e: np.ndarray) -> np.ndarray:
        return np.einsum("bst,bt->bs", self.M, e.astype(np.int64))

    def ext(self, g: Formula) -> np.ndarray:
        hit = self.cache.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == F.BOT:
            out = self.full(np.zeros(self.n, dtype=bool))
        elif k == F.ATOM:
            out = self.full(self.atoms[g.data])
        elif k == F.NOM:
            row = np.zeros(self.n, dtype=bool)
            row[self.nominals[g.data]] = True
            out = self.full(row)
        elif k == F.NEG:
            out = ~self.ext(g.children[0])
        elif k == F.AND:
            out = self.ext(g.children[0]) & self.ext(g.children[1])
        elif k == F.SAT:
            col = self.ext(g.children[0])[:, self.nominals[g.data]]
            out = np.repeat(col[:, None], self.n, axis=1)
        elif k == F.UNIV:
            col = self.ext(g.children[0]).all(axis=1)
            out = np.repeat(col[:, None], self.n, axis=1)
        elif k == F.DIA:
            out = self.measure(self.ext(g.children[0])) > 0
        elif k == F.PRES:
            coeffs, rel, bound, modulus = g.data
            total = sum(c * self.measure(self.ext(a)) for c, a in zip(coeffs, g.children))
            if rel == "<":
                out = total < bound
            elif rel == ">":
                out = total > bound
            elif rel == "=":
                out = total == bound
            else:
                out = (total - bound) % modulus == 0
        elif k == F.PROB:
            out = self._prob(g)
        else:
            raise ValueError(f"cannot evaluate {F.render(g)}")
        self.cache[g] = out
        return out

    def _prob(self, g: Formula) -> np.ndarray:
        # p(m / s) >= 0  iff  s^d * L * p(m / s) >= 0, an integer expression
        poly = g.data
        ms = [self.measure(self.ext(a)) for a in g.children]
        d = poly.degree()
        lcm = 1
        for _, c in poly.sorted_terms():
            lcm = math.lcm(lcm, Fraction(c).denominator)
        total = np.zeros((self.B, self.n), dtype=np.int64)
        for mono, c in poly.sorted_terms():
            coef = int(Fraction(c) * lcm) * self.scale ** (d - sum(e for _, e in mono))
            term = np.full((self.B, self.n), coef, dtype=np.int64)
            for v, e in mono:
                term = term * ms[v] ** e
            total = total + term
        return total >= 0


def _has_only(f: Formula, kinds: set) -> bool:
    return all(g.kind in kinds or g.kind not in (F.DIA, F.PRES, F.PROB) for g in F.subformulas(f))


def oracle_run(psi: Formula, phi0: Formula, kind: str, max_states: int = 3, max_weight: int = 4,
               max_denominator: int = 4, time_budget: float | None = None,
               method: str = "labels") -> OracleOutcome:
    if method == "labels":
        return _run_labels(psi, phi0, kind, max_states, max_weight, max_denominator, time_budget)
    if method != "matrices":
        raise ValueError(f"unknown oracle method {method!r}")
    start = time.monotonic()
    atom_names = sorted(F.atoms_of(psi) | F.atoms_of(phi0))
    nom_names = list(dict.fromkeys(F.nominals_of(psi) + F.nominals_of(phi0)))
    relational = _has_only(psi, {F.DIA}) and _has_only(phi0, {F.DIA})
    checked = 0
    for n in range(1, max_states + 1):
        if kind == "multigraph":
            # only positivity matters to the diamond, so 0/1 covers every weight
            rows = _rows_multigraph(n, 1 if relational else max_weight)
            scale = 1
        elif kind == "subdist":
            rows = _rows_subdist(n, max_denominator)
            scale = _grid_scale(max_denominator)
        else:
            raise ValueError(f"unknown model kind {kind!r}")
        total = len(rows) ** n
        # states sorted by atom valuation: every model has such an isomorphic copy
        codes = list(itertools.combinations_with_replacement(range(1 << len(atom_names)), n))
        for code in codes:
            atoms = {
                a: np.array([bool(c >> j & 1) for c in code]) for j, a in enumerate(atom_names)
            }
            for placement in itertools.product(range(n), repeat=len(nom_names)):
                nominals = dict(zip(nom_names, placement))
                for lo in range(0, total, CHUNK):
                    if time_budget is not None and time.monotonic() - start > time_budget:
                        return OracleOutcome(None, False, checked)
                    idx = np.arange(lo, min(total, lo + CHUNK))
                    digits = []
                    for _ in range(n):
                        digits.append(idx % len(rows))
                        idx = idx // len(rows)
                    M = np.stack([rows[d] for d in digits], axis=1)
                    ev = _BatchEval(M, atoms, nominals, scale)
                    ok = ev.ext(psi).all(axis=1) & ev.ext(phi0).any(axis=1)
                    checked += len(M)
                    hits = np.flatnonzero(ok)
                    if len(hits):
                        model = _build(M[hits[0]], code, atom_names, nominals, kind, scale)
                        if not satisfies_globally(model, psi, phi0):
                            raise AssertionError("vectorized evaluation disagrees with model_check")
                        return OracleOutcome(model, True, checked)
    return OracleOutcome(None, True, checked)


def _build(matrix: np.ndarray, code: tuple, atom_names: list, nominals: dict, kind: str, scale: int):
    n = len(code)
    vals = [{a for j, a in enumerate(atom_names) if c >> j & 1} for c in code]
    if kind == "multigraph":
        succ = [{t: int(matrix[s, t]) for t in range(n) if matrix[s, t]} for s in range(n)]
        return Multigraph(n, succ, vals, dict(nominals))
    succ = [{t: Fraction(int(matrix[s, t]), scale) for t in range(n) if matrix[s, t]} for s in range(n)]
    return SubdistModel(n, succ, vals, dict(nominals))


def oracle_search(psi: Formula, phi0: Formula, kind: str, max_states: int = 3,
                  max_weight: int = 4, max_denominator: int = 4,
                  time_budget: float | None = None, method: str = "labels"):
    """First model within the bounds where ``psi`` holds everywhere and ``phi0`` somewhere."""
    return oracle_run(psi, phi0, kind, max_states, max_weight, max_denominator, time_budget,
                      method).model


# labelling search -------------------------------------------------------------

OPAQUE = (F.ATOM, F.NOM, F.DIA, F.PRES, F.PROB, F.SAT, F.UNIV)
COMBO_CHUNK = 2048


def _labellings(formulas: list, index: dict, opaque: list, psi_i: int) -> np.ndarray:
    """All truth assignments to the opaque formulas, extended propositionally.

    Rows are labellings (one bool per closure formula) in which ``psi`` holds.
    """
    m = len(opaque)
    codes = np.arange(1 << m, dtype=np.int64)
    val = np.zeros((1 << m, len(formulas)), dtype=bool)
    done = set()

    def ev(i: int):
        if i in done:
            return
        f = formulas[i]
        if f.kind in OPAQUE:
            val[:, i] = codes >> opaque.index(i) & 1 == 1
        elif f.kind == F.BOT:
            val[:, i] = False
        elif f.kind == F.NEG:
            c = index[f.children[0]]
            ev(c)
            val[:, i] = ~val[:, c]
        elif f.kind == F.AND:
            a, b = (index[c] for c in f.children)
            ev(a)
            ev(b)
            val[:, i] = val[:, a] & val[:, b]
        else:
            raise ValueError(f"cannot evaluate {F.render(f)}")
        done.add(i)

    for i in range(len(formulas)):
        ev(i)
    return val[val[:, psi_i]]


def _lift_batch(f: Formula, ms: list, scale: int) -> np.ndarray:
    """Vectorized predicate lifting; ``ms[k]`` holds integer measures of argument ``k``."""
    if f.kind == F.DIA:
        return ms[0] > 0
    if f.kind == F.PRES:
        coeffs, rel, bound, modulus = f.data
        total = sum(c * m for c, m in zip(coeffs, ms))
        if rel == "<":
            return total < bound
        if rel == ">":
            return total > bound
        if rel == "=":
            return total == bound
        return (total - bound) % modulus == 0
    poly = f.data
    d = poly.degree()
    lcm = 1
    for _, c in poly.sorted_terms():
        lcm = math.lcm(lcm, Fraction(c).denominator)
    total = np.zeros_like(ms[0])
    for mono, c in poly.sorted_terms():
        term = int(Fraction(c) * lcm) * scale ** (d - sum(e for _, e in mono))
        for v, e in mono:
            term = term * ms[v] ** e
        total = total + term
    return total >= 0


def _run_labels(psi, phi0, kind, max_states, max_weight, max_denominator, time_budget):
    start = time.monotonic()
    table = closure(psi, phi0)
    formulas, index = list(table.formulas), dict(table.index)
    # nominals that occur only as the label of an @ still need a position
    for name in F.nominals_of(psi) + F.nominals_of(phi0):
        nom = F.Nominal(name)
        if nom not in index:
            index[nom] = len(formulas)
            formulas.append(nom)
    opaque = [i for i, f in enumerate(formulas) if f.kind in OPAQUE]
    labels = _labellings(formulas, index, opaque, table.psi_index)
    modal = [i for i in opaque if formulas[i].kind in (F.DIA, F.PRES, F.PROB)]
    args = list(dict.fromkeys(index[c] for i in modal for c in formulas[i].children))
    arg_pos = {a: k for k, a in enumerate(args)}
    noms = [i for i in opaque if formulas[i].kind == F.NOM]
    univs = [i for i in opaque if formulas[i].kind == F.UNIV]
    sats = [i for i in opaque if formulas[i].kind == F.SAT]
    relational = all(formulas[i].kind == F.DIA for i in modal)
    if kind == "multigraph":
        scale = 1
    elif kind == "subdist":
        scale = _grid_scale(max_denominator)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    checked = 0
    L = len(labels)
    for n in range(1, max_states + 1):
        if kind == "multigraph":
            rows = _rows_multigraph(n, 1 if relational else max_weight)
        else:
            rows = _rows_subdist(n, max_denominator)
        combos = itertools.combinations_with_replacement(range(L), n)
        while True:
            if time_budget is not None and time.monotonic() - start > time_budget:
                return OracleOutcome(None, False, checked)
            chunk = list(itertools.islice(combos, COMBO_CHUNK))
            if not chunk:
                break
            C = np.array(chunk, dtype=np.int64)            # (c, n) label ids
            lab = labels[C]                                 # (c, n, formulas)
            checked += len(C) * len(rows)
            ok = lab[:, :, table.phi0_index].any(axis=1)
            for i in noms:
                ok &= lab[:, :, i].sum(axis=1) == 1
            for i in univs:
                body = lab[:, :, index[formulas[i].children[0]]].all(axis=1)
                ok &= (lab[:, :, i] == body[:, None]).all(axis=1)
            for i in sats:
                where = lab[:, :, index[F.Nominal(formulas[i].data)]]
                body = (lab[:, :, index[formulas[i].children[0]]] & where).any(axis=1)
                ok &= (lab[:, :, i] == body[:, None]).all(axis=1)
            if not ok.any():
                continue
            C, lab = C[ok], lab[ok]
            if modal:
                member = lab[:, :, args].astype(np.int64)   # (c, n, args)
                meas = np.einsum("rn,cna->cra", rows, member)
                lifted = np.stack(
                    [_lift_batch(formulas[i], [meas[:, :, arg_pos[index[a]]] for a in formulas[i].children], scale)
                     for i in modal], axis=-1)               # (c, rows, modal)
                want = lab[:, :, modal]                     # (c, n, modal)
                fits = (lifted[:, None, :, :] == want[:, :, None, :]).all(axis=-1)   # (c, n, rows)
                good = fits.any(axis=2).all(axis=1)
            else:
                fits = np.ones((len(C), n, len(rows)), dtype=bool)
                good = np.ones(len(C), dtype=bool)
            for c in np.flatnonzero(good):
                model = _build_from_labels(lab[c], rows, fits[c], formulas, kind, scale)
                if not satisfies_globally(model, psi, phi0):
                    raise AssertionError("labelling search disagrees with model_check")
                return OracleOutcome(model, True, checked)
    return OracleOutcome(None, True, checked)


def _build_from_labels(lab: np.ndarray, rows: np.ndarray, fits: np.ndarray, formulas: list,
                       kind: str, scale: int):
    n = lab.shape[0]
    succ = []
    for s in range(n):
        r = rows[int(np.flatnonzero(fits[s])[0])]
        if kind == "multigraph":
            succ.append({t: int(r[t]) for t in range(n) if r[t]})
        else:
            succ.append({t: Fraction(int(r[t]), scale) for t in range(n) if r[t]})
    atoms = [{f.data for i, f in enumerate(formulas) if f.kind == F.ATOM and lab[s, i]} for s in range(n)]
    nominals = {f.data: int(np.flatnonzero(lab[:, i])[0]) for i, f in enumerate(formulas) if f.kind == F.NOM}
    cls = Multigraph if kind == "multigraph" else SubdistModel
    return cls(n, succ, atoms, nominals)
