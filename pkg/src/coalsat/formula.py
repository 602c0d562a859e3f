"""Hash-consed formula syntax.

Every formula is built through the constructor functions below, which intern
nodes so that structurally equal formulas are the same Python object.  This
keeps equality and hashing cheap and lets sequents be stored as bitsets over
closure indices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Poly

BOT = "bot"
ATOM = "atom"
NOM = "nom"
NEG = "neg"
AND = "and"
DIA = "dia"
PRES = "pres"
PROB = "prob"
SAT = "sat"
UNIV = "univ"

PRES_RELS = ("<", ">", "=", "mod")

# Operators interpreted by a one-step solver.  Atoms and nominals are
# nullary modalities.
MODAL_KINDS = frozenset({ATOM, NOM, DIA, PRES, PROB})


class Formula:
    """An interned syntax node.  Do not instantiate directly."""

    __slots__ = ("kind", "children", "data", "uid", "_size")

    _table: dict = {}
    _counter = 0

    def __init__(self, kind, children, data):
        self.kind = kind
        self.children = children
        self.data = data
        self.uid = Formula._counter
        Formula._counter += 1
        self._size = None

    def __repr__(self) -> str:
        return f"Formula({render(self)})"

    def __lt__(self, other: Formula) -> bool:
        return self.uid < other.uid

    # identity semantics: interning makes structural equality coincide
    __hash__ = object.__hash__

    def __eq__(self, other) -> bool:
        return self is other

    def __reduce__(self):
        return (parse_formula_text, (render(self),))

    # convenience accessors -------------------------------------------------
    @property
    def name(self) -> str:
        return self.data

    @property
    def is_modal(self) -> bool:
        return self.kind in MODAL_KINDS

    def size(self) -> int:
        if self._size is None:
            self._size = 1 + sum(c.size() for c in self.children)
        return self._size


def _mk(kind, children=(), data=None) -> Formula:
    key = (kind, children, data)
    node = Formula._table.get(key)
    if node is None:
        node = Formula(kind, children, data)
        Formula._table[key] = node
    return node


# constructors ---------------------------------------------------------------

def Bot() -> Formula:
    return _mk(BOT)


def Top() -> Formula:
    return Neg(Bot())


def Atom(name: str) -> Formula:
    return _mk(ATOM, (), name)


def Nominal(name: str) -> Formula:
    return _mk(NOM, (), name)


def Neg(f: Formula) -> Formula:
    return _mk(NEG, (f,))


def And(a: Formula, b: Formula) -> Formula:
    return _mk(AND, (a, b))


def Diamond(f: Formula) -> Formula:
    return _mk(DIA, (f,))


def Presburger(terms: Iterable[tuple], rel: str, bound: int, modulus: int | None = None) -> Formula:
    """Linear constraint ``sum c_i * #(arg_i) rel bound`` over successor counts.

    ``rel`` is one of ``<``, ``>``, ``=``, ``mod``; for ``mod`` the constraint
    is a congruence modulo ``modulus``.  Duplicate arguments are merged and
    zero coefficients dropped.
    """
    if rel not in PRES_RELS:
        raise ValueError(f"unknown relation {rel!r}")
    if rel == "mod":
        if modulus is None or int(modulus) <= 0:
            raise ValueError("modulus must be a positive integer")
        modulus = int(modulus)
    else:
        modulus = None
    merged: dict = {}
    for c, arg in terms:
        if not isinstance(c, int):
            if isinstance(c, Fraction) and c.denominator == 1:
                c = int(c)
            else:
                raise ValueError("Presburger coefficients must be integers")
        merged[arg] = merged.get(arg, 0) + c
    coeffs = tuple(c for c in merged.values() if c != 0)
    args = tuple(a for a, c in merged.items() if c != 0)
    if not args:
        raise ValueError("Presburger constraint needs at least one non-zero term")
    if not isinstance(bound, int):
        if isinstance(bound, Fraction) and bound.denominator == 1:
            bound = int(bound)
        else:
            raise ValueError("Presburger bound must be an integer")
    return _mk(PRES, args, (coeffs, rel, bound, modulus))


def Prob(poly: Poly, args: Sequence[Formula]) -> Formula:
    """Polynomial constraint ``poly(w(arg_0), ..., w(arg_{n-1})) >= 0``.

    Variable ``i`` of ``poly`` stands for the weight of ``args[i]``.  Duplicate
    arguments are merged and arguments not occurring in ``poly`` dropped.
    """
    args = tuple(args)
    used = poly.variables()
    slot: dict = {}
    mapping = {}
    for i, a in enumerate(args):
        if i not in used:
            continue
        if a not in slot:
            slot[a] = len(slot)
        mapping[i] = slot[a]
    if any(v >= len(args) for v in used):
        raise ValueError("polynomial mentions a placeholder without argument")
    if not slot:
        raise ValueError("probabilistic constraint needs at least one weight term")
    return _mk(PROB, tuple(slot), poly.rename(mapping))


def Sat(nominal: str, f: Formula) -> Formula:
    return _mk(SAT, (f,), nominal)


def Univ(f: Formula) -> Formula:
    return _mk(UNIV, (f,))


# derived connectives (used by the parser and generators) ---------------------

def Or(a: Formula, b: Formula) -> Formula:
    return Neg(And(Neg(a), Neg(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Neg(And(a, Neg(b)))


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Box(f: Formula) -> Formula:
    return Neg(Diamond(Neg(f)))


def conj(fs: Iterable[Formula]) -> Formula:
    out = None
    for f in fs:
        out = f if out is None else And(out, f)
    return Top() if out is None else out


def nneg(f: Formula) -> Formula:
    """Normalized negation: strip one leading negation or add one."""
    if f.kind == NEG:
        return f.children[0]
    return Neg(f)


# traversal ------------------------------------------------------------------

def subformulas(f: Formula) -> list:
    """Distinct subformulas in depth-first preorder."""
    seen: dict = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen[g] = None
        stack.extend(reversed(g.children))
    return list(seen)


def atoms_of(f: Formula) -> set:
    return {g.data for g in subformulas(f) if g.kind == ATOM}


def nominals_of(f: Formula) -> list:
    """Nominal names in first-occurrence order, including those under ``@``."""
    out: dict = {}
    for g in subformulas(f):
        if g.kind == NOM:
            out[g.data] = None
        elif g.kind == SAT:
            out[g.data] = None
    return list(out)


def has_kind(f: Formula, kinds) -> bool:
    return any(g.kind in kinds for g in subformulas(f))


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace whole subformulas according to ``mapping`` (bottom-up)."""
    cache: dict = {}

    def go(g: Formula) -> Formula:
        if g in mapping:
            return mapping[g]
        if g in cache:
            return cache[g]
        if not g.children:
            out = g
        else:
            kids = tuple(go(c) for c in g.children)
            out = _rebuild(g, kids)
        cache[g] = out
        return out

    return go(f)


def _rebuild(g: Formula, kids: tuple) -> Formula:
    if kids == g.children:
        return g
    if g.kind == PRES:
        coeffs, rel, bound, modulus = g.data
        return Presburger(zip(coeffs, kids), rel, bound, modulus)
    if g.kind == PROB:
        return Prob(g.data, kids)
    return _mk(g.kind, kids, g.data)


# rendering ------------------------------------------------------------------

def _render_rational(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _render_poly(poly: Poly, names: list) -> tuple:
    """Render a polynomial; return the text and placeholder first-use order."""
    parts = []
    order: list = []
    for mono, c in poly.sorted_terms():
        factors = [_render_rational(c)]
        for v, e in mono:
            if v not in order:
                order.append(v)
            factors.append(names[v] + (f"^{e}" if e > 1 else ""))
        parts.append("*".join(factors))
    text = " + ".join(parts) if parts else "0"
    return text, order


def render(f: Formula) -> str:
    """Canonical fully parenthesised text; ``parse(render(f)) is f``."""
    k = f.kind
    if k == BOT:
        return "false"
    if k == ATOM:
        return f.data
    if k == NOM:
        return "'" + f.data
    if k == NEG:
        return "~" + render(f.children[0])
    if k == AND:
        return f"({render(f.children[0])} & {render(f.children[1])})"
    if k == DIA:
        return "<>" + render(f.children[0])
    if k == PRES:
        coeffs, rel, bound, modulus = f.data
        lhs = " + ".join(f"{c}*#({render(a)})" for c, a in zip(coeffs, f.children))
        op = f"=mod {modulus}=" if rel == "mod" else rel
        return f"({lhs} {op} {bound})"
    if k == PROB:
        names = [f"w({render(a)})" for a in f.children]
        text, order = _render_poly(f.data, names)
        if order != list(range(len(f.children))):
            prefix = " + ".join(f"0*{n}" for n in names)
            text = prefix + " + " + text
        return f"({text} >= 0)"
    if k == SAT:
        return f"@'{f.data} {render(f.children[0])}"
    if k == UNIV:
        return f"A {render(f.children[0])}"
    raise ValueError(f"unknown formula kind {k!r}")


def parse_formula_text(text: str) -> Formula:
    from .parser import parse

    return parse(text)
