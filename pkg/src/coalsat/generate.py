"""Random formulas, problems and models, plus the corpus file format.

A corpus file holds one problem per line written ``assumption |- formula``;
blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import formula as F
from .closure import closure
from .formula import Formula
from .parser import parse
from .poly import Poly
from .semantics import Multigraph, SubdistModel

ATOMS = ("p", "q", "r")


@dataclass
class GenConfig:
    logic: str = "k"
    atoms: tuple = ATOMS
    nominals: tuple = ()
    depth: int = 3
    coeff: int = 3            # coefficients drawn from [-coeff, coeff]
    max_modulus: int = 3
    max_closure: int = 12
    nonlinear: bool = False   # probabilistic products of weights
    univ: bool = False        # allow the universal modality and @


class FormulaGen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng

    def leaf(self) -> Formula:
        r = self.rng.random()
        if self.cfg.nominals and r < 0.25:
            return F.Nominal(self.rng.choice(self.cfg.nominals))
        if r > 0.93:
            return self.rng.choice([F.Top(), F.Bot()])
        return F.Atom(self.rng.choice(self.cfg.atoms))

    def coeff(self) -> int:
        return self.rng.choice([c for c in range(-self.cfg.coeff, self.cfg.coeff + 1) if c])

    def args(self, depth: int) -> list:
        out = [self.formula(depth)]
        if self.rng.random() < 0.5:
            second = self.formula(depth)
            if second is not out[0]:
                out.append(second)
        return out

    def modal(self, depth: int) -> Formula:
        logic = self.cfg.logic
        if logic == "k":
            return F.Diamond(self.formula(depth - 1))
        if logic == "presburger":
            if self.rng.random() < 0.2:
                return F.Diamond(self.formula(depth - 1))
            args = self.args(depth - 1)
            terms = [(self.coeff(), a) for a in args]
            if self.rng.random() < 0.2:
                k = self.rng.randint(2, self.cfg.max_modulus)
                try:
                    return F.Presburger(terms, "mod", self.rng.randrange(k), k)
                except ValueError:
                    return F.Diamond(args[0])
            rel = self.rng.choice(["<", ">", ">", "="])
            try:
                return F.Presburger(terms, rel, self.rng.randint(-1, 3))
            except ValueError:
                return F.Diamond(args[0])
        if logic == "prob":
            args = self.args(depth - 1)
            poly = Poly.const(Fraction(self.rng.randint(-4, 4), self.rng.choice([1, 2, 4])))
            for j in range(len(args)):
                poly = poly + Poly.const(self.coeff()) * Poly.var(j)
            if self.cfg.nonlinear and len(args) == 2 and self.rng.random() < 0.5:
                poly = poly + Poly.const(self.coeff()) * Poly.var(0) * Poly.var(1)
            try:
                return F.Prob(poly, args)
            except ValueError:
                return F.Prob(Poly.var(0) - Poly.const(Fraction(1, 2)), args[:1])
        raise ValueError(f"unknown logic {logic!r}")

    def formula(self, depth: int | None = None) -> Formula:
        depth = self.cfg.depth if depth is None else depth
        if depth <= 0:
            return self.leaf()
        r = self.rng.random()
        if r < 0.15:
            return self.leaf()
        if r < 0.3:
            return F.Neg(self.formula(depth - 1))
        if r < 0.45:
            return F.And(self.formula(depth - 1), self.formula(depth - 1))
        if r < 0.55:
            return F.Or(self.formula(depth - 1), self.formula(depth - 1))
        if self.cfg.univ and r < 0.62:
            if self.cfg.nominals and self.rng.random() < 0.5:
                return F.Sat(self.rng.choice(self.cfg.nominals), self.formula(depth - 1))
            return F.Univ(self.formula(depth - 1))
        return self.modal(depth)


def closure_size(psi: Formula, phi0: Formula) -> int:
    return len(closure(psi, phi0))


def random_problem(cfg: GenConfig, rng: random.Random, tries: int = 200) -> tuple:
    """A pair (assumption, goal) whose closure has at most ``max_closure`` members."""
    gen = FormulaGen(cfg, rng)
    for _ in range(tries):
        if rng.random() < 0.25:
            psi = F.Top()
        else:
            psi = gen.formula(max(1, cfg.depth - 1))
        phi0 = gen.formula()
        if closure_size(psi, phi0) <= cfg.max_closure:
            return psi, phi0
    return F.Top(), F.Atom(cfg.atoms[0])


def random_corpus(cfg: GenConfig, count: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [random_problem(cfg, rng) for _ in range(count)]


def chain_problem(n: int) -> tuple:
    """Nested positive counts ``#(#(... #(true) > 0 ...) > 0) > 0`` of depth ``n``.

    The closure has ``n`` independent modal atoms, hence ``2^n`` types, but
    every state has only two children.
    """
    f = F.Top()
    for _ in range(n):
        f = F.Presburger([(1, f)], ">", 0)
    return F.Top(), f


# corpus files -----------------------------------------------------------------

def parse_corpus(text: str) -> list:
    """Parse a corpus file into ``(line_number, assumption, goal)`` triples."""
    out = []
    for no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "|-" not in stripped:
            raise ValueError(f"line {no}: expected 'assumption |- formula'")
        left, right = stripped.split("|-", 1)
        out.append((no, parse(left), parse(right)))
    return out


def format_corpus(problems: Iterable[tuple], header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [f"{F.render(psi)} |- {F.render(phi0)}" for psi, phi0 in problems]
    return "\n".join(lines) + "\n"


# random models ----------------------------------------------------------------

def random_multigraph(rng: random.Random, n: int, atoms: Iterable[str] = ATOMS,
                      nominals: Iterable[str] = (), max_weight: int = 3) -> Multigraph:
    atoms = list(atoms)
    succ = [
        {t: rng.randint(1, max_weight) for t in range(n) if rng.random() < 0.5}
        for _ in range(n)
    ]
    vals = [{a for a in atoms if rng.random() < 0.5} for _ in range(n)]
    noms = {i: rng.randrange(n) for i in nominals}
    return Multigraph(n, succ, vals, noms)


def random_subdist(rng: random.Random, n: int, atoms: Iterable[str] = ATOMS,
                   nominals: Iterable[str] = (), denominator: int = 4) -> SubdistModel:
    atoms = list(atoms)
    succ = []
    for _ in range(n):
        left = denominator
        row = {}
        for t in rng.sample(range(n), n):
            k = rng.randint(0, left)
            if k:
                row[t] = Fraction(k, denominator)
                left -= k
        succ.append(row)
    vals = [{a for a in atoms if rng.random() < 0.5} for _ in range(n)]
    noms = {i: rng.randrange(n) for i in nominals}
    return SubdistModel(n, succ, vals, noms)
