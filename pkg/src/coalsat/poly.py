"""Sparse multivariate polynomials with exact rational coefficients.

Variables are non-negative integers.  A monomial is a sorted tuple of
``(variable, exponent)`` pairs with positive exponents; the empty tuple is
the constant monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[tuple[int, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_key(m: Monomial):
    return (sum(e for _, e in m), m)


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[m] = c
        self.terms: dict = clean
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def const(cls, c) -> Poly:
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, v: int) -> Poly:
        return cls({((v, 1),): Fraction(1)})

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> Poly:
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> Poly:
        return _coerce(other) - self

    def __mul__(self, other) -> Poly:
        other = _coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative exponent")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    # inspection -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.sorted_terms()!r})"

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def linear_coeffs(self) -> dict:
        """Coefficients of degree-one monomials (assumes degree <= 1)."""
        return {m[0][0]: c for m, c in self.terms.items() if m}

    # evaluation -----------------------------------------------------------
    def evaluate(self, point: Mapping[int, Fraction] | Sequence[Fraction]):
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                term *= point[v] ** e
            total += term
        return total

    def substitute(self, images: Mapping[int, Poly] | Sequence[Poly]) -> Poly:
        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                term = term * (images[v] ** e)
            out = out + term
        return out

    def rename(self, mapping: Mapping[int, int]) -> Poly:
        out: dict = {}
        for m, c in self.terms.items():
            exps: dict = {}
            for v, e in m:
                w = mapping[v]
                exps[w] = exps.get(w, 0) + e
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + c
        return Poly(out)

    def interval(self, box: Sequence[tuple]) -> tuple:
        """Exact enclosure of the range over a box of non-negative intervals.

        Every monomial is monotone on the non-negative orthant, so each term
        contributes the product of its lower or upper endpoints.
        """
        lo = hi = Fraction(0)
        for m, c in self.terms.items():
            mlo = mhi = Fraction(1)
            for v, e in m:
                a, b = box[v]
                mlo *= a ** e
                mhi *= b ** e
            if c > 0:
                lo += c * mlo
                hi += c * mhi
            else:
                lo += c * mhi
                hi += c * mlo
        return lo, hi


def _coerce(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.const(x)


def poly_sum(polys: Iterable[Poly]) -> Poly:
    out = Poly()
    for p in polys:
        out = out + p
    return out
