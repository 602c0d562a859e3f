"""Recursive-descent parser for the concrete formula syntax.

Grammar, loosest binding first::

    formula  := imp ('<->' imp)*
    imp      := or ('->' imp)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | '<>' unary | '[]' unary | 'A' unary
              | '@' NOMINAL unary | primary
    primary  := 'true' | 'false' | ATOM | NOMINAL | comparison | '(' formula ')'

A comparison relates two arithmetic expressions built from integers,
rationals ``p/q``, ``+ - * ^`` and either ``#(formula)`` (Presburger) or
``w(formula)`` (probabilistic) terms.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import formula as F
from .errors import ParseError
from .poly import Poly

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<nominal>'[A-Za-z0-9_]+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op><->|->|<>|\[\]|<=|>=|=mod\b|[~&|()<>=#@+\-*/^])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false", "A", "w"}


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"{self.kind}:{self.text}"


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


def _error(text: str, pos: int, message: str) -> ParseError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ParseError(message, line, col)


class _Fail(Exception):
    """Internal backtracking signal carrying the furthest error."""

    def __init__(self, pos: int, message: str):
        self.pos = pos
        self.message = message


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.memo: dict = {}
        self.furthest = (0, "syntax error")

    # helpers ---------------------------------------------------------------
    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        if tok.pos >= self.furthest[0]:
            self.furthest = (tok.pos, message)
        raise _Fail(tok.pos, message)

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind in ("op", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"expected {text!r}, found {self.peek().text or 'end of input'!r}")

    # formulas --------------------------------------------------------------
    def formula(self) -> F.Formula:
        key = self.i
        hit = self.memo.get(key)
        if hit is not None:
            result, end = hit
            if isinstance(result, _Fail):
                raise result
            self.i = end
            return result
        try:
            result = self._iff()
        except _Fail as exc:
            self.memo[key] = (exc, key)
            raise
        self.memo[key] = (result, self.i)
        return result

    def _iff(self):
        left = self._imp()
        while self.accept("<->"):
            left = F.Iff(left, self._imp())
        return left

    def _imp(self):
        left = self._or()
        if self.accept("->"):
            return F.Implies(left, self._imp())
        return left

    def _or(self):
        left = self._and()
        while self.accept("|"):
            left = F.Or(left, self._and())
        return left

    def _and(self):
        left = self._unary()
        while self.accept("&"):
            left = F.And(left, self._unary())
        return left

    def _unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "~":
            self.i += 1
            return F.Neg(self._unary())
        if tok.kind == "op" and tok.text == "<>":
            self.i += 1
            return F.Diamond(self._unary())
        if tok.kind == "op" and tok.text == "[]":
            self.i += 1
            return F.Box(self._unary())
        if tok.kind == "ident" and tok.text == "A":
            self.i += 1
            return F.Univ(self._unary())
        if tok.kind == "op" and tok.text == "@":
            self.i += 1
            nom = self.peek()
            if nom.kind != "nominal":
                self.fail("expected a nominal after '@'")
            self.i += 1
            return F.Sat(nom.text[1:], self._unary())
        return self._primary()

    def _primary(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "true":
            self.i += 1
            return F.Top()
        if tok.kind == "ident" and tok.text == "false":
            self.i += 1
            return F.Bot()
        if tok.kind == "nominal":
            self.i += 1
            return F.Nominal(tok.text[1:])
        if tok.kind == "ident" and tok.text[0].islower() and (
            tok.text not in _KEYWORDS or (tok.text == "w" and self.peek(1).text != "(")
        ):
            self.i += 1
            return F.Atom(tok.text)
        starts_arith = tok.kind == "num" or tok.text in ("#", "-", "(") or (
            tok.kind == "ident" and tok.text == "w"
        )
        if starts_arith:
            save = self.i
            try:
                return self._comparison()
            except _Fail:
                self.i = save
                if tok.text != "(":
                    raise
            self.i += 1
            inner = self.formula()
            self.expect(")")
            return inner
        self.fail(f"unexpected token {tok.text or 'end of input'!r}")

    # arithmetic ------------------------------------------------------------
    def _comparison(self) -> F.Formula:
        start = self.peek()
        table: list = []  # (kind, formula) per placeholder
        lhs = self._sum(table)
        rel_tok = self.peek()
        rel = rel_tok.text
        modulus = None
        if rel_tok.kind == "op" and rel in ("<", ">", "=", "<=", ">="):
            self.i += 1
        elif rel_tok.kind == "op" and rel == "=mod":
            self.i += 1
            num = self.peek()
            if num.kind != "num":
                self.fail("expected modulus after '=mod'")
            self.i += 1
            modulus = int(num.text)
            self.expect("=")
            rel = "mod"
        else:
            self.fail("expected a comparison operator")
        rhs = self._sum(table)
        kinds = {k for k, _ in table}
        if not kinds:
            self.fail("comparison mentions neither #(..) nor w(..)", start)
        if len(kinds) > 1:
            self.fail("cannot mix #(..) and w(..) in one comparison", start)
        args = [f for _, f in table]
        diff = lhs - rhs
        if kinds == {"#"}:
            return self._presburger(diff, rel, modulus, args, start)
        if modulus is not None:
            self.fail("congruences are only available for #(..) terms", rel_tok)
        return self._probabilistic(diff, rel, args)

    def _presburger(self, diff: Poly, rel, modulus, args, start):
        if diff.degree() > 1:
            self.fail("Presburger constraints must be linear", start)
        coeffs = diff.linear_coeffs()
        bound = -diff.constant()
        if any(c.denominator != 1 for c in coeffs.values()) or bound.denominator != 1:
            self.fail("Presburger coefficients must be integers", start)
        bound = int(bound)
        if rel == ">=":
            rel, bound = ">", bound - 1
        elif rel == "<=":
            rel, bound = "<", bound + 1
        if rel == "mod" and modulus <= 0:
            self.fail("modulus must be positive", start)
        terms = [(int(coeffs[v]), args[v]) for v in sorted(coeffs)]
        terms = [(c, a) for c, a in terms if c != 0]
        merged: dict = {}
        for c, a in terms:
            merged[a] = merged.get(a, 0) + c
        if not any(merged.values()):
            return _constant_truth(0, rel, bound, modulus)
        return F.Presburger(terms, rel, bound, modulus)

    def _probabilistic(self, diff: Poly, rel, args):
        # every comparison becomes one or two primitive "poly >= 0" atoms
        def atom(p: Poly) -> F.Formula:
            used = p.variables()
            if not used:
                return F.Top() if p.constant() >= 0 else F.Bot()
            return F.Prob(p, args)

        if rel == ">=":
            return atom(diff)
        if rel == "<=":
            return atom(-diff)
        if rel == ">":
            return F.Neg(atom(-diff))
        if rel == "<":
            return F.Neg(atom(diff))
        return F.And(atom(diff), atom(-diff))

    def _sum(self, table) -> Poly:
        out = self._product(table)
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "+":
                self.i += 1
                out = out + self._product(table)
            elif tok.kind == "op" and tok.text == "-":
                self.i += 1
                out = out - self._product(table)
            else:
                return out

    def _product(self, table) -> Poly:
        out = self._signed(table)
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                self.i += 1
                out = out * self._signed(table)
            elif tok.kind == "op" and tok.text == "/":
                self.i += 1
                den = self._signed(table)
                if den.variables() or den.is_zero():
                    self.fail("division only by a non-zero constant")
                out = out * Poly.const(1 / den.constant())
            else:
                return out

    def _signed(self, table) -> Poly:
        if self.accept("-"):
            return -self._signed(table)
        return self._power(table)

    def _power(self, table) -> Poly:
        base = self._atom_expr(table)
        if self.accept("^"):
            tok = self.peek()
            if tok.kind != "num":
                self.fail("expected an integer exponent")
            self.i += 1
            return base ** int(tok.text)
        return base

    def _atom_expr(self, table) -> Poly:
        tok = self.peek()
        if tok.kind == "num":
            self.i += 1
            return Poly.const(int(tok.text))
        if tok.kind == "op" and tok.text == "#":
            self.i += 1
            return self._placeholder("#", table)
        if tok.kind == "ident" and tok.text == "w" and self.peek(1).text == "(":
            self.i += 1
            return self._placeholder("w", table)
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            inner = self._sum(table)
            self.expect(")")
            return inner
        self.fail("expected an arithmetic term")

    def _placeholder(self, kind, table) -> Poly:
        self.expect("(")
        arg = self.formula()
        self.expect(")")
        for idx, (k, f) in enumerate(table):
            if f is arg and k == kind:
                return Poly.var(idx)
        table.append((kind, arg))
        return Poly.var(len(table) - 1)


def _constant_truth(value, rel, bound, modulus) -> F.Formula:
    if rel == "<":
        ok = value < bound
    elif rel == ">":
        ok = value > bound
    elif rel == "=":
        ok = value == bound
    else:
        ok = (value - bound) % modulus == 0
    return F.Top() if ok else F.Bot()


def parse(text: str) -> F.Formula:
    """Parse a formula; raises ParseError with line and column on failure."""
    p = _Parser(text)
    try:
        result = p.formula()
        if p.peek().kind != "eof":
            p.fail(f"unexpected trailing input {p.peek().text!r}")
    except _Fail:
        pos, message = p.furthest
        raise _error(text, pos, message) from None
    return result
