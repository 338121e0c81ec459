"""Tiny recursive-descent parser shared by the textual formats.

The grammar is ordinary arithmetic over atoms: integers, identifiers and
parenthesised sub-expressions, with ``*``, ``/`` (by constants only), ``+``,
``-`` and integer powers ``^n``.  The meaning of atoms and of multiplication is
supplied by a ``Ring`` object, so the same parser builds index polynomials,
(non-commutative) Weyl operators and formal Lie words.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|/|\+|-|\(|\)))")


class ParseError(ValueError):
    pass


def tokenize(text: str) -> List[Tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


class Ring:
    """Interface the parser evaluates into."""

    def const(self, c: Fraction):
        raise NotImplementedError

    def symbol(self, name: str):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def power(self, a, n: int):
        if n < 0:
            raise ParseError("negative powers are not supported here")
        out = self.const(Fraction(1))
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def as_constant(self, a) -> Fraction | None:
        return None


class _Parser:
    def __init__(self, tokens, ring: Ring):
        self.toks = tokens
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term()
        if sign < 0:
            acc = self.ring.neg(acc)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = self.ring.add(acc, rhs if op == "+" else self.ring.neg(rhs))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                acc = self.ring.mul(acc, rhs)
            else:
                c = self.ring.as_constant(rhs)
                if c is None or c == 0:
                    raise ParseError("division is only allowed by nonzero constants")
                acc = self.ring.mul(acc, self.ring.const(1 / c))
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            n = int(self.take("num")[1]) * sign
            return self.ring.power(base, n)
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(Fraction(int(value)))
        if kind == "id":
            self.take()
            return self.ring.symbol(value)
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        if (kind, value) == ("op", "-"):
            self.take()
            return self.ring.neg(self.factor())
        raise ParseError(f"unexpected token {value!r}")


def parse_with(text: str, ring: Ring):
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    p = _Parser(toks, ring)
    out = p.expr()
    if p.i != len(toks):
        raise ParseError(f"trailing input {p.toks[p.i][1]!r} in {text!r}")
    return out


class _IndexRing(Ring):
    def __init__(self):
        from .exact import IndexPoly

        self.IP = IndexPoly

    def const(self, c):
        return self.IP.const(c)

    def symbol(self, name):
        if name in ("k", "t", "eta"):
            return self.IP.symbol(name)
        raise ParseError(f"unknown symbol {name!r}")

    def as_constant(self, a):
        return a.constant_value() if a.is_constant() else None


def parse_indexpoly(text: str):
    return parse_with(text, _IndexRing())
