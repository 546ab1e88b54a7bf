"""Recursive-descent parser for polynomial expressions in x and y.

Grammar (whitespace is ignored, multiplication must be explicit)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' uint)?
    atom   := rational | 'x' | 'y' | '(' expr ')'

``rational`` is ``digits`` or ``digits/digits``.  Unary minus binds looser
than ``^``, so ``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .poly2 import ONE, X, Y, Poly2


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xy])|(?P<op>[-+*^()]))")
_ATOM_START = frozenset({"number", "x", "y", "(", "-"})


@dataclass
class _Tok:
    kind: str
    text: str
    offset: int


def tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        start = m.start(m.lastgroup)
        text = m.group(m.lastgroup)
        if m.lastgroup == "num":
            den = text.partition("/")[2]
            if den and int(den) == 0:
                raise ParseError("zero denominator", start)
            kind = "number"
        else:
            kind = text
        toks.append(_Tok(kind, text, start))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "end" else f"{t.text!r}"
        return ParseError(f"unexpected {what}", t.offset, frozenset(expected))

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise self.fail({"+", "-", "*", "^", "end"})
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.take().kind
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.tok.kind == "*":
            self.take()
            e = BinOp("*", e, self.factor())
        return e

    def factor(self) -> Expr:
        if self.tok.kind == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        if self.tok.kind == "^":
            self.take()
            t = self.tok
            if t.kind != "number" or "/" in t.text:
                raise self.fail({"nonnegative integer"})
            self.take()
            return Pow(base, int(t.text))
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.take()
            return Num(Fraction(t.text))
        if t.kind in ("x", "y"):
            self.take()
            return Var(t.kind)
        if t.kind == "(":
            self.take()
            e = self.expr()
            if self.tok.kind != ")":
                raise self.fail({")"})
            self.take()
            return e
        raise self.fail(_ATOM_START)


def parse_expr(src: str) -> Expr:
    return _Parser(src).parse()


def lower(e: Expr) -> Poly2:
    if isinstance(e, Num):
        return Poly2.const(e.value)
    if isinstance(e, Var):
        return X if e.name == "x" else Y
    if isinstance(e, Neg):
        return -lower(e.operand)
    if isinstance(e, Pow):
        return lower(e.base) ** e.exponent if e.exponent else ONE
    left, right = lower(e.left), lower(e.right)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    return left * right


def parse_poly(src: str) -> Poly2:
    return lower(parse_expr(src))
