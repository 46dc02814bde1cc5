"""Recursive-descent parser for trig-polynomial and vector-field expressions.

Grammar::

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' integer)?
    atom     := rational | name | 'sin(' name ')' | 'cos(' name ')'
              | 'd_' name | '(' expr ')'
    rational := integer ('/' integer)?

A summand carrying exactly one ``d_name`` factor contributes to a vector
field; an expression without any ``d_`` factor is a trig-polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .calculus import VectorField
from .symcore import ANGULAR, LINEAR, Chart, TrigPoly


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}" + (f": {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass
class _Tok:
    kind: str  # "int" | "name" | "op" | "end"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append(_Tok("op", ch, m.start(3)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Val:
    """Either a scalar TrigPoly or a vector part (per-coordinate TrigPolys)."""

    __slots__ = ("scalar", "vec")

    def __init__(self, scalar: TrigPoly | None = None, vec: tuple[TrigPoly, ...] | None = None):
        self.scalar = scalar
        self.vec = vec


class _Parser:
    def __init__(self, text: str, chart: Chart, defs: Mapping[str, TrigPoly] | None):
        self.text = text
        self.chart = chart
        self.defs = dict(defs or {})
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> _Tok:
        t = self.take()
        if t.kind != "op" or t.value != op:
            raise ParseError(f"expected {op!r}, found {t.value or 'end of input'!r}", t.pos, self.text)
        return t

    def error(self, msg: str, tok: _Tok):
        raise ParseError(msg, tok.pos, self.text)

    # combinators ------------------------------------------------------------

    def _add(self, a: _Val, b: _Val, tok: _Tok, negate: bool) -> _Val:
        if (a.vec is None) != (b.vec is None):
            self.error("mixed scalar and vector-field summands", tok)
        if a.vec is None:
            return _Val(a.scalar - b.scalar if negate else a.scalar + b.scalar)
        return _Val(vec=tuple((x - y) if negate else (x + y) for x, y in zip(a.vec, b.vec)))

    def _mul(self, a: _Val, b: _Val, tok: _Tok) -> _Val:
        if a.vec is not None and b.vec is not None:
            self.error("product of two d_ factors", tok)
        if a.vec is None and b.vec is None:
            return _Val(a.scalar * b.scalar)
        s, v = (a.scalar, b.vec) if a.vec is None else (b.scalar, a.vec)
        return _Val(vec=tuple(s * x for x in v))

    # grammar ----------------------------------------------------------------

    def parse(self) -> _Val:
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            self.error(f"unexpected {t.value!r}", t)
        return v

    def expr(self) -> _Val:
        t = self.peek()
        neg = False
        if t.kind == "op" and t.value in "+-":
            neg = t.value == "-"
            self.take()
        v = self.term()
        if neg:
            v = _Val(-v.scalar) if v.vec is None else _Val(vec=tuple(-x for x in v.vec))
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-":
                self.take()
                rhs = self.term()
                v = self._add(v, rhs, t, t.value == "-")
            else:
                return v

    def term(self) -> _Val:
        v = self.factor()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.take()
                v = self._mul(v, self.factor(), t)
            else:
                return v

    def factor(self) -> _Val:
        v = self.atom()
        t = self.peek()
        if t.kind == "op" and t.value == "^":
            self.take()
            n = self.take()
            if n.kind != "int":
                self.error("exponent must be a non-negative integer", n)
            e = int(n.value)
            if v.vec is not None:
                if e != 1:
                    self.error("d_ factor raised to a power", t)
                return v
            return _Val(v.scalar ** e)
        return v

    def atom(self) -> _Val:
        t = self.take()
        ch = self.chart
        if t.kind == "int":
            val = Fraction(int(t.value))
            nt = self.peek()
            if nt.kind == "op" and nt.value == "/":
                self.take()
                d = self.take()
                if d.kind != "int":
                    self.error("expected integer denominator", d)
                if int(d.value) == 0:
                    self.error("zero denominator", d)
                val = val / int(d.value)
            return _Val(TrigPoly.const(ch, val))
        if t.kind == "op" and t.value == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        if t.kind == "name":
            name = t.value
            if name in ("sin", "cos"):
                self.expect_op("(")
                arg = self.take()
                if arg.kind != "name":
                    self.error(f"{name}() expects a coordinate name", arg)
                if arg.value not in ch.names:
                    self.error(f"unknown symbol {arg.value!r}", arg)
                if ch.kind(arg.value) != ANGULAR:
                    self.error(f"{name}() applied to linear coordinate {arg.value!r}", arg)
                self.expect_op(")")
                f = TrigPoly.sin if name == "sin" else TrigPoly.cos
                return _Val(f(ch, arg.value))
            if name.startswith("d_"):
                coord = name[2:]
                if coord not in ch.names:
                    self.error(f"unknown coordinate {coord!r} in {name}", t)
                z, one = TrigPoly.zero(ch), TrigPoly.const(ch, 1)
                k = ch.index(coord)
                return _Val(vec=tuple(one if j == k else z for j in range(ch.dim)))
            if name in self.defs:
                return _Val(self.defs[name])
            if name in ch.names:
                if ch.kind(name) != LINEAR:
                    self.error(f"angular coordinate {name!r} must appear inside sin() or cos()", t)
                return _Val(TrigPoly.coord(ch, name))
            self.error(f"unknown symbol {name!r}", t)
        self.error(f"unexpected {t.value or 'end of input'!r}", t)


def parse_expression(text: str, chart: Chart, defs: Mapping[str, TrigPoly] | None = None) -> TrigPoly | VectorField:
    """Parse ``text`` into a TrigPoly (no ``d_`` factors) or a VectorField."""
    v = _Parser(text, chart, defs).parse()
    if v.vec is None:
        return v.scalar
    return VectorField(chart, list(v.vec))


def parse_poly(text: str, chart: Chart, defs: Mapping[str, TrigPoly] | None = None) -> TrigPoly:
    v = parse_expression(text, chart, defs)
    if not isinstance(v, TrigPoly):
        raise ParseError("expected a scalar expression, found a vector field", 0, text)
    return v


def parse_vector_field(text: str, chart: Chart, defs: Mapping[str, TrigPoly] | None = None) -> VectorField:
    v = parse_expression(text, chart, defs)
    if isinstance(v, TrigPoly):
        if v.is_zero():
            return VectorField.zero(chart)
        raise ParseError("expected a vector field (no d_ factor found)", 0, text)
    return v


def parse_chart(text: str) -> Chart:
    """``"chart xi1 xi2 theta0:angle"`` or just the coordinate list."""
    words = text.split()
    if words and words[0] == "chart":
        words = words[1:]
    if not words:
        raise ParseError("empty chart declaration", 0, text)
    coords = []
    for w in words:
        name, _, kind = w.partition(":")
        if kind not in ("", "angle"):
            raise ParseError(f"unknown coordinate kind {kind!r}", text.find(w), text)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in ("sin", "cos") or name.startswith("d_"):
            raise ParseError(f"invalid coordinate name {name!r}", text.find(w), text)
        coords.append((name, ANGULAR if kind == "angle" else LINEAR))
    try:
        return Chart(tuple(coords))
    except ValueError as exc:
        raise ParseError(str(exc), 0, text) from None
