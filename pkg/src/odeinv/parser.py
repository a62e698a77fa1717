"""Polynomial expression parser and the canonical printer's round-trip peer.

Grammar (implicit multiplication is not allowed):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ['^' INTEGER]
    base   := NUMBER | IDENT | '(' expr ')'
    NUMBER := INTEGER | INTEGER '/' INTEGER | INTEGER '.' INTEGER

Decimal literals convert exactly (0.25 becomes 1/4); identifiers must name
symbols of the target universe.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import Polynomial, SymbolUniverse


class ParseError(ValueError):
    """Syntax or name error, carrying the offending position."""

    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position
        self.text = text


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+|/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError("unexpected character", pos + (len(text[pos:]) - len(stripped)), text)
        if m.lastgroup == "number":
            tokens.append(("number", m.group("number"), m.start("number")))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: SymbolUniverse):
        self.text = text
        self.universe = universe
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok if tok is not None else self.peek()
        raise ParseError(message, tok[2], self.text)

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            self.advance()
            negate = value == "-"
        p = self.term()
        if negate:
            p = -p
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                q = self.term()
                p = p - q if value == "-" else p + q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        p = self.base()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, _ = tok = self.peek()
            if kind == "op" and value == "-":
                self.error("negative exponents are not allowed", tok)
            if kind != "number" or not value.isdigit():
                self.error("exponent must be a non-negative integer", tok)
            self.advance()
            p = p ** int(value)
        return p

    def base(self) -> Polynomial:
        kind, value, _ = tok = self.advance()
        if kind == "number":
            return Polynomial.constant(self.universe, Fraction(value))
        if kind == "ident":
            try:
                sym = self.universe.by_name(value)
            except KeyError:
                self.error(f"unknown identifier {value!r}", tok)
            return Polynomial.variable(self.universe, sym)
        if kind == "op" and value == "(":
            p = self.expr()
            kind, value, _ = tok = self.advance()
            if not (kind == "op" and value == ")"):
                self.error("expected ')'", tok)
            return p
        self.error("expected a number, identifier, or '('", tok)


def parse_polynomial(text: str, universe: SymbolUniverse) -> Polynomial:
    """Parse an expression into a canonical polynomial over the universe."""
    return _Parser(text, universe).parse()
