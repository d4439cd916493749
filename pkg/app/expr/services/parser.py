# app/expr/services/parser.py
"""Recursive-descent parser for the scalar expression language.

Grammar:
    expr  := term (("+"|"-") term)*
    term  := factor (("*"|"/") factor)*
    factor:= ("-")? power
    power := atom ("^" factor)?
    atom  := number | ident | ident "(" expr ")" | "(" expr ")"
"""
from __future__ import annotations

import re
from typing import Iterable, List, NamedTuple, Optional

from app.errors import ParseError, PreconditionError
from app.expr.schemas.nodes import FUNCTIONS, BinOp, Call, Const, Expr, Neg, Var

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z]+)"
    r"|(?P<op>[-+*/^()])"
)


class Token(NamedTuple):
    kind: str  # number | ident | op | end
    text: str
    offset: int


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(pos, "unexpected character", source[pos])
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, variables: frozenset):
        self.source = source
        self.variables = variables
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _accept(self, text: str) -> Optional[Token]:
        if self.tok.kind == "op" and self.tok.text == text:
            return self._advance()
        return None

    def _expect(self, text: str) -> Token:
        t = self._accept(text)
        if t is None:
            raise ParseError(self.tok.offset, f"expected '{text}'", self.tok.text)
        return t

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise ParseError(0, "empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(self.tok.offset, "unexpected trailing token", self.tok.text)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self._advance()
            node = BinOp(op.text, node, self.term(), offset=op.offset)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self._advance()
            node = BinOp(op.text, node, self.factor(), offset=op.offset)
        return node

    def factor(self) -> Expr:
        minus = self._accept("-")
        node = self.power()
        if minus is not None:
            return Neg(node, offset=minus.offset)
        return node

    def power(self) -> Expr:
        base = self.atom()
        caret = self._accept("^")
        if caret is None:
            return base
        # right-associative: the exponent is a full factor
        return BinOp("^", base, self.factor(), offset=caret.offset)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self._advance()
            return Const(float(t.text), offset=t.offset)
        if t.kind == "ident":
            self._advance()
            if t.text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(t.text, arg, offset=t.offset)
            if t.text in self.variables:
                return Var(t.text, offset=t.offset)
            raise ParseError(t.offset, "unknown identifier", t.text)
        if self._accept("(") is not None:
            node = self.expr()
            self._expect(")")
            return node
        if t.kind == "end":
            raise ParseError(t.offset, "unexpected end of input")
        raise ParseError(t.offset, "unexpected token", t.text)


def parse(source: str, variables: Iterable[str]) -> Expr:
    names = frozenset(variables)
    if not names:
        raise PreconditionError("variable set must be nonempty")
    clash = names & FUNCTIONS.keys()
    if clash:
        raise PreconditionError(f"variable names shadow functions: {sorted(clash)}")
    return _Parser(source, names).parse()
