"""Recursive-descent parser for the model expression language.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | ident | ident '(' expr ')' | '(' expr ')'

Functions: exp, log, sin, cos, sqrt, abs.  Numbers are decimals with an
optional exponent.  Operator precedence is pow > unary minus > mul/div >
add/sub, with pow right-associative, so ``-x^2`` is ``-(x^2)`` and
``x^2^3`` is ``x^(2^3)``.
"""
from __future__ import annotations

import re
from collections.abc import Iterable

from ..exceptions import ParseError
from .nodes import BinOp, Call, Constant, Expression, FUNCTIONS, Neg, Node, Variable

_TOKEN_RE = re.compile(
    r"""
    (?P<number>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(source):
        kind = match.lastgroup
        text = match.group()
        column = match.start() - line_start + 1
        if kind == "ws":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = match.start() + text.rfind("\n") + 1
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {text!r}", line, column)
        tokens.append(_Token(kind, text, line, column))
    tokens.append(_Token("eof", "", line, len(source) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str) -> ParseError:
        tok = self.current
        at = f"at {tok.text!r}" if tok.kind != "eof" else "at end of input"
        return ParseError(f"{message} {at}", tok.line, tok.column)

    def expect_op(self, text: str) -> None:
        if self.current.kind == "op" and self.current.text == text:
            self.advance()
            return
        raise self.fail(f"expected {text!r}")

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while self.current.kind == "op" and self.current.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while self.current.kind == "op" and self.current.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Neg(self.parse_factor())
        node = self.parse_base()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            return BinOp("^", node, self.parse_factor())
        return node

    def parse_base(self) -> Node:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Constant(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.current.kind == "op" and self.current.text == "(":
                if tok.text not in FUNCTIONS:
                    raise ParseError(
                        f"unknown function {tok.text!r}", tok.line, tok.column
                    )
                self.advance()
                arg = self.parse_expr()
                if self.current.kind == "op" and self.current.text == ",":
                    raise ParseError(
                        f"function {tok.text!r} takes exactly one argument",
                        self.current.line,
                        self.current.column,
                    )
                self.expect_op(")")
                return Call(tok.text, arg)
            if tok.text in FUNCTIONS:
                raise ParseError(
                    f"function name {tok.text!r} used as a variable",
                    tok.line,
                    tok.column,
                )
            return Variable(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise self.fail("expected a number, variable, function call or '('")


def parse(source: str, variables: Iterable[str] | None = None) -> Expression:
    """Parse ``source`` into an :class:`Expression`.

    When ``variables`` is given, every identifier in the source must appear
    in it; unknown identifiers raise :class:`ParseError`.
    """
    parser = _Parser(_tokenize(source))
    root = parser.parse_expr()
    if parser.current.kind != "eof":
        raise parser.fail("unexpected trailing input")
    expr = Expression(root)
    if variables is not None:
        declared = set(variables)
        for name in expr.variables():
            if name not in declared:
                raise ParseError(f"unknown identifier {name!r}")
    return expr
