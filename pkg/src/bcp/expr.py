"""Small expression language for boundaries and time-dependent coefficients.

Grammar (whitespace ignored)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | 't' | 'inf'
            | func '(' expr ')' | '(' expr ')'

Unary minus binds looser than '^' (so ``-2^2`` is ``-(2^2)``) and '^'
is right associative, matching Python.

Supported functions: exp, log, sqrt, sin, cos, abs.  Evaluation follows
IEEE semantics (1/0 = inf, exp(-inf) = 0, log of a non-positive number
is -inf or NaN), which makes removable singularities such as
``exp(-1/t)`` at t = 0 come out as their limits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ExprSyntaxError

_FUNCTIONS: dict[str, Callable] = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "abs": np.abs,
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<ident>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # Skip trailing whitespace before declaring an error.
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ExprSyntaxError(f"expected {op!r}", tok.offset)
        self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.offset)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = ("+" if op == "+" else "-", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.factor()
            node = (op, node, rhs)
        return node

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return ("neg", self.factor())
        node = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            rhs = self.factor()  # right associative
            node = ("^", node, rhs)
        return node

    def base(self):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return ("num", float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "t":
                return ("t",)
            if tok.text == "inf":
                return ("num", float("inf"))
            if tok.text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", tok.text, arg)
            raise ExprSyntaxError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            "expected a number, 't', function or '('"
            if tok.kind != "end"
            else "unexpected end of input",
            tok.offset,
        )


def _evaluate(node, t):
    kind = node[0]
    if kind == "num":
        return np.float64(node[1]) + 0 * t if np.ndim(t) else np.float64(node[1])
    if kind == "t":
        return np.float64(t) if np.ndim(t) == 0 else np.asarray(t, dtype=np.float64)
    if kind == "neg":
        return -_evaluate(node[1], t)
    if kind == "call":
        return _FUNCTIONS[node[1]](_evaluate(node[2], t))
    a = _evaluate(node[1], t)
    b = _evaluate(node[2], t)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    if kind == "*":
        return a * b
    if kind == "/":
        return a / b
    if kind == "^":
        return np.power(a, b)
    raise AssertionError(f"unhandled node {kind}")


@dataclass(frozen=True)
class BoundaryExpr:
    """A parsed boundary expression over the single variable ``t``."""

    source: str
    ast: tuple = field(repr=False)

    def __call__(self, t):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = _evaluate(self.ast, t)
        return float(out) if np.ndim(out) == 0 else np.asarray(out)

    @property
    def is_constant_inf(self) -> bool:
        """True when the expression is the literal inf or -inf."""
        node = self.ast
        sign = 1
        while node[0] == "neg":
            sign = -sign
            node = node[1]
        return node == ("num", float("inf"))


def parse_boundary(text: str) -> BoundaryExpr:
    """Parse `text` into an evaluable boundary expression.

    Raises ExprSyntaxError with the byte offset of the first bad token.
    """
    ast = _Parser(text).parse()
    return BoundaryExpr(source=text, ast=ast)
