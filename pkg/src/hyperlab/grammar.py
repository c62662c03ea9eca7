"""Expression grammar shared by the field calculator and family definitions.

::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

In field mode the only name is ``e`` (the infinitesimal generator) plus the
truncation marker ``O(e^q)``; numbers are read exactly, so ``0.25`` is
``1/4``.  A rendered element such as ``3 + 5*e^1 (+O(e^4))`` parses back to
itself: a trailing parenthesised ``+O(...)`` group is added to the value.

In family mode the names are ``n``, ``x`` and ``pi`` and the functions are
``sin cos tan arctan exp log sqrt abs``; expressions compile to numpy
callables ``f(n, x)`` that broadcast over arrays.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .asymptotic import AsymptoticNumber, epsilon, inv
from .errors import ParseError
from .scalars import RATIONAL, ScalarField

# names that are never applied as functions, so 'e (+O(e^2))' reads as a suffix
_VARIABLES = frozenset({"e", "n", "x", "pi"})

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?![A-Za-z_])|\.\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup or "num"
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST nodes are plain tuples: (kind, payload..., pos)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, self.text, tok.pos)

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        tok = self.tok
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(tok.text) if tok.kind != "end" else "end of input"
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def peek(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expr(self):
        node = self.term()
        while self.peek("+") or self.peek("-"):
            op = self.take()
            node = ("bin", op.text, node, self.term(), op.pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek("*") or self.peek("/"):
            op = self.take()
            node = ("bin", op.text, node, self.unary(), op.pos)
        return node

    def unary(self):
        if self.peek("-"):
            op = self.take()
            return ("neg", self.unary(), op.pos)
        if self.peek("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek("^"):
            op = self.take()
            return ("bin", "^", base, self.unary(), op.pos)
        return base

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return ("num", tok.text, tok.pos)
        if tok.kind == "name":
            self.take()
            if self.peek("(") and tok.text not in _VARIABLES:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return ("call", tok.text, arg, tok.pos)
            return ("name", tok.text, tok.pos)
        if self.peek("("):
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_tree(text: str, allow_suffix: bool = False):
    p = _Parser(text)
    if p.tok.kind == "end":
        raise p.error("empty expression")
    node = p.expr()
    if allow_suffix and p.peek("("):
        start = p.tok
        suffix = p.primary()
        if suffix[0] != "call" or suffix[1] != "O":
            raise p.error("only a '(+O(e^q))' group may follow an expression", start)
        node = ("bin", "+", node, suffix, start.pos)
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    return node


# field mode ------------------------------------------------------------


def parse_field_expression(text: str, field: ScalarField = RATIONAL) -> AsymptoticNumber:
    """Evaluate a field expression such as ``1/(1-e) + O(e^3)``."""
    tree = parse_tree(text, allow_suffix=True)
    return _FieldEval(text, field).eval(tree)


class _FieldEval:
    def __init__(self, text: str, field: ScalarField):
        self.text = text
        self.field = field

    def fail(self, msg: str, pos: int):
        return ParseError(msg, self.text, pos)

    def constant_exponent(self, node) -> Fraction:
        # exponents are rational whatever the coefficient field
        value = self.eval(node) if self.field.exact else _FieldEval(self.text, RATIONAL).eval(node)
        if not value.is_exact or any(q != 0 for q, _ in value.terms):
            raise self.fail("exponent must be a rational constant", _pos(node))
        c = value.coefficient(0)
        if not isinstance(c, Fraction):
            raise self.fail("exponent must be exact", _pos(node))
        return c

    def eval(self, node) -> AsymptoticNumber:
        kind = node[0]
        if kind == "num":
            return AsymptoticNumber.constant(Fraction(node[1]), self.field)
        if kind == "name":
            if node[1] == "e":
                return epsilon(1, self.field)
            raise self.fail(f"unknown symbol {node[1]!r} (only 'e' is allowed)", node[2])
        if kind == "neg":
            return -self.eval(node[1])
        if kind == "call":
            name, arg, pos = node[1], node[2], node[3]
            if name != "O":
                raise self.fail(f"unknown function {name!r} (only O(e^q) is allowed)", pos)
            inner = self.eval(arg)
            if not inner.is_exact or len(inner.terms) != 1 or inner.terms[0][1] != 1:
                raise self.fail("O(...) takes a single power of e", _pos(arg))
            return AsymptoticNumber.big_o(inner.terms[0][0], self.field)
        if kind == "bin":
            op, left, right, pos = node[1], node[2], node[3], node[4]
            if op == "^":
                base = self.eval(left)
                k = self.constant_exponent(right)
                if k.denominator == 1:
                    return base ** int(k)
                if base.is_exact and len(base.terms) == 1 and base.terms[0][1] == 1:
                    return epsilon(base.terms[0][0] * k, self.field)
                raise self.fail("fractional powers apply only to powers of e", pos)
            a, b = self.eval(left), self.eval(right)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            return a * inv(b)
        raise AssertionError(kind)


def _pos(node) -> int:
    return node[-1]


# family mode -----------------------------------------------------------

_FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "arctan": np.arctan,
    "atan": np.arctan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

FAMILY_SYMBOLS = ("n", "x")


@dataclass(frozen=True)
class CompiledExpression:
    """A parsed family expression, callable as ``f(n, x)``."""

    source: str
    symbols: frozenset
    fn: Callable

    def __call__(self, n, x):
        with np.errstate(all="ignore"):
            return self.fn(n, x)


def compile_family_expression(text: str, allowed: tuple[str, ...] = FAMILY_SYMBOLS) -> CompiledExpression:
    tree = parse_tree(text)
    used: set[str] = set()

    def build(node) -> Callable:
        kind = node[0]
        if kind == "num":
            value = float(node[1])
            return lambda n, x: value
        if kind == "name":
            name = node[1]
            if name == "pi":
                return lambda n, x: np.pi
            if name not in allowed:
                raise ParseError(f"unknown symbol {name!r}; allowed: {', '.join(allowed + ('pi',))}",
                                 text, node[2])
            used.add(name)
            return (lambda n, x: n) if name == "n" else (lambda n, x: x)
        if kind == "neg":
            inner = build(node[1])
            return lambda n, x: -inner(n, x)
        if kind == "call":
            fn = _FUNCTIONS.get(node[1])
            if fn is None:
                raise ParseError(f"unknown function {node[1]!r}; known: {', '.join(sorted(_FUNCTIONS))}",
                                 text, node[3])
            inner = build(node[2])
            return lambda n, x: fn(inner(n, x))
        op, left, right = node[1], build(node[2]), build(node[3])
        if op == "+":
            return lambda n, x: left(n, x) + right(n, x)
        if op == "-":
            return lambda n, x: left(n, x) - right(n, x)
        if op == "*":
            return lambda n, x: left(n, x) * right(n, x)
        if op == "/":
            return lambda n, x: np.true_divide(left(n, x), right(n, x))
        return lambda n, x: np.power(np.asarray(left(n, x), dtype=float), right(n, x))

    fn = build(tree)
    return CompiledExpression(text, frozenset(used), fn)
