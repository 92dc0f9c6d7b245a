"""Arithmetic expressions in one variable ``s``.

Grammar (precedence low to high)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | 's' | 'pi' | 'e' | PARAM | FUNC '(' expr ')' | '(' expr ')'

``-s^2`` therefore means ``-(s^2)`` and ``2^3^2`` means ``2^(3^2)``. There is
no implicit multiplication. Functions: sin, cos, exp, ln, sqrt, neg.

Expressions evaluate either on plain values (floats, complex numbers or
arrays, used by the complex-step oracle) or on :class:`~rotsurf4.jets.Jet3`.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import EvaluationError, ParseError

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "neg")
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "s"


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            pos = len(text)
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", _byte_offset(text, bad))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text, parameters):
        self.tokens = _tokenize(text)
        self.i = 0
        self.parameters = frozenset(parameters)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, offset = self.peek()
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", offset)
        return self.take()

    def parse(self):
        kind, _, offset = self.peek()
        if kind == "end":
            raise ParseError("empty expression", offset)
        node = self.expr()
        kind, text, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", offset)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Call("neg", self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, text, offset = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                raise ParseError(f"unknown function {text!r}", offset)
            if text == VARIABLE:
                return Var()
            if text in self.parameters:
                return Param(text)
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            raise ParseError(f"unknown identifier {text!r}", offset)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", offset)
        raise ParseError(f"unexpected token {text!r}", offset)


def parse_expr(text, parameters=()):
    """Parse ``text`` into an AST; ``parameters`` lists the admissible parameter names."""
    return _Parser(text, parameters).parse()


def to_text(node):
    """Fully parenthesized source text that parses back to an equivalent tree."""
    if isinstance(node, Num):
        text = repr(float(node.value))
        return f"({text})" if node.value < 0 else text
    if isinstance(node, Var):
        return VARIABLE
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    raise TypeError(f"not an expression node: {node!r}")


def uses_variable(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, Call):
        return uses_variable(node.arg)
    if isinstance(node, BinOp):
        return uses_variable(node.left) or uses_variable(node.right)
    return False


def parameters_of(node):
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, Call):
        return parameters_of(node.arg)
    if isinstance(node, BinOp):
        return parameters_of(node.left) | parameters_of(node.right)
    return set()


# --- evaluation -------------------------------------------------------------


def _real(x):
    return np.real(x)


class _ValueOps:
    """Plain numeric evaluation; complex arguments are checked on their real part."""

    def __init__(self, s):
        self.s = s

    def const(self, c):
        return c

    def var(self):
        return self.s

    def _check(self, mask, message):
        mask = np.asarray(mask)
        if np.any(mask):
            raise EvaluationError(message, jets._first_bad(_real(self.s), mask))

    def call(self, fn, x):
        if fn == "neg":
            return -x
        if fn == "ln":
            self._check(_real(x) <= 0, "ln of non-positive argument")
            return np.log(x)
        if fn == "sqrt":
            self._check(_real(x) < 0, "sqrt of negative argument")
            return np.sqrt(x)
        return getattr(np, fn)(x)

    def binop(self, op, a, b, right_node):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            self._check(np.asarray(b) == 0, "division by zero")
            return a / b
        if _constant_integer(right_node):
            n = int(_constant_value(right_node))
            if n < 0:
                self._check(np.asarray(a) == 0, "division by zero")
            return a**n
        self._check(_real(a) <= 0, "non-integer power of non-positive base")
        return a**b


class _JetOps:
    def __init__(self, sj):
        self.sj = sj

    def const(self, c):
        return jets.Jet3.constant(c)

    def var(self):
        return self.sj

    def call(self, fn, x):
        sv = _real(self.sj.value)
        if fn == "neg":
            return -x
        if fn == "ln":
            return jets.ln(x, sv)
        if fn == "sqrt":
            return jets.sqrt(x, sv)
        return getattr(jets, fn)(x)

    def binop(self, op, a, b, right_node):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return a * jets.reciprocal(b, _real(self.sj.value))
        return jets.power(a, b, _real(self.sj.value))


def _constant_value(node):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Call) and node.fn == "neg":
        v = _constant_value(node.arg)
        return None if v is None else -v
    return None


def _constant_integer(node):
    v = _constant_value(node)
    return v is not None and float(v).is_integer()


def _walk(node, ops, params):
    if isinstance(node, Num):
        return ops.const(node.value)
    if isinstance(node, Var):
        return ops.var()
    if isinstance(node, Param):
        return ops.const(params[node.name])
    if isinstance(node, Call):
        return ops.call(node.fn, _walk(node.arg, ops, params))
    if isinstance(node, BinOp):
        a = _walk(node.left, ops, params)
        b = _walk(node.right, ops, params)
        return ops.binop(node.op, a, b, node.right)
    raise TypeError(f"not an expression node: {node!r}")


def _check_bound(node, params):
    missing = parameters_of(node) - set(params)
    if missing:
        raise EvaluationError(f"unbound parameter(s): {', '.join(sorted(missing))}")


def evaluate(node, s, params=None):
    """Value of the expression at ``s`` (float, complex or array)."""
    params = params or {}
    _check_bound(node, params)
    return _walk(node, _ValueOps(s), params)


def eval_jet(node, s, params=None):
    """Value and first three s-derivatives.

    ``s`` is either a number/array (the identity jet is used) or a
    :class:`~rotsurf4.jets.Jet3`, in which case the result is the jet of the
    composition.
    """
    params = params or {}
    _check_bound(node, params)
    sj = s if isinstance(s, jets.Jet3) else jets.Jet3.variable(s)
    return _walk(node, _JetOps(sj), params)


@dataclass(frozen=True)
class BoundExpr:
    """An AST with its parameter bindings, usable as a curve coordinate."""

    ast: object
    params: tuple = ()

    @classmethod
    def parse(cls, text, **params):
        ast = parse_expr(text, params)
        return cls(ast, tuple(sorted(params.items())))

    def value(self, s):
        return evaluate(self.ast, s, dict(self.params))

    def jet(self, s):
        return eval_jet(self.ast, s, dict(self.params))

    def __str__(self):
        return to_text(self.ast)
