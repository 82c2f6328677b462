"""Parser and evaluator for one-variable real expressions.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | NAME | NAME '(' args ')' | '(' expr ')'

Function names are ``ln``, ``exp``, ``sqrt``, ``abs`` (one argument) and
``pow`` (two arguments). Any other name is the free variable; at most one
distinct name may appear.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Expression",
    "ExprSyntaxError",
    "DomainError",
    "parse",
    "unparse",
    "evaluate",
    "evaluate_array",
    "free_variable",
    "FUNCTIONS",
]

FUNCTIONS = {"ln": 1, "exp": 1, "sqrt": 1, "abs": 1, "pow": 2}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expression = Union[Num, Var, Neg, BinOp, Call]


class ExprSyntaxError(ValueError):
    """Malformed expression text. ``position`` is 1-based."""

    def __init__(self, message: str, position: int, source: str):
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position} in {source!r}")


class DomainError(ValueError):
    """Evaluation left the real domain of some sub-expression."""

    def __init__(self, reason: str, subexpr: str, value: float):
        self.reason = reason
        self.subexpr = subexpr
        self.value = value
        super().__init__(f"{reason} in {subexpr!r} at input {value!r}")


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError("unexpected character", pos + 1, source)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start + 1))
        pos = m.end()
    tokens.append(("end", "", len(source) + 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ExprSyntaxError(message, tok[2], self.source)

    def expect(self, op: str):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected {op!r}, found {found}")
        self.i += 1

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.next()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.i += 1
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        tok = self.next()
        kind, text, _ = tok
        if kind == "num":
            value = float(text)
            if not math.isfinite(value):
                raise self.error("numeric literal overflows", tok)
            return Num(value)
        if kind == "name":
            if text in FUNCTIONS:
                self.expect("(")
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.i += 1
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[text]:
                    raise self.error(
                        f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", tok
                    )
                return Call(text, tuple(args))
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise self.error(f"unexpected {found}", tok)


def _variables(node, acc: set) -> set:
    if isinstance(node, Var):
        acc.add(node.name)
    elif isinstance(node, Neg):
        _variables(node.operand, acc)
    elif isinstance(node, BinOp):
        _variables(node.left, acc)
        _variables(node.right, acc)
    elif isinstance(node, Call):
        for arg in node.args:
            _variables(arg, acc)
    return acc


def parse(source: str) -> Expression:
    """Parse ``source`` into an expression tree.

    Raises ExprSyntaxError on malformed input or when more than one
    distinct variable name is used.
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 1, source)
    p = _Parser(source)
    tree = p.expr()
    if p.peek()[0] != "end":
        raise p.error(f"unexpected {p.peek()[1]!r}")
    names = _variables(tree, set())
    if len(names) > 1:
        raise ExprSyntaxError(
            f"more than one free variable: {', '.join(sorted(names))}", 1, source
        )
    return tree


def free_variable(expr: Expression) -> str | None:
    names = _variables(expr, set())
    return next(iter(names)) if names else None


# --------------------------------------------------------------------------
# unparse

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PREC = 3


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG_PREC
    return 5


def unparse(node: Expression) -> str:
    """Render a tree as text that parses back to the same tree."""
    if isinstance(node, Num):
        v = node.value
        return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(unparse(a) for a in node.args)})"
    if isinstance(node, Neg):
        inner = unparse(node.operand)
        if _prec(node.operand) < _NEG_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[node.op]
    left, right = unparse(node.left), unparse(node.right)
    if node.op == "^":
        # base binds tighter than anything but an atom; exponent may be unary
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < _NEG_PREC:
            right = f"({right})"
    else:
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
    return f"{left} {node.op} {right}"


# --------------------------------------------------------------------------
# evaluation


def _check(value: float, node, x: float) -> float:
    if not math.isfinite(value):
        raise DomainError("non-finite result", unparse(node), x)
    return value


def _pow_scalar(base: float, expo: float, node, x: float) -> float:
    if base == 0.0 and expo < 0.0:
        raise DomainError("zero to a negative power", unparse(node), x)
    if base < 0.0 and expo != math.floor(expo):
        raise DomainError("negative base with non-integer exponent", unparse(node), x)
    try:
        return math.pow(base, expo)
    except OverflowError:
        raise DomainError("non-finite result", unparse(node), x) from None


def _eval(node, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, BinOp):
        a = _eval(node.left, x)
        b = _eval(node.right, x)
        op = node.op
        if op == "+":
            return _check(a + b, node, x)
        if op == "-":
            return _check(a - b, node, x)
        if op == "*":
            return _check(a * b, node, x)
        if op == "/":
            if b == 0.0:
                raise DomainError("division by zero", unparse(node), x)
            return _check(a / b, node, x)
        return _check(_pow_scalar(a, b, node, x), node, x)
    args = [_eval(arg, x) for arg in node.args]
    name = node.name
    v = args[0]
    if name == "ln":
        if v <= 0.0:
            raise DomainError("logarithm of non-positive value", unparse(node), x)
        return math.log(v)
    if name == "sqrt":
        if v < 0.0:
            raise DomainError("square root of negative value", unparse(node), x)
        return math.sqrt(v)
    if name == "abs":
        return abs(v)
    if name == "exp":
        try:
            return _check(math.exp(v), node, x)
        except OverflowError:
            raise DomainError("non-finite result", unparse(node), x) from None
    return _check(_pow_scalar(v, args[1], node, x), node, x)


def evaluate(expr: Expression, x: float) -> float:
    """Evaluate ``expr`` at ``x`` in double precision.

    Raises DomainError instead of returning NaN or infinity.
    """
    if not math.isfinite(x):
        raise DomainError("non-finite input", unparse(expr), x)
    return float(_eval(expr, float(x)))


def _fail(mask, reason, node, xs):
    bad = np.flatnonzero(np.broadcast_to(mask, xs.shape))
    raise DomainError(reason, unparse(node), float(xs.flat[bad[0]]))


def _check_arr(values, node, xs):
    bad = ~np.isfinite(values)
    if bad.any():
        _fail(bad, "non-finite result", node, xs)
    return values


def _pow_arr(base, expo, node, xs):
    if np.any((base == 0.0) & (expo < 0.0)):
        _fail((base == 0.0) & (expo < 0.0), "zero to a negative power", node, xs)
    neg = (base < 0.0) & (expo != np.floor(expo))
    if np.any(neg):
        _fail(neg, "negative base with non-integer exponent", node, xs)
    return _check_arr(np.power(base, expo), node, xs)


def _eval_arr(node, xs):
    if isinstance(node, Num):
        return np.full(xs.shape, node.value)
    if isinstance(node, Var):
        return xs
    if isinstance(node, Neg):
        return -_eval_arr(node.operand, xs)
    if isinstance(node, BinOp):
        a = _eval_arr(node.left, xs)
        b = _eval_arr(node.right, xs)
        op = node.op
        if op == "+":
            return _check_arr(a + b, node, xs)
        if op == "-":
            return _check_arr(a - b, node, xs)
        if op == "*":
            return _check_arr(a * b, node, xs)
        if op == "/":
            if np.any(b == 0.0):
                _fail(b == 0.0, "division by zero", node, xs)
            return _check_arr(a / b, node, xs)
        return _pow_arr(a, b, node, xs)
    args = [_eval_arr(arg, xs) for arg in node.args]
    v = args[0]
    name = node.name
    if name == "ln":
        if np.any(v <= 0.0):
            _fail(v <= 0.0, "logarithm of non-positive value", node, xs)
        return np.log(v)
    if name == "sqrt":
        if np.any(v < 0.0):
            _fail(v < 0.0, "square root of negative value", node, xs)
        return np.sqrt(v)
    if name == "abs":
        return np.abs(v)
    if name == "exp":
        return _check_arr(np.exp(v), node, xs)
    return _pow_arr(v, args[1], node, xs)


def evaluate_array(expr: Expression, xs) -> np.ndarray:
    """Vectorized :func:`evaluate`; raises on the first offending element."""
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        bad = ~np.isfinite(xs)
        if bad.any():
            _fail(bad, "non-finite input", expr, xs)
        return np.array(_eval_arr(expr, xs), dtype=float)
