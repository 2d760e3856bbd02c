"""Arithmetic expressions with forward-mode differentiation.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Functions: sin, cos, exp, sqrt, abs, min (two arguments).  The name ``pi``
is a constant.  Evaluation is vectorised: bindings may be numpy arrays and
broadcast together.  ``abs`` is differentiated with sign(0) = 0, so values
at its kink are a convention, not a derivative.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import EvalError, ExprSyntaxError, UnknownIdentifier

FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "sqrt": 1, "abs": 1, "min": 2}
CONSTANTS = {"pi": math.pi}


# --------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Node = Union[Const, Var, Neg, BinOp, Call]


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", _byte(text, start))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), _byte(text, m.start(kind))))
        pos = m.end()
    tokens.append(("end", "", _byte(text, len(text))))
    return tokens


def _byte(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text, variables):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = set(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            what = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", pos)
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
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if text not in FUNCTIONS:
                    raise UnknownIdentifier(text)
                self.take()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[text]:
                    raise ExprSyntaxError(
                        f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", pos)
                return Call(text, tuple(args))
            if text in self.variables:
                return Var(text)
            if text in CONSTANTS:
                return Const(CONSTANTS[text])
            raise UnknownIdentifier(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"unexpected {what}", pos)


def parse(text: str, variables: Sequence[str]) -> Node:
    """Parse ``text``; every identifier must be in ``variables`` or be a known name."""
    return _Parser(text, variables).parse()


def unparse(node: Node) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{unparse(node.arg)})"
    if isinstance(node, BinOp):
        return f"({unparse(node.left)}{node.op}{unparse(node.right)})"
    return f"{node.func}({','.join(unparse(a) for a in node.args)})"


def free_variables(node: Node) -> frozenset:
    if isinstance(node, Var):
        return frozenset([node.name])
    if isinstance(node, Neg):
        return free_variables(node.arg)
    if isinstance(node, BinOp):
        return free_variables(node.left) | free_variables(node.right)
    if isinstance(node, Call):
        return frozenset().union(*(free_variables(a) for a in node.args))
    return frozenset()


# --------------------------------------------------------------- evaluation

def _value(node, env):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -_value(node.arg, env)
    if isinstance(node, BinOp):
        a = _value(node.left, env)
        b = _value(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return np.true_divide(a, b)
        return np.power(a, b)
    args = [_value(a, env) for a in node.args]
    if node.func == "min":
        return np.minimum(args[0], args[1])
    return getattr(np, node.func)(args[0])


def _check_finite(x, what="value"):
    if not np.all(np.isfinite(x)):
        raise EvalError(f"non-finite {what}")


def _env(bindings, node):
    env = {}
    for name in free_variables(node):
        if name not in bindings:
            raise UnknownIdentifier(name)
        env[name] = np.asarray(bindings[name], dtype=float)
    return env


def evaluate(node: Node, bindings: Mapping[str, object]):
    """Evaluate ``node``; arrays in ``bindings`` broadcast.  Raises EvalError on NaN/inf."""
    env = _env(bindings, node)
    with np.errstate(all="ignore"):
        out = np.asarray(_value(node, env), dtype=float)
    _check_finite(out)
    return out if out.ndim else float(out)


# Dual numbers: ``der`` carries a trailing axis of k seed directions, or is
# None for quantities with identically zero derivative.

class _Dual:
    __slots__ = ("val", "der")

    def __init__(self, val, der=None):
        self.val = val
        self.der = der


def _scale(der, factor):
    if der is None:
        return None
    return der * np.asarray(factor)[..., None]


def _add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _dual(node, env, k):
    if isinstance(node, Const):
        return _Dual(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        a = _dual(node.arg, env, k)
        return _Dual(-a.val, None if a.der is None else -a.der)
    if isinstance(node, BinOp):
        a = _dual(node.left, env, k)
        b = _dual(node.right, env, k)
        op = node.op
        if op == "+":
            return _Dual(a.val + b.val, _add(a.der, b.der))
        if op == "-":
            return _Dual(a.val - b.val, _add(a.der, None if b.der is None else -b.der))
        if op == "*":
            return _Dual(a.val * b.val, _add(_scale(a.der, b.val), _scale(b.der, a.val)))
        if op == "/":
            q = np.true_divide(a.val, b.val)
            der = _add(_scale(a.der, 1.0 / b.val), _scale(b.der, -q / b.val))
            return _Dual(q, der)
        val = np.power(a.val, b.val)
        der = None
        if a.der is not None:
            der = _scale(a.der, b.val * np.power(a.val, b.val - 1.0))
        if b.der is not None:
            der = _add(der, _scale(b.der, val * np.log(a.val)))
        return _Dual(val, der)
    args = [_dual(a, env, k) for a in node.args]
    f = node.func
    if f == "min":
        a, b = args
        pick_a = a.val <= b.val
        val = np.where(pick_a, a.val, b.val)
        if a.der is None and b.der is None:
            return _Dual(val)
        zero = np.zeros(np.shape(val) + (k,))
        da = zero + (0.0 if a.der is None else a.der)
        db = zero + (0.0 if b.der is None else b.der)
        return _Dual(val, np.where(np.asarray(pick_a)[..., None], da, db))
    a = args[0]
    if f == "sin":
        return _Dual(np.sin(a.val), _scale(a.der, np.cos(a.val)))
    if f == "cos":
        return _Dual(np.cos(a.val), _scale(a.der, -np.sin(a.val)))
    if f == "exp":
        e = np.exp(a.val)
        return _Dual(e, _scale(a.der, e))
    if f == "sqrt":
        s = np.sqrt(a.val)
        return _Dual(s, _scale(a.der, 0.5 / s))
    return _Dual(np.abs(a.val), _scale(a.der, np.sign(a.val)))


def _gradient(node, bindings, seeds):
    """Value and derivatives along the rows of ``seeds`` (dict name -> length-k vector)."""
    k = len(next(iter(seeds.values()))) if seeds else 1
    env = {}
    for name in free_variables(node):
        if name not in bindings:
            raise UnknownIdentifier(name)
        val = np.asarray(bindings[name], dtype=float)
        s = seeds.get(name)
        der = None
        if s is not None and np.any(np.asarray(s) != 0.0):
            der = np.broadcast_to(np.asarray(s, dtype=float), val.shape + (k,))
        env[name] = _Dual(val, der)
    with np.errstate(all="ignore"):
        out = _dual(node, env, k)
        val = np.asarray(out.val, dtype=float)
        if out.der is None:
            der = np.zeros(val.shape + (k,))
        else:
            der = np.broadcast_to(out.der, val.shape + (k,)).astype(float)
    _check_finite(val)
    _check_finite(der, "derivative")
    return val, der


def eval_dual(node: Node, bindings: Mapping[str, object], seed: Mapping[str, float]):
    """Value and directional derivative d/de eval(bindings + e*seed) at e = 0."""
    val, der = _gradient(node, bindings, {name: [float(v)] for name, v in seed.items()})
    d = der[..., 0]
    if val.ndim == 0:
        return float(val), float(d)
    return val, d


class Expression:
    """Parsed expression bound to a fixed variable list."""

    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.ast = parse(text, self.variables)
        self.free = free_variables(self.ast)

    def __repr__(self):
        return f"Expression({self.text!r})"

    def depends_on(self, name):
        return name in self.free

    def __call__(self, **bindings):
        return evaluate(self.ast, bindings)

    def value(self, bindings):
        return evaluate(self.ast, bindings)

    def gradient(self, bindings, wrt: Sequence[str]):
        """Value and partial derivatives, ``grad[..., j] = d/d wrt[j]``."""
        k = len(wrt)
        seeds = {name: np.eye(k)[j] for j, name in enumerate(wrt)}
        return _gradient(self.ast, bindings, seeds)
