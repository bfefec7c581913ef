"""Scalar coefficient expressions over a coordinate chart.

Expressions are immutable trees.  Structurally equal subtrees hash equal, so
the compiler can share them; evaluation runs through a flat register program
handed to :mod:`premetric.kernels`.

Grammar accepted by :func:`parse`::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' int)?
    atom   := number | name | func '(' expr ')' | '(' expr ')' | '-' atom
    func   := sin | cos | exp | tanh | bump | bump<k>

``bump<k>`` (``bump1``, ``bump2`` ...) is the k-th derivative of ``bump``; it
exists so that printed derivatives parse back.  Note that ``-x^2`` parses as
``(-x)^2`` because unary minus lives at atom level.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np
from numpy.polynomial import polynomial as P

from . import kernels
from ._purepy import (OP_ADD, OP_BUMP, OP_CONST, OP_COS, OP_DIV, OP_EXP,
                      OP_MUL, OP_NEG, OP_POW, OP_SIN, OP_SUB, OP_TANH, OP_VAR)

ZERO_ATOL = 1e-9
ZERO_RTOL = 1e-9


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class EvaluationError(ArithmeticError):
    """Domain error during evaluation; ``point`` is the offending coordinate row."""

    def __init__(self, message, point):
        self.point = tuple(float(v) for v in point)
        super().__init__(f"{message} at point {self.point}")


# ---------------------------------------------------------------------------
# chart


@dataclass(frozen=True)
class Chart:
    names: tuple
    time_axis: int | None = field(default=None)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        if self.time_axis is not None and not 1 <= self.time_axis <= len(names):
            raise ValueError(f"time axis {self.time_axis} outside chart")

    @classmethod
    def default(cls, n):
        if n == 3:
            return cls(("x", "y", "z"))
        if n == 4:
            return cls(("x", "y", "z", "xi"), time_axis=4)
        return cls(tuple(f"x{i}" for i in range(1, n + 1)))

    @property
    def n(self):
        return len(self.names)

    def index(self, name):
        """0-based column of coordinate ``name``."""
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a coordinate of {self.names}") from None

    def name(self, axis):
        """Coordinate name for the 1-based ``axis``."""
        return self.names[axis - 1]

    @property
    def time_name(self):
        if self.time_axis is None:
            return None
        return self.names[self.time_axis - 1]


# ---------------------------------------------------------------------------
# nodes


class Expr:
    __slots__ = ("_hash",)
    precedence = 5

    def _key(self):
        raise NotImplementedError

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        return power(self, k)

    def __str__(self):
        return to_text(self)

    @property
    def children(self):
        return ()


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = float(value)
        self._hash = hash(("c", self.value))

    def _key(self):
        return self.value

    def __repr__(self):
        return f"Const({self.value!r})"


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self._hash = hash(("v", name))

    def _key(self):
        return self.name

    def __repr__(self):
        return f"Var({self.name!r})"


class _Binary(Expr):
    __slots__ = ("a", "b")
    tag = ""

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self._hash = hash((self.tag, a._hash, b._hash))

    def _key(self):
        return (self.a, self.b)

    @property
    def children(self):
        return (self.a, self.b)

    def __repr__(self):
        return f"{type(self).__name__}({self.a!r}, {self.b!r})"


class Add(_Binary):
    __slots__ = ()
    tag, symbol, precedence = "+", "+", 1


class Sub(_Binary):
    __slots__ = ()
    tag, symbol, precedence = "-", "-", 1


class Mul(_Binary):
    __slots__ = ()
    tag, symbol, precedence = "*", "*", 2


class Div(_Binary):
    __slots__ = ()
    tag, symbol, precedence = "/", "/", 2


class Neg(Expr):
    __slots__ = ("a",)
    precedence = 3

    def __init__(self, a):
        self.a = a
        self._hash = hash(("neg", a._hash))

    def _key(self):
        return self.a

    @property
    def children(self):
        return (self.a,)

    def __repr__(self):
        return f"Neg({self.a!r})"


class Pow(Expr):
    __slots__ = ("a", "k")
    precedence = 4

    def __init__(self, a, k):
        if int(k) != k:
            raise ValueError(f"exponent must be an integer, got {k!r}")
        self.a = a
        self.k = int(k)
        self._hash = hash(("pow", a._hash, self.k))

    def _key(self):
        return (self.a, self.k)

    @property
    def children(self):
        return (self.a,)

    def __repr__(self):
        return f"Pow({self.a!r}, {self.k})"


class Func(Expr):
    __slots__ = ("a",)
    fname = ""

    def __init__(self, a):
        self.a = a
        self._hash = hash((self.fname, a._hash))

    def _key(self):
        return self.a

    @property
    def children(self):
        return (self.a,)

    def __repr__(self):
        return f"{type(self).__name__}({self.a!r})"


class Sin(Func):
    __slots__ = ()
    fname = "sin"


class Cos(Func):
    __slots__ = ()
    fname = "cos"


class Exp(Func):
    __slots__ = ()
    fname = "exp"


class Tanh(Func):
    __slots__ = ()
    fname = "tanh"


class Bump(Expr):
    """``order``-th derivative of exp(-1/(1-s^2)) on |s|<1, zero elsewhere."""

    __slots__ = ("a", "order")

    def __init__(self, a, order=0):
        if order < 0:
            raise ValueError("bump order must be non-negative")
        self.a = a
        self.order = int(order)
        self._hash = hash(("bump", a._hash, self.order))

    def _key(self):
        return (self.a, self.order)

    @property
    def children(self):
        return (self.a,)

    def __repr__(self):
        if self.order:
            return f"Bump({self.a!r}, {self.order})"
        return f"Bump({self.a!r})"


ScalarField = Expr

_FUNCS = {"sin": Sin, "cos": Cos, "exp": Exp, "tanh": Tanh}


# ---------------------------------------------------------------------------
# builders with constant folding and 0/1 elimination


def as_expr(v):
    if isinstance(v, Expr):
        return v
    if isinstance(v, (Real, Fraction, np.floating, np.integer)):
        return Const(float(v))
    raise TypeError(f"cannot use {type(v).__name__} as an expression")


def is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def is_zero(e):
    if isinstance(e, Expr):
        return isinstance(e, Const) and e.value == 0.0
    return e == 0


def add(a, b):
    a, b = as_expr(a), as_expr(b)
    if is_const(a, 0.0):
        return b
    if is_const(b, 0.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a, b):
    a, b = as_expr(a), as_expr(b)
    if is_const(b, 0.0):
        return a
    if is_const(a, 0.0):
        return neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def mul(a, b):
    a, b = as_expr(a), as_expr(b)
    if is_const(a, 0.0) or is_const(b, 0.0):
        return Const(0.0)
    if is_const(a, 1.0):
        return b
    if is_const(b, 1.0):
        return a
    if is_const(a, -1.0):
        return neg(b)
    if is_const(b, -1.0):
        return neg(a)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def div(a, b):
    a, b = as_expr(a), as_expr(b)
    if is_const(b, 1.0):
        return a
    if is_const(a, 0.0) and not is_const(b, 0.0):
        return Const(0.0)
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    return Div(a, b)


def neg(a):
    a = as_expr(a)
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.a
    return Neg(a)


def power(a, k):
    a = as_expr(a)
    if int(k) != k:
        raise ValueError(f"exponent must be an integer, got {k!r}")
    k = int(k)
    if k == 0:
        return Const(1.0)
    if k == 1:
        return a
    if isinstance(a, Const) and (a.value != 0.0 or k > 0):
        return Const(a.value ** k)
    return Pow(a, k)


def sin(a):
    a = as_expr(a)
    return Const(math.sin(a.value)) if isinstance(a, Const) else Sin(a)


def cos(a):
    a = as_expr(a)
    return Const(math.cos(a.value)) if isinstance(a, Const) else Cos(a)


def exp(a):
    a = as_expr(a)
    return Const(math.exp(a.value)) if isinstance(a, Const) else Exp(a)


def tanh(a):
    a = as_expr(a)
    return Const(math.tanh(a.value)) if isinstance(a, Const) else Tanh(a)


def bump(a, order=0):
    return Bump(as_expr(a), order)


def sum_exprs(terms):
    """Balanced sum; keeps trees shallow when many terms accumulate."""
    terms = [as_expr(t) for t in terms if not is_zero(t)]
    if not terms:
        return Const(0.0)
    while len(terms) > 1:
        paired = [add(terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            paired.append(terms[-1])
        terms = paired
    return terms[0]


def variables(e):
    seen, out, stack = set(), set(), [e]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if isinstance(node, Var):
            out.add(node.name)
        stack.extend(node.children)
    return out


def node_count(e):
    """Number of distinct subtrees (the size of the compiled program)."""
    seen, stack = set(), [e]
    while stack:
        node = stack.pop()
        if node not in seen:
            seen.add(node)
            stack.extend(node.children)
    return len(seen)


def substitute(e, mapping):
    """Replace variables by expressions: ``mapping`` is name -> Expr (or number)."""
    mapping = {k: as_expr(v) for k, v in mapping.items()}
    memo = {}

    def walk(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Var):
            out = mapping.get(node.name, node)
        elif isinstance(node, Const):
            out = node
        elif isinstance(node, _Binary):
            build = {Add: add, Sub: sub, Mul: mul, Div: div}[type(node)]
            out = build(walk(node.a), walk(node.b))
        elif isinstance(node, Neg):
            out = neg(walk(node.a))
        elif isinstance(node, Pow):
            out = power(walk(node.a), node.k)
        elif isinstance(node, Bump):
            out = bump(walk(node.a), node.order)
        else:
            out = {Sin: sin, Cos: cos, Exp: exp, Tanh: tanh}[type(node)](walk(node.a))
        memo[node] = out
        return out

    return walk(as_expr(e))


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)
_BUMP_NAME = re.compile(r"bump(\d*)$")


def _tokenize(text):
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", _byte(text, pos))
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _byte(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text, chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, _byte(self.text, tok[2]))

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] != "op":
            self.fail(f"expected {value!r}", tok)
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.factor()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def factor(self):
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "num" or not tok[1].isdigit():
                self.fail("exponent must be an integer literal", tok)
            node = power(node, sign * int(tok[1]))
        return node

    def atom(self):
        tok = self.peek()
        kind, value = tok[0], tok[1]
        if kind == "num":
            self.take()
            return Const(float(value))
        if kind == "name":
            self.take()
            if self.peek()[:2] == ("op", "("):
                self.take()
                arg = self.expr()
                self.expect(")")
                if value in _FOLDING:
                    return _FOLDING[value](arg)
                m = _BUMP_NAME.match(value)
                if m:
                    return Bump(arg, int(m.group(1) or 0))
                self.fail(f"unknown function {value!r}", tok)
            if value not in self.chart.names:
                self.fail(f"unknown identifier {value!r}", tok)
            return Var(value)
        if kind == "op" and value == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "op" and value == "-":
            self.take()
            return neg(self.atom())
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {value!r}", tok)


_FOLDING = {"sin": sin, "cos": cos, "exp": exp, "tanh": tanh}


def parse(text, chart=None):
    """Parse ``text`` into an expression over ``chart`` (default: 4-D chart)."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    chart = chart or Chart.default(4)
    p = _Parser(text, chart)
    node = p.expr()
    if p.peek()[0] != "end":
        p.fail(f"unexpected token {p.peek()[1]!r}")
    return node


# ---------------------------------------------------------------------------
# printer


def _fmt_number(v):
    if v.is_integer() and abs(v) < 1e16:
        s = str(int(v))
    else:
        s = repr(v)
    return f"({s})" if v < 0 or s.startswith("-") else s


def to_text(e):
    """Canonical serialization; ``parse(to_text(e)) == e``."""
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, _Binary):
        left = to_text(e.a)
        if e.a.precedence < e.precedence:
            left = f"({left})"
        right = to_text(e.b)
        if e.b.precedence <= e.precedence:
            right = f"({right})"
        return f"{left} {e.symbol} {right}"
    if isinstance(e, Neg):
        inner = to_text(e.a)
        if e.a.precedence < 5 or isinstance(e.a, Const):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Pow):
        base = to_text(e.a)
        if e.a.precedence < 5 or isinstance(e.a, Const):
            base = f"({base})"
        return f"{base}^{e.k}"
    if isinstance(e, Func):
        return f"{e.fname}({to_text(e.a)})"
    if isinstance(e, Bump):
        name = "bump" if e.order == 0 else f"bump{e.order}"
        return f"{name}({to_text(e.a)})"
    raise TypeError(f"unknown node {e!r}")


# ---------------------------------------------------------------------------
# differentiation


def differentiate(e, var, _memo=None):
    """Exact partial derivative of ``e`` with respect to coordinate ``var``."""
    memo = {} if _memo is None else _memo
    return _diff(as_expr(e), var, memo)


def _diff(e, var, memo):
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Const):
        out = Const(0.0)
    elif isinstance(e, Var):
        out = Const(1.0 if e.name == var else 0.0)
    elif isinstance(e, Add):
        out = add(_diff(e.a, var, memo), _diff(e.b, var, memo))
    elif isinstance(e, Sub):
        out = sub(_diff(e.a, var, memo), _diff(e.b, var, memo))
    elif isinstance(e, Mul):
        out = add(mul(_diff(e.a, var, memo), e.b), mul(e.a, _diff(e.b, var, memo)))
    elif isinstance(e, Div):
        da, db = _diff(e.a, var, memo), _diff(e.b, var, memo)
        if is_zero(db):
            out = div(da, e.b)
        else:
            out = div(sub(mul(da, e.b), mul(e.a, db)), power(e.b, 2))
    elif isinstance(e, Neg):
        out = neg(_diff(e.a, var, memo))
    elif isinstance(e, Pow):
        out = mul(mul(Const(e.k), power(e.a, e.k - 1)), _diff(e.a, var, memo))
    else:
        inner = _diff(e.a, var, memo)
        if is_zero(inner):
            out = Const(0.0)
        elif isinstance(e, Sin):
            out = mul(cos(e.a), inner)
        elif isinstance(e, Cos):
            out = mul(neg(sin(e.a)), inner)
        elif isinstance(e, Exp):
            out = mul(e, inner)
        elif isinstance(e, Tanh):
            out = mul(sub(1.0, power(e, 2)), inner)
        elif isinstance(e, Bump):
            out = mul(Bump(e.a, e.order + 1), inner)
        else:
            raise TypeError(f"cannot differentiate {e!r}")
    memo[e] = out
    return out


def bump_polynomial(order):
    """Numerator P_k with bump^(k)(s) = bump(s) P_k(s) / (1 - s^2)^(2k)."""
    p = np.array([1.0])
    q = np.array([1.0, 0.0, -1.0])
    for k in range(order):
        s = np.array([0.0, 1.0])
        term = P.polymul(P.polyder(p) if len(p) > 1 else np.array([0.0]), P.polymul(q, q))
        term = P.polyadd(term, 4 * k * P.polymul(P.polymul(s, p), q))
        p = P.polysub(term, 2 * P.polymul(s, p))
    return p


def _bump_table(max_order):
    polys = [bump_polynomial(k) for k in range(max_order + 1)]
    width = max(len(p) for p in polys)
    table = np.zeros((max_order + 1, width))
    for k, p in enumerate(polys):
        table[k, : len(p)] = p
    return table


# ---------------------------------------------------------------------------
# compilation and evaluation


@dataclass(frozen=True)
class Program:
    """Flat register program; register k holds the value of node k."""

    opcodes: np.ndarray
    arg0: np.ndarray
    arg1: np.ndarray
    consts: np.ndarray
    outputs: np.ndarray
    bump_table: np.ndarray
    chart: Chart

    def __len__(self):
        return len(self.opcodes)

    def evaluate(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.chart.n:
            raise ValueError(
                f"points have {points.shape[1]} columns, chart has {self.chart.n}"
            )
        try:
            return kernels.eval_program(
                self.opcodes, self.arg0, self.arg1, self.consts,
                self.outputs, points, self.bump_table,
            )
        except ZeroDivisionError as exc:
            idx = exc.args[0]
            raise EvaluationError("division by zero", points[idx]) from None


def compile_exprs(exprs, chart):
    """Compile several expressions into one program with shared subtrees."""
    regs = {}
    ops, a0, a1, consts = [], [], [], []
    max_order = 0

    def emit(op, x=0, y=0, c=0.0):
        ops.append(op)
        a0.append(x)
        a1.append(y)
        consts.append(c)
        return len(ops) - 1

    outputs = []
    for root in exprs:
        root = as_expr(root)
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if node in regs:
                continue
            kids = node.children
            if not expanded and kids:
                stack.append((node, True))
                stack.extend((k, False) for k in kids if k not in regs)
                continue
            if isinstance(node, Const):
                r = emit(OP_CONST, c=node.value)
            elif isinstance(node, Var):
                r = emit(OP_VAR, chart.index(node.name))
            elif isinstance(node, _Binary):
                op = {Add: OP_ADD, Sub: OP_SUB, Mul: OP_MUL, Div: OP_DIV}[type(node)]
                r = emit(op, regs[node.a], regs[node.b])
            elif isinstance(node, Neg):
                r = emit(OP_NEG, regs[node.a])
            elif isinstance(node, Pow):
                r = emit(OP_POW, regs[node.a], node.k)
            elif isinstance(node, Bump):
                max_order = max(max_order, node.order)
                r = emit(OP_BUMP, regs[node.a], node.order)
            else:
                op = {Sin: OP_SIN, Cos: OP_COS, Exp: OP_EXP, Tanh: OP_TANH}[type(node)]
                r = emit(op, regs[node.a])
            regs[node] = r
        outputs.append(regs[root])
    return Program(
        opcodes=np.asarray(ops, dtype=np.intc),
        arg0=np.asarray(a0, dtype=np.intc),
        arg1=np.asarray(a1, dtype=np.intc),
        consts=np.asarray(consts, dtype=float),
        outputs=np.asarray(outputs, dtype=np.intc),
        bump_table=_bump_table(max_order),
        chart=chart,
    )


def _as_point(point, chart):
    if isinstance(point, dict):
        return [float(point[name]) for name in chart.names]
    point = [float(v) for v in point]
    if len(point) != chart.n:
        raise ValueError(f"point has {len(point)} coordinates, chart has {chart.n}")
    return point


def evaluate(e, point, chart=None):
    """Value of ``e`` at one point (sequence in chart order, or name->value dict)."""
    chart = chart or Chart.default(4)
    return float(compile_exprs([e], chart).evaluate([_as_point(point, chart)])[0, 0])


def evaluate_many(exprs, points, chart):
    """Array of shape ``(len(exprs), len(points))``."""
    exprs = list(exprs)
    if not exprs:
        return np.zeros((0, len(points)))
    return compile_exprs(exprs, chart).evaluate(points)


def fd_derivative(e, var, point, h, chart=None):
    """Central difference (e(p + h) - e(p - h)) / 2h along coordinate ``var``."""
    if h <= 0:
        raise ValueError("step must be positive")
    chart = chart or Chart.default(4)
    p = np.array(_as_point(point, chart))
    k = chart.index(var)
    fwd, bwd = p.copy(), p.copy()
    fwd[k] += h
    bwd[k] -= h
    vals = compile_exprs([e], chart).evaluate(np.vstack([fwd, bwd]))[0]
    return float((vals[0] - vals[1]) / (2 * h))


def observed_order(e, var, points, chart, h=1e-3):
    """Convergence order of the central difference against the symbolic derivative.

    Uses the worst point: log2(err(h) / err(h/2)).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    exact = compile_exprs([differentiate(e, var)], chart).evaluate(points)[0]
    prog = compile_exprs([e], chart)
    k = chart.index(var)

    def err(step):
        fwd, bwd = points.copy(), points.copy()
        fwd[:, k] += step
        bwd[:, k] -= step
        approx = (prog.evaluate(fwd)[0] - prog.evaluate(bwd)[0]) / (2 * step)
        return np.abs(approx - exact)

    e1, e2 = err(h), err(h / 2)
    return float(np.log2(e1.max() / e2.max()))


def near_zero(values, scale=1.0, atol=ZERO_ATOL, rtol=ZERO_RTOL):
    """Sampled zero test: all |values| <= atol + rtol * scale."""
    return bool(np.all(np.abs(values) <= atol + rtol * scale))
