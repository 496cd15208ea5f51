"""Holomorphic maps as expression trees with forward-mode first-order jets.

Maps are kept as small ASTs rather than closures so scenario files can carry
them as strings.  Evaluation returns exact holomorphic derivatives (value and
gradient) by the usual forward-mode recurrences; only first-order jets are
provided because every formula in scope needs F and its Jacobian only.

Grammar accepted by :func:`parse_expr`::

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' nonnegative-integer)?
    base   := number ['i'] | 'i' | 'z' index | '(' expr ')'

Both the ASCII hyphen and the unicode minus sign are accepted, as are the
unicode multiplication and division signs.  Complex literals are written in
the form ``a+bi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    ExprSyntaxError,
    SingularEvaluationError,
)

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Jet1",
    "MapExpr",
    "parse_expr",
    "parse_map",
    "identity_map",
    "evaluate",
    "eval_jet",
    "evaluate_map",
    "jacobian",
    "compose",
]

# |denominator| below this is treated as a division by zero at the point
_DIV_TOL = 1e-15

_MINUS = {"-", "−"}
_TIMES = {"*", "×"}
_DIVIDE = {"/", "÷"}


class Expr:
    """Base node of a holomorphic expression tree.  Immutable after build."""

    __slots__ = ()

    def _coerce(self, other):
        if isinstance(other, Expr):
            return other
        if isinstance(other, (int, float, complex)):
            return Const(complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("+", self, other)

    def __radd__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("+", other, self)

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("-", self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("-", other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("*", self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("*", other, self)

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("/", self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else BinOp("/", other, self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        return Pow(self, n)

    def __neg__(self):
        return Neg(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", complex(value))

    def __setattr__(self, *_):
        raise AttributeError("expression nodes are immutable")

    def __repr__(self):
        return f"Const({self.value})"


class Var(Expr):
    """Variable reference z_index, 1-based."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 1:
            raise IndexError(f"variable index must be a positive integer, got {index!r}")
        object.__setattr__(self, "index", index)

    def __setattr__(self, *_):
        raise AttributeError("expression nodes are immutable")

    def __repr__(self):
        return f"Var(z{self.index})"


class Neg(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        object.__setattr__(self, "arg", arg)

    def __setattr__(self, *_):
        raise AttributeError("expression nodes are immutable")

    def __repr__(self):
        return f"Neg({self.arg!r})"


class BinOp(Expr):
    __slots__ = ("op", "left", "right")

    def __init__(self, op: str, left: Expr, right: Expr):
        if op not in ("+", "-", "*", "/"):
            raise ValueError(f"unknown operator {op!r}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __setattr__(self, *_):
        raise AttributeError("expression nodes are immutable")

    def __repr__(self):
        return f"BinOp({self.op!r}, {self.left!r}, {self.right!r})"


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, *_):
        raise AttributeError("expression nodes are immutable")

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exponent})"


def max_var_index(expr: Expr) -> int:
    """Largest variable index referenced by ``expr`` (0 if none)."""
    if isinstance(expr, Var):
        return expr.index
    if isinstance(expr, Const):
        return 0
    if isinstance(expr, Neg):
        return max_var_index(expr.arg)
    if isinstance(expr, Pow):
        return max_var_index(expr.base)
    if isinstance(expr, BinOp):
        return max(max_var_index(expr.left), max_var_index(expr.right))
    raise TypeError(f"not an expression node: {expr!r}")


# ---------------------------------------------------------------------------
# parsing


class _Tokenizer:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def _error(self, message: str):
        raise ExprSyntaxError(message, position=self.pos)

    def peek(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.src):
            return ("end", None, self.pos)
        ch = self.src[self.pos]
        start = self.pos
        if ch in "+()^" or ch in _MINUS or ch in _TIMES or ch in _DIVIDE:
            if ch in _MINUS:
                return ("-", "-", start)
            if ch in _TIMES:
                return ("*", "*", start)
            if ch in _DIVIDE:
                return ("/", "/", start)
            return (ch, ch, start)
        if ch.isdigit() or ch == ".":
            j = self.pos
            seen_dot = False
            while j < len(self.src) and (self.src[j].isdigit() or self.src[j] == "."):
                if self.src[j] == ".":
                    if seen_dot:
                        self.pos = j
                        self._error("malformed number")
                    seen_dot = True
                j += 1
            if j < len(self.src) and self.src[j] in "eE":
                k = j + 1
                if k < len(self.src) and (self.src[k] in "+-" or self.src[k] in _MINUS):
                    k += 1
                if k < len(self.src) and self.src[k].isdigit():
                    while k < len(self.src) and self.src[k].isdigit():
                        k += 1
                    j = k
            text = self.src[start:j].replace("−", "-")
            try:
                value = float(text)
            except ValueError:
                self._error(f"malformed number {text!r}")
            if j < len(self.src) and self.src[j] == "i":
                return ("number", complex(0.0, value), start, j + 1 - start)
            return ("number", complex(value), start, j - start)
        if ch == "i":
            return ("number", 1j, start, 1)
        if ch == "z":
            j = self.pos + 1
            if j >= len(self.src) or not self.src[j].isdigit():
                self._error("expected a variable index after 'z'")
            while j < len(self.src) and self.src[j].isdigit():
                j += 1
            return ("var", int(self.src[start + 1 : j]), start, j - start)
        self._error(f"unexpected character {ch!r}")

    def next(self):
        tok = self.peek()
        if tok[0] == "end":
            return tok
        width = tok[3] if len(tok) > 3 else 1
        self.pos += width
        return tok


class _Parser:
    def __init__(self, src: str, arity: int):
        if not isinstance(arity, int) or arity < 1:
            raise DimensionError(f"arity must be a positive integer, got {arity!r}")
        self.toks = _Tokenizer(src)
        self.arity = arity

    def parse(self) -> Expr:
        node = self.expr()
        kind, _, pos, *_ = self.toks.peek()
        if kind != "end":
            raise ExprSyntaxError("unexpected trailing input", position=pos)
        return node

    def expr(self) -> Expr:
        kind, _, _, *_ = self.toks.peek()
        negate = False
        if kind in ("+", "-"):
            self.toks.next()
            negate = kind == "-"
        node = self.term()
        if negate:
            node = Neg(node)
        while True:
            kind, _, _, *_ = self.toks.peek()
            if kind not in ("+", "-"):
                return node
            self.toks.next()
            node = BinOp(kind, node, self.term())

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, _, _, *_ = self.toks.peek()
            if kind not in ("*", "/"):
                return node
            self.toks.next()
            node = BinOp(kind, node, self.factor())

    def factor(self) -> Expr:
        node = self.base()
        kind, _, _, *_ = self.toks.peek()
        if kind == "^":
            self.toks.next()
            kind, value, pos, *_ = self.toks.next()
            if kind != "number" or value.imag != 0 or value.real != int(value.real) or value.real < 0:
                raise ExprSyntaxError("exponent must be a nonnegative integer", position=pos)
            node = Pow(node, int(value.real))
        return node

    def base(self) -> Expr:
        kind, value, pos, *_ = self.toks.next()
        if kind == "number":
            return Const(value)
        if kind == "var":
            if value < 1 or value > self.arity:
                raise IndexError(
                    f"variable z{value} out of range for arity {self.arity} (position {pos})"
                )
            return Var(value)
        if kind == "(":
            node = self.expr()
            kind, _, pos, *_ = self.toks.next()
            if kind != ")":
                raise ExprSyntaxError("expected ')'", position=pos)
            return node
        raise ExprSyntaxError("expected a number, variable, or '('", position=pos)


def parse_expr(src: str, arity: int) -> Expr:
    """Parse one component expression with variables z1..z<arity>."""
    if not isinstance(src, str):
        raise ExprSyntaxError(f"expression source must be a string, got {type(src).__name__}")
    return _Parser(src, arity).parse()


# ---------------------------------------------------------------------------
# maps and evaluation


@dataclass(frozen=True)
class Jet1:
    """First-order jet: value and holomorphic gradient of one component."""

    value: complex
    grad: np.ndarray


class MapExpr:
    """Holomorphic map C^arity -> C^len(components) as expression trees."""

    __slots__ = ("components", "arity", "sources")

    def __init__(self, components, arity: int, sources=None):
        components = tuple(components)
        if not isinstance(arity, int) or arity < 1:
            raise DimensionError(f"arity must be a positive integer, got {arity!r}")
        if not components:
            raise DimensionError("a map needs at least one component")
        for c in components:
            if not isinstance(c, Expr):
                raise TypeError(f"component is not an expression: {c!r}")
            top = max_var_index(c)
            if top > arity:
                raise IndexError(f"component references z{top} but arity is {arity}")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "sources", tuple(sources) if sources is not None else None)

    def __setattr__(self, *_):
        raise AttributeError("MapExpr is immutable")

    @property
    def codim(self) -> int:
        return len(self.components)

    def __call__(self, pt) -> np.ndarray:
        return evaluate_map(self, pt)

    def __repr__(self):
        return f"MapExpr(n={len(self.components)}, m={self.arity})"


def parse_map(sources, arity: int) -> MapExpr:
    """Parse a list of component strings into a MapExpr."""
    comps = [parse_expr(s, arity) for s in sources]
    return MapExpr(comps, arity, sources=sources)


def identity_map(n: int) -> MapExpr:
    return MapExpr([Var(k + 1) for k in range(n)], n)


def _point(pt, arity: int) -> np.ndarray:
    z = np.asarray(pt, dtype=np.complex128).reshape(-1)
    if z.size != arity:
        raise DimensionError(f"point has {z.size} coordinates, expected {arity}")
    if z.size and not np.isfinite(z).all():
        raise ValueError("point coordinates must be finite")
    return z


def _eval(expr: Expr, z: np.ndarray) -> complex:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return z[expr.index - 1]
    if isinstance(expr, Neg):
        return -_eval(expr.arg, z)
    if isinstance(expr, Pow):
        return _eval(expr.base, z) ** expr.exponent
    op = expr.op
    a = _eval(expr.left, z)
    b = _eval(expr.right, z)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if abs(b) < _DIV_TOL:
        raise SingularEvaluationError("division by zero while evaluating expression")
    return a / b


def _eval_jet(expr: Expr, z: np.ndarray):
    m = z.size
    if isinstance(expr, Const):
        return expr.value, np.zeros(m, dtype=np.complex128)
    if isinstance(expr, Var):
        g = np.zeros(m, dtype=np.complex128)
        g[expr.index - 1] = 1.0
        return z[expr.index - 1], g
    if isinstance(expr, Neg):
        v, g = _eval_jet(expr.arg, z)
        return -v, -g
    if isinstance(expr, Pow):
        v, g = _eval_jet(expr.base, z)
        n = expr.exponent
        if n == 0:
            return 1.0 + 0j, np.zeros(m, dtype=np.complex128)
        return v**n, (n * v ** (n - 1)) * g
    va, ga = _eval_jet(expr.left, z)
    vb, gb = _eval_jet(expr.right, z)
    op = expr.op
    if op == "+":
        return va + vb, ga + gb
    if op == "-":
        return va - vb, ga - gb
    if op == "*":
        return va * vb, vb * ga + va * gb
    if abs(vb) < _DIV_TOL:
        raise SingularEvaluationError("division by zero while evaluating expression")
    v = va / vb
    return v, (ga - v * gb) / vb


def evaluate(expr: Expr, pt) -> complex:
    """Value of one expression at a point (no derivatives)."""
    z = np.asarray(pt, dtype=np.complex128).reshape(-1)
    if z.size and not np.isfinite(z).all():
        raise ValueError("point coordinates must be finite")
    top = max_var_index(expr)
    if top > z.size:
        raise DimensionError(f"expression references z{top} but point has {z.size} coordinates")
    return complex(_eval(expr, z))


def eval_jet(expr: Expr, pt) -> Jet1:
    """Value and exact holomorphic gradient of one expression at a point."""
    z = np.asarray(pt, dtype=np.complex128).reshape(-1)
    if z.size and not np.isfinite(z).all():
        raise ValueError("point coordinates must be finite")
    top = max_var_index(expr)
    if top > z.size:
        raise DimensionError(f"expression references z{top} but point has {z.size} coordinates")
    v, g = _eval_jet(expr, z)
    return Jet1(complex(v), g)


def evaluate_map(f: MapExpr, pt) -> np.ndarray:
    """Values of all components of ``f`` at ``pt``."""
    z = _point(pt, f.arity)
    return np.array([_eval(c, z) for c in f.components], dtype=np.complex128)


def jacobian(f: MapExpr, pt) -> np.ndarray:
    """Jacobian matrix of ``f`` at ``pt``; row i is the gradient of component i."""
    z = _point(pt, f.arity)
    rows = []
    for c in f.components:
        _, g = _eval_jet(c, z)
        rows.append(g)
    return np.array(rows, dtype=np.complex128)


def _substitute(expr: Expr, repl) -> Expr:
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Var):
        return repl[expr.index - 1]
    if isinstance(expr, Neg):
        return Neg(_substitute(expr.arg, repl))
    if isinstance(expr, Pow):
        return Pow(_substitute(expr.base, repl), expr.exponent)
    return BinOp(expr.op, _substitute(expr.left, repl), _substitute(expr.right, repl))


def compose(outer: MapExpr, inner: MapExpr) -> MapExpr:
    """Expression-level composition ``outer ∘ inner``."""
    if outer.arity != len(inner.components):
        raise DimensionError(
            f"cannot compose: outer arity {outer.arity} != inner component count "
            f"{len(inner.components)}"
        )
    comps = [_substitute(c, inner.components) for c in outer.components]
    return MapExpr(comps, inner.arity)
