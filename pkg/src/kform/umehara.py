"""Truncated bidegree series in one complex variable and coefficient ranks.

A real-analytic function of zeta near 0 expands as sum c_{jk} zeta^j
conj(zeta)^k; the rank of the coefficient matrix is the invariant behind the
algebra of functions spanned by f conj(g) + g conj(f) for holomorphic f, g:
every member has finite rank (at most 2 per generator), so a function whose
truncated ranks keep growing with the order cannot belong.  The built-in
series are the diagonal slice functions of the ball and projective metrics,

    ball_slice(p) = (1 - |zeta|^2)^(-(p+1)),
    proj_slice(p) = (1 + |zeta|^2)^(-(p+1)),

and the composite psi(p, F) = (1 + ||F(zeta, 0, ..., 0)||^2)^(2p) *
ball_slice(p) whose unbounded rank growth is the computational evidence that
certain ball-to-projective map identities are impossible.  Ranks of
truncations are evidence, never proofs: `rank_growth` reports a verdict, not
a theorem.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .errors import (
    DimensionError,
    PreconditionError,
    ScenarioError,
    SingularEvaluationError,
)
from .expressions import BinOp, Const, MapExpr, Neg, Pow, Var, parse_map

__all__ = [
    "BiSeries",
    "bi_series",
    "add",
    "multiply",
    "reciprocal",
    "power",
    "series_eval",
    "ball_slice",
    "proj_slice",
    "psi",
    "abs_square",
    "builtin_series",
    "coeff_rank",
    "rank_growth",
]

DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class BiSeries:
    """Truncated expansion sum_{j,k <= order} coeffs[j, k] zeta^j conj(zeta)^k.

    Represents a real-valued function iff coeffs is Hermitian; all built-ins
    and any arithmetic on Hermitian inputs keep that symmetry.
    """

    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimensionError(f"coefficient matrix must be square, got {c.shape}")
        if c.shape[0] != self.order + 1:
            raise DimensionError(
                f"order {self.order} needs a {self.order + 1}x{self.order + 1} matrix, got {c.shape}"
            )
        object.__setattr__(self, "coeffs", c)

    @property
    def is_real_valued(self) -> bool:
        return float(np.abs(self.coeffs - self.coeffs.conj().T).max()) < 1e-12


def bi_series(coeffs) -> BiSeries:
    c = np.asarray(coeffs, dtype=np.complex128)
    return BiSeries(order=c.shape[0] - 1, coeffs=c)


def _same_order(a: BiSeries, b: BiSeries) -> int:
    if a.order != b.order:
        raise DimensionError(f"orders differ: {a.order} and {b.order}")
    return a.order


def add(a: BiSeries, b: BiSeries) -> BiSeries:
    n = _same_order(a, b)
    return BiSeries(order=n, coeffs=a.coeffs + b.coeffs)


def multiply(a: BiSeries, b: BiSeries) -> BiSeries:
    n = _same_order(a, b)
    full = convolve2d(a.coeffs, b.coeffs)
    return BiSeries(order=n, coeffs=full[: n + 1, : n + 1])


def series_eval(s: BiSeries, zeta: complex) -> complex:
    pows = np.power(complex(zeta), np.arange(s.order + 1))
    return complex(pows @ s.coeffs @ np.conj(pows))


def _one(n: int) -> BiSeries:
    c = np.zeros((n + 1, n + 1), dtype=np.complex128)
    c[0, 0] = 1.0
    return BiSeries(order=n, coeffs=c)


def reciprocal(a: BiSeries) -> BiSeries:
    """Truncated inverse; the constant coefficient must be nonzero."""
    a00 = a.coeffs[0, 0]
    if abs(a00) == 0.0:
        raise SingularEvaluationError("reciprocal needs a nonzero constant coefficient")
    n = a.order
    b = np.zeros((n + 1, n + 1), dtype=np.complex128)
    b[0, 0] = 1.0 / a00
    ca = a.coeffs
    for grade in range(1, 2 * n + 1):
        for j in range(max(0, grade - n), min(grade, n) + 1):
            k = grade - j
            # b[j, k] is still zero, so the full window sum omits it
            window = np.sum(ca[: j + 1, : k + 1][::-1, ::-1] * b[: j + 1, : k + 1])
            b[j, k] = -window / a00
    return BiSeries(order=n, coeffs=b)


def power(a: BiSeries, n: int) -> BiSeries:
    n = operator.index(n)
    if n < 0:
        raise ValueError(f"series power wants a nonnegative integer, got {n!r}")
    out = _one(a.order)
    for _ in range(n):
        out = multiply(out, a)
    return out


# ---------------------------------------------------------------------------
# holomorphic slice Taylor coefficients


def _taylor_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.size
    return np.convolve(a, b)[:n]


def _taylor_reciprocal(a: np.ndarray) -> np.ndarray:
    if abs(a[0]) == 0.0:
        raise SingularEvaluationError("division by a function vanishing on the slice")
    n = a.size
    b = np.zeros(n, dtype=np.complex128)
    b[0] = 1.0 / a[0]
    for k in range(1, n):
        b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1]) / a[0]
    return b


def _slice_taylor(expr, n: int) -> np.ndarray:
    """Taylor coefficients to order n of expr restricted to (zeta, 0, ..., 0)."""
    out = np.zeros(n + 1, dtype=np.complex128)
    if isinstance(expr, Const):
        out[0] = expr.value
        return out
    if isinstance(expr, Var):
        if expr.index == 1:
            if n >= 1:
                out[1] = 1.0
            return out
        return out
    if isinstance(expr, Neg):
        return -_slice_taylor(expr.arg, n)
    if isinstance(expr, Pow):
        base = _slice_taylor(expr.base, n)
        acc = np.zeros(n + 1, dtype=np.complex128)
        acc[0] = 1.0
        for _ in range(expr.exponent):
            acc = _taylor_mul(acc, base)
        return acc
    if isinstance(expr, BinOp):
        left = _slice_taylor(expr.left, n)
        right = _slice_taylor(expr.right, n)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return _taylor_mul(left, right)
        if expr.op == "/":
            return _taylor_mul(left, _taylor_reciprocal(right))
    raise TypeError(f"unsupported expression node {type(expr).__name__}")


# ---------------------------------------------------------------------------
# built-in series


def ball_slice(p: int, n: int) -> BiSeries:
    """(1 - |zeta|^2)^(-(p+1)): diagonal binomial coefficients C(k+p, p)."""
    c = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for k in range(n + 1):
        c[k, k] = math.comb(k + p, p)
    return BiSeries(order=n, coeffs=c)


def proj_slice(p: int, n: int) -> BiSeries:
    """(1 + |zeta|^2)^(-(p+1)): the alternating-sign twin of ball_slice."""
    c = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for k in range(n + 1):
        c[k, k] = (-1) ** k * math.comb(k + p, p)
    return BiSeries(order=n, coeffs=c)


def abs_square(F: MapExpr, n: int) -> BiSeries:
    """||F(zeta, 0, ..., 0)||^2 as a bidegree series to order n."""
    c = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for comp in F.components:
        t = _slice_taylor(comp, n)
        c += np.outer(t, np.conj(t))
    return BiSeries(order=n, coeffs=c)


def psi(p: int, F: MapExpr, n: int) -> BiSeries:
    """(1 + ||F(zeta, 0, ...)||^2)^(2p) * (1 - |zeta|^2)^(-(p+1))."""
    one_plus = add(_one(n), abs_square(F, n))
    return multiply(power(one_plus, 2 * p), ball_slice(p, n))


def _as_map(value) -> MapExpr:
    if isinstance(value, MapExpr):
        return value
    sources = [str(c) for c in value]
    arity = 1
    for src in sources:
        for tok in re.findall(r"z(\d+)", src):
            arity = max(arity, int(tok))
    return parse_map(sources, arity)


def builtin_series(name: str, params: dict, n: int) -> BiSeries:
    """Named series to order n: ball_slice, proj_slice, psi, abs_square.

    params carries "p" for the slice functions and additionally "map" (a
    MapExpr or list of expression strings) for psi and abs_square.
    """
    if name == "ball_slice":
        return ball_slice(int(params["p"]), n)
    if name == "proj_slice":
        return proj_slice(int(params["p"]), n)
    if name == "psi":
        return psi(int(params["p"]), _as_map(params["map"]), n)
    if name == "abs_square":
        return abs_square(_as_map(params["map"]), n)
    raise ScenarioError(f"unknown series name {name!r}")


# ---------------------------------------------------------------------------
# coefficient rank


def coeff_rank(s: BiSeries, tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank of the coefficient matrix by complete-pivot elimination.

    The threshold is tol times the largest coefficient magnitude of the
    input, fixed once up front.
    """
    a = np.array(s.coeffs, dtype=np.complex128)
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return 0
    threshold = tol * scale
    rank = 0
    while True:
        i, j = np.unravel_index(int(np.argmax(np.abs(a))), a.shape)
        pivot = a[i, j]
        if abs(pivot) <= threshold:
            return rank
        rank += 1
        a -= np.outer(a[:, j], a[i, :]) / pivot


def rank_growth(name: str, params: dict, orders) -> tuple[list, str]:
    """Rank of the named series at each truncation order, plus a verdict.

    Returns ([(N, rank), ...], verdict) with verdict "bounded" when the last
    three ranks agree and "growing" otherwise; a growth verdict is evidence
    of infinite rank, not a proof.
    """
    orders = [int(n) for n in orders]
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise PreconditionError(f"orders must be strictly ascending, got {orders}")
    if not orders:
        raise PreconditionError("need at least one truncation order")
    tol = float(params.get("tol", DEFAULT_RANK_TOL)) if params else DEFAULT_RANK_TOL
    table = [(n, coeff_rank(builtin_series(name, params, n), tol)) for n in orders]
    tail = [r for _, r in table][-3:]
    verdict = "bounded" if len(set(tail)) == 1 else "growing"
    return table, verdict
