"""Wedge powers of Kähler forms: coefficient matrices, pullbacks, and the
proportionality / relatives decision procedures.

The coefficient of omega^p over a pair of increasing multi-indices (I, J) is
the determinant of the (I, J) minor of the metric.  The common prefactor
(sqrt(-1))^p p! is dropped from all stored coefficients: it is identical on
both sides of every identity tested here, so only the minor determinants
matter.  Coefficient matrices are Hermitian over the lexicographic index
basis, and positive definite for definite space forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateSampleError, DimensionError, DomainError
from .expressions import MapExpr, evaluate_map, jacobian
from .linalg import det, hermitize
from .spaceforms import SpaceForm, chart_point, euclidean, in_chart, metric

__all__ = [
    "IndexBasis",
    "PPFormMatrix",
    "PullbackResult",
    "index_basis",
    "wedge_power_coeffs",
    "compound_matrix",
    "pullback_pp",
    "proportionality_test",
    "relatives_test",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class IndexBasis:
    """All strictly increasing p-tuples from {1..n}, lexicographically sorted."""

    n: int
    p: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, k):
        return self.members[k]


@dataclass(frozen=True)
class PPFormMatrix:
    """Hermitian coefficient matrix of omega^p over an index basis.

    entries[a, b] = det of the (members[a], members[b]) minor of the metric;
    the (sqrt(-1))^p p! prefactor is intentionally dropped (module docstring).
    """

    basis: IndexBasis
    entries: np.ndarray


@dataclass(frozen=True)
class PullbackResult:
    """Outcome of a proportionality comparison over sample points."""

    theta: PPFormMatrix
    lambdaHat: float
    maxResidual: float
    passed: bool


def index_basis(n: int, p: int) -> IndexBasis:
    """The lexicographic basis of increasing p-tuples from {1..n}."""
    if not isinstance(n, int) or not isinstance(p, int):
        raise DimensionError("n and p must be integers")
    if not 1 <= p <= n:
        raise DimensionError(f"degree p must satisfy 1 <= p <= n, got p={p}, n={n}")
    members = tuple(tuple(c) for c in combinations(range(1, n + 1), p))
    return IndexBasis(n=n, p=p, members=members)


def wedge_power_coeffs(g, p: int) -> PPFormMatrix:
    """Coefficient matrix of omega^p for the metric matrix ``g``."""
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionError(f"expected a square metric matrix, got shape {g.shape}")
    basis = index_basis(g.shape[0], p)
    size = len(basis)
    out = np.zeros((size, size), dtype=np.complex128)
    for a, I in enumerate(basis):
        ia = np.asarray(I) - 1
        for b, J in enumerate(basis):
            jb = np.asarray(J) - 1
            out[a, b] = det(g[np.ix_(ia, jb)])
    return PPFormMatrix(basis=basis, entries=hermitize(out))


def compound_matrix(m, p: int) -> np.ndarray:
    """p-th compound: entry (I, J) = det of m's (I, J) minor, lexicographic.

    For m of shape (n, k) the result has shape (C(n,p), C(k,p)); it is the
    action of m on p-vectors, so compounds are multiplicative (Cauchy-Binet).
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim {m.ndim}")
    rows = index_basis(m.shape[0], p)
    cols = index_basis(m.shape[1], p)
    out = np.zeros((len(rows), len(cols)), dtype=np.complex128)
    for a, I in enumerate(rows):
        ia = np.asarray(I) - 1
        for b, J in enumerate(cols):
            jb = np.asarray(J) - 1
            out[a, b] = det(m[np.ix_(ia, jb)])
    return out


def pullback_pp(F: MapExpr, src: SpaceForm, tgt: SpaceForm, p: int, w) -> PPFormMatrix:
    """Pullback coefficients Theta of omega_tgt^p under F at the chart point w.

    Theta[L, K] = sum_{I,J} det(g_tgt minor (I,J) at F(w))
                  * det(JF[I, L]) * conj(det(JF[J, K]))
    over source multi-indices L, K; computed as D^T W conj(D) with D the p-th
    compound of the Jacobian.  Hermitian, and positive semidefinite whenever
    the target form is definite.
    """
    if F.arity != src.dim:
        raise DimensionError(f"map arity {F.arity} != source dim {src.dim}")
    if len(F.components) != tgt.dim:
        raise DimensionError(
            f"map has {len(F.components)} components, target dim is {tgt.dim}"
        )
    z = chart_point(src, w)
    fz = evaluate_map(F, z)
    if not in_chart(tgt, fz):
        raise DomainError("map image lies outside the target chart domain")
    wtgt = wedge_power_coeffs(metric(tgt, fz), p)
    d = compound_matrix(jacobian(F, z), p)
    theta = d.T @ wtgt.entries @ np.conj(d)
    return PPFormMatrix(basis=index_basis(src.dim, p), entries=hermitize(theta))


def _pooled_ratio(pairs) -> float:
    """Least-squares real lambda for sum over pairs |theta - lambda*base|^2."""
    num = 0.0
    den = 0.0
    for base, theta in pairs:
        num += float(np.sum(np.conj(base) * theta).real)
        den += float(np.sum(np.abs(base) ** 2))
    if den == 0.0:
        raise DegenerateSampleError("base form coefficients vanish at every sample point")
    return num / den


def proportionality_test(
    F: MapExpr,
    src: SpaceForm,
    tgt: SpaceForm,
    p: int,
    points,
    tol: float = DEFAULT_TOL,
) -> PullbackResult:
    """Decide whether F*omega_tgt^p = lambda * omega_src^p on the samples.

    lambdaHat is the least-squares ratio pooled across all matrix entries and
    points; the verdict passes iff the worst entry residual is below
    tol * (1 + |lambdaHat|).  A point where the source coefficients all
    vanish raises a degenerate-sample error.
    """
    pts = list(points)
    if not pts:
        raise DegenerateSampleError("need at least one sample point")
    pairs = []
    thetas = []
    for w in pts:
        base = wedge_power_coeffs(metric(src, w), p).entries
        if float(np.abs(base).max()) == 0.0:
            raise DegenerateSampleError(f"omega^p coefficients vanish at sample {w!r}")
        theta = pullback_pp(F, src, tgt, p, w)
        thetas.append(theta)
        pairs.append((base, theta.entries))
    lam = _pooled_ratio(pairs)
    resid = max(float(np.abs(theta - lam * base).max()) for base, theta in pairs)
    return PullbackResult(
        theta=thetas[0],
        lambdaHat=lam,
        maxResidual=resid,
        passed=bool(resid < tol * (1.0 + abs(lam))),
    )


def relatives_test(
    F: MapExpr,
    G: MapExpr,
    tgt1: SpaceForm,
    tgt2: SpaceForm,
    m: int,
    p: int,
    points,
    tol: float = DEFAULT_TOL,
) -> PullbackResult:
    """Decide whether F*omega_tgt1^p = lambda * G*omega_tgt2^p on the samples.

    Both maps pull back from a common m-dimensional source chart (treated as
    a plain coordinate domain; only the two target forms enter).  Returns the
    pooled least-squares lambdaHat with G's pullback as the base.
    """
    if F.arity != m or G.arity != m:
        raise DimensionError(f"both maps must have arity {m}")
    src = euclidean(m)
    pts = list(points)
    if not pts:
        raise DegenerateSampleError("need at least one sample point")
    pairs = []
    thetas = []
    for w in pts:
        theta_f = pullback_pp(F, src, tgt1, p, w)
        theta_g = pullback_pp(G, src, tgt2, p, w)
        if float(np.abs(theta_g.entries).max()) == 0.0:
            raise DegenerateSampleError(f"base pullback vanishes at sample {w!r}")
        thetas.append(theta_f)
        pairs.append((theta_g.entries, theta_f.entries))
    lam = _pooled_ratio(pairs)
    resid = max(float(np.abs(theta - lam * base).max()) for base, theta in pairs)
    return PullbackResult(
        theta=thetas[0],
        lambdaHat=lam,
        maxResidual=resid,
        passed=bool(resid < tol * (1.0 + abs(lam))),
    )
