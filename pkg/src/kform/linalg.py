"""Dense complex linear algebra kernels.

Everything downstream (metric minors, wedge coefficient matrices, pullback
systems, Levi forms) reduces to small dense complex matrices, so the kernels
here are deliberately simple O(n^3) routines whose numerical behavior is easy
to reason about:

* determinants by LU with partial pivoting,
* Hermitian eigendecomposition by cyclic Jacobi rotations,
* generalized eigenvalues via the symmetric reduction g^{-1/2} h g^{-1/2}.

Matrices that are Hermitian by construction are symmetrized on entry to
absorb floating-point roundoff.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, DefinitenessError, DimensionError

__all__ = [
    "as_matrix",
    "hermitize",
    "det",
    "minor_det",
    "hermitian_eigen",
    "sign_counts",
    "signature",
    "generalized_eigenvalues",
]

# Off-diagonal Frobenius threshold (relative to the matrix norm) at which the
# Jacobi sweep stops, and the hard cap on sweeps.
_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100

# Absolute |eigenvalue| below which a spectrum entry counts as zero.
DEFAULT_ZERO_TOL = 1e-9

# Smallest base-form eigenvalue accepted by generalized_eigenvalues.
_MIN_BASE_EIG = 1e-10


def as_matrix(m, square: bool = True) -> np.ndarray:
    """Validate ``m`` as a finite complex matrix and return a complex128 copy-view."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array of ndim {a.ndim}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.size and not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def hermitize(m) -> np.ndarray:
    """Return ``(m + m^H)/2``, the Hermitian part of ``m``.

    Applied wherever a matrix is Hermitian by construction, so roundoff never
    accumulates into a spurious anti-Hermitian part.
    """
    a = as_matrix(m)
    return 0.5 * (a + a.conj().T)


def det(m) -> complex:
    """Determinant of a square complex matrix by LU with partial pivoting.

    Returns exactly ``0j`` when a pivot column vanishes identically.
    The independent cofactor-expansion oracle lives in the test suite.
    """
    a = as_matrix(m).copy()
    n = a.shape[0]
    value = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0:
            return 0.0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            value = -value
        value *= a[k, k]
        if k + 1 < n:
            a[k + 1 :, k] /= a[k, k]
            a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :])
    return complex(value)


def _validated_index(idx, bound: int, label: str) -> np.ndarray:
    """Check a 1-based strictly increasing multi-index; return 0-based array."""
    arr = np.asarray(idx, dtype=int).reshape(-1)
    if arr.size == 0:
        raise IndexError(f"{label} multi-index is empty")
    if arr.min() < 1 or arr.max() > bound:
        raise IndexError(f"{label} indices {tuple(arr)} out of range 1..{bound}")
    if np.any(np.diff(arr) <= 0):
        raise IndexError(f"{label} indices {tuple(arr)} are not strictly increasing")
    return arr - 1


def minor_det(m, rows, cols) -> complex:
    """Determinant of the submatrix selected by 1-based increasing indices.

    ``rows`` and ``cols`` must be strictly increasing multi-indices of equal
    length; this is the (I, J) minor convention used by wedge coefficient
    matrices throughout the package.
    """
    a = as_matrix(m, square=False)
    r = _validated_index(rows, a.shape[0], "row")
    c = _validated_index(cols, a.shape[1], "column")
    if r.size != c.size:
        raise DimensionError(
            f"row and column multi-indices must have equal length, got {r.size} and {c.size}"
        )
    return det(a[np.ix_(r, c)])


def hermitian_eigen(h, max_sweeps: int = _JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like
        Hermitian matrix (symmetrized on entry; a deviation from Hermitian
        symmetry beyond roundoff scale raises ``ValueError``).
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    (w, v) : (ndarray, ndarray)
        Ascending real eigenvalues ``w`` and a unitary ``v`` whose columns are
        the matching eigenvectors, so ``h = v @ diag(w) @ v.conj().T``.
    """
    a = as_matrix(h)
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if n else 0.0
    if n and float(np.max(np.abs(a - a.conj().T))) > 1e-8 * max(1.0, scale):
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    if n <= 1:
        return a.real.diagonal().copy(), v

    norm = float(np.sqrt(np.sum(np.abs(a) ** 2)))
    stop = _JACOBI_TOL * max(norm, np.finfo(float).tiny)
    converged = False
    for _ in range(max_sweeps + 1):
        off = float(np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)))
        if off < stop:
            converged = True
            break
        if _ == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = abs(a[p, q])
                if b <= stop / n:
                    continue
                phase = a[p, q] / b
                tau = (a[q, q].real - a[p, p].real) / (2.0 * b)
                # smaller-magnitude root of t^2 + 2*tau*t - 1 = 0
                t = -np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                u = np.array(
                    [[c, -s], [s * np.conj(phase), c * np.conj(phase)]],
                    dtype=np.complex128,
                )
                a[:, [p, q]] = a[:, [p, q]] @ u
                a[[p, q], :] = u.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ u
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    if not converged:
        raise ConvergenceError(f"Jacobi sweep budget of {max_sweeps} exhausted")

    w = a.real.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def sign_counts(eigenvalues, tol: float = DEFAULT_ZERO_TOL):
    """Count (negative, zero, positive) entries of a real spectrum.

    Entries with ``|w| <= tol`` count as zero.
    """
    w = np.asarray(eigenvalues, dtype=float).reshape(-1)
    n_zero = int(np.sum(np.abs(w) <= tol))
    n_neg = int(np.sum(w < -tol))
    n_pos = int(np.sum(w > tol))
    return n_neg, n_zero, n_pos


def signature(h, tol: float = DEFAULT_ZERO_TOL):
    """Inertia ``(nNeg, nZero, nPos)`` of a Hermitian matrix."""
    w, _ = hermitian_eigen(h)
    return sign_counts(w, tol)


def generalized_eigenvalues(h, g) -> np.ndarray:
    """Ascending solutions of ``det(h - lambda g) = 0`` for Hermitian h, PD g.

    Reduces to an ordinary Hermitian problem through the congruence
    ``g^{-1/2} h g^{-1/2}``.  ``g`` must be positive definite with smallest
    eigenvalue above ``1e-10``; otherwise :class:`DefinitenessError` is raised.
    """
    a = as_matrix(h)
    b = as_matrix(g)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    wg, vg = hermitian_eigen(b)
    if wg.size == 0:
        return np.array([], dtype=float)
    if wg.min() <= _MIN_BASE_EIG:
        raise DefinitenessError(
            f"base form is not positive definite (min eigenvalue {wg.min():.3e})"
        )
    inv_sqrt = vg @ np.diag(1.0 / np.sqrt(wg)) @ vg.conj().T
    reduced = hermitize(inv_sqrt @ a @ inv_sqrt)
    w, _ = hermitian_eigen(reduced)
    return w
