"""Complex space forms in a single affine chart.

Three families, each with an optional indefinite signature parameter s
(``sig``), normalized to holomorphic sectional curvature 0, -2, +2:

* ``euclidean(n, s)``: C^n_s with the flat metric diag(+1 x s, -1 x (n-s)),
* ``ball(n, s)``: B^n_s = {1 - |w|_s^2 > 0} with the Bergman-type metric,
* ``projective(n, s)``: P^n_s in the affine chart {1 + |w|_s^2 > 0}.

Here |w|_s^2 = sum_{j<=s} |w_j|^2 - sum_{j>s} |w_j|^2, so sig = dim recovers
the definite spaces C^n, B^n, P^n.  All metric-like matrices use the
convention that the FIRST index is holomorphic: g[j, k] = g_{j kbar}.

Besides metric/Ricci/curvature tensors, the module provides the curvature
pairing on wedge powers of the tangent bundle (in the sign convention pinned
by the Hessian-of-log-norm oracle, see ``wedge_curvature``), chart-centering
automorphisms as expression trees, and seeded chart-point sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .expressions import BinOp, Const, MapExpr, Var
from .linalg import det, hermitize

__all__ = [
    "SpaceForm",
    "euclidean",
    "ball",
    "projective",
    "snorm2",
    "in_chart",
    "chart_point",
    "metric",
    "metric_dz",
    "ricci",
    "curvature4",
    "curvature",
    "wedge_curvature_block",
    "wedge_curvature",
    "Automorphism",
    "center_automorphism",
    "default_radius",
    "sample_chart_points",
]

_KINDS = ("euclidean", "ball", "projective")

# chart sampling radii keeping conditioning mild near chart boundaries
_RADIUS = {"euclidean": 2.0, "ball": 0.9, "projective": 2.0}
_RADIUS_INDEFINITE_PROJECTIVE = 0.9


@dataclass(frozen=True)
class SpaceForm:
    """Descriptor of one space form: kind, complex dimension, signature s."""

    kind: str
    dim: int
    sig: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown space form kind {self.kind!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise DimensionError(f"dim must be a positive integer, got {self.dim!r}")
        if not isinstance(self.sig, int) or not 0 <= self.sig <= self.dim:
            raise DimensionError(
                f"sig must satisfy 0 <= sig <= dim, got sig={self.sig!r} dim={self.dim}"
            )

    @property
    def is_definite(self) -> bool:
        return self.sig == self.dim

    @property
    def eps(self) -> np.ndarray:
        """Signs (+1 for the first sig coordinates, -1 after)."""
        e = np.ones(self.dim)
        e[self.sig :] = -1.0
        return e

    @property
    def hsc(self) -> float:
        """Holomorphic sectional curvature constant c."""
        return {"euclidean": 0.0, "ball": -2.0, "projective": 2.0}[self.kind]

    @property
    def ricci_factor(self) -> float:
        """Constant c-tilde with ricci = c-tilde * metric."""
        if self.kind == "euclidean":
            return 0.0
        scale = float(self.dim + 1)
        return -scale if self.kind == "ball" else scale


def euclidean(dim: int, sig: int | None = None) -> SpaceForm:
    return SpaceForm("euclidean", dim, dim if sig is None else sig)


def ball(dim: int, sig: int | None = None) -> SpaceForm:
    return SpaceForm("ball", dim, dim if sig is None else sig)


def projective(dim: int, sig: int | None = None) -> SpaceForm:
    return SpaceForm("projective", dim, dim if sig is None else sig)


def snorm2(sf: SpaceForm, w) -> float:
    """Signed squared norm sum_{j<=s} |w_j|^2 - sum_{j>s} |w_j|^2."""
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if w.size != sf.dim:
        raise DimensionError(f"point has {w.size} coordinates, expected {sf.dim}")
    return float(np.sum(sf.eps * np.abs(w) ** 2))


def in_chart(sf: SpaceForm, w) -> bool:
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if w.size != sf.dim or not np.isfinite(w).all():
        return False
    if sf.kind == "euclidean":
        return True
    if sf.kind == "ball":
        return 1.0 - snorm2(sf, w) > 0.0
    return 1.0 + snorm2(sf, w) > 0.0


def chart_point(sf: SpaceForm, w) -> np.ndarray:
    """Validate chart membership and return the coordinates as complex128."""
    z = np.asarray(w, dtype=np.complex128).reshape(-1)
    if z.size != sf.dim:
        raise DimensionError(f"point has {z.size} coordinates, expected {sf.dim}")
    if not np.isfinite(z).all():
        raise DomainError("chart point coordinates must be finite")
    if not in_chart(sf, z):
        raise DomainError(f"point outside the {sf.kind} chart domain")
    return z


def metric(sf: SpaceForm, w) -> np.ndarray:
    """Metric matrix g[j, k] = g_{j kbar} at a chart point.

    Euclidean: diag(eps).  Ball: ((1-|w|_s^2) diag(eps) + (eps wbar)(eps w)^T)
    / (1-|w|_s^2)^2, and Projective the same with both interior signs flipped.
    Hermitian everywhere; positive definite on definite space forms.
    """
    z = chart_point(sf, w)
    e = sf.eps
    if sf.kind == "euclidean":
        return np.diag(e).astype(np.complex128)
    if sf.kind == "ball":
        u = 1.0 - snorm2(sf, z)
        g = (u * np.diag(e) + np.outer(e * np.conj(z), e * z)) / u**2
    else:
        u = 1.0 + snorm2(sf, z)
        g = (u * np.diag(e) - np.outer(e * np.conj(z), e * z)) / u**2
    return hermitize(g)


def metric_dz(sf: SpaceForm, w) -> np.ndarray:
    """Holomorphic first derivatives of the metric: out[l, j, k] = d g_{j kbar} / dz_l."""
    z = chart_point(sf, w)
    n = sf.dim
    e = sf.eps
    out = np.zeros((n, n, n), dtype=np.complex128)
    if sf.kind == "euclidean":
        return out
    sign = -1.0 if sf.kind == "ball" else 1.0
    # u = 1 + sign*|w|_s^2, d_l u = sign * eps_l * wbar_l
    u = 1.0 + sign * snorm2(sf, z)
    du = sign * e * np.conj(z)
    g = metric(sf, z)
    diag_e = np.diag(e).astype(np.complex128)
    for l in range(n):
        # quotient rule applied to (u*diag(e) - sign*outer(e wbar, e w)) / u^2
        num_dl = du[l] * diag_e - sign * np.outer(e * np.conj(z), e * _unit(n, l))
        out[l] = num_dl / u**2 - 2.0 * du[l] * g / u
    return out


def _unit(n: int, a: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.complex128)
    v[a] = 1.0
    return v


def ricci(sf: SpaceForm, w) -> np.ndarray:
    """Ricci tensor R[j, k] = -d_j dbar_k log det g = ricci_factor * metric."""
    if sf.kind == "euclidean":
        chart_point(sf, w)
        return np.zeros((sf.dim, sf.dim), dtype=np.complex128)
    return sf.ricci_factor * metric(sf, w)


def curvature4(sf: SpaceForm, w, a, b, c, d) -> complex:
    """Curvature pairing R(a, bbar, c, dbar) of the constant-HSC closed form.

    R_{i jbar k lbar} = (hsc/2)(g_{i jbar} g_{k lbar} + g_{i lbar} g_{k jbar}),
    contracted with the four given tangent vectors (slots 2 and 4 conjugated).
    """
    g = metric(sf, w)
    a, b, c, d = (np.asarray(v, dtype=np.complex128).reshape(-1) for v in (a, b, c, d))
    for v in (a, b, c, d):
        if v.size != sf.dim:
            raise DimensionError(f"tangent vector has {v.size} entries, expected {sf.dim}")

    def pair(x, y):
        return x @ g @ np.conj(y)

    return complex(0.5 * sf.hsc * (pair(a, b) * pair(c, d) + pair(a, d) * pair(c, b)))


def curvature(sf: SpaceForm, w, eta, u) -> complex:
    """Curvature R(eta, etabar, u, ubar); real-valued up to roundoff."""
    return curvature4(sf, w, eta, eta, u, u)


def _as_multiindex(idx, n: int) -> np.ndarray:
    arr = np.asarray(idx, dtype=int).reshape(-1)
    if arr.size == 0:
        raise IndexError("multi-index is empty")
    if arr.min() < 1 or arr.max() > n:
        raise IndexError(f"multi-index {tuple(arr)} out of range 1..{n}")
    if np.any(np.diff(arr) <= 0):
        raise IndexError(f"multi-index {tuple(arr)} is not strictly increasing")
    return arr - 1


def _cofactor_matrix(m: np.ndarray) -> np.ndarray:
    p = m.shape[0]
    cof = np.zeros((p, p), dtype=np.complex128)
    for s in range(p):
        rows = [r for r in range(p) if r != s]
        for t in range(p):
            cols = [c for c in range(p) if c != t]
            cof[s, t] = (-1) ** (s + t) * det(m[np.ix_(rows, cols)])
    return cof


def wedge_curvature_block(sf: SpaceForm, w, I, J) -> np.ndarray:
    """Matrix B[l, k] of wedge-power curvature pairings over z-directions.

    B[l, k] is the pairing of the induced curvature on the p-th wedge power
    of the tangent bundle against the frame sections s_I, s_J, with the
    direction slots left open:

        B[l, k] = -sum_{s,t} cof_{st}(G_IJ) R(e_l, e_kbar, e_{i_s}, e_{j_t}bar)

    where G_IJ = g[I, J] is the (I, J) minor block.  The cofactor weights are
    the derivation rule for determinants (row replacement), so at the chart
    center B[l, k] equals the mixed second derivative d_l dbar_k of the minor
    det(g[I, J]).  The leading minus is the sign convention used throughout:
    values agree with Hessians of log |s_I|^2, so Griffiths-positive bundles
    (projective spaces) produce negative blocks.  Contracting eta into both
    open slots gives `wedge_curvature`.
    """
    z = chart_point(sf, w)
    g = metric(sf, z)
    i0 = _as_multiindex(I, sf.dim)
    j0 = _as_multiindex(J, sf.dim)
    if i0.size != j0.size:
        raise IndexError(f"multi-indices have different lengths {i0.size} and {j0.size}")
    sub = g[np.ix_(i0, j0)]
    cof = _cofactor_matrix(sub)
    half_c = 0.5 * sf.hsc
    # sum_{s,t} cof[s,t] * (g[l,k] g[i_s,j_t] + g[l,j_t] g[i_s,k])
    weight = np.sum(cof * sub)
    block = weight * g + g[:, j0] @ cof.T @ g[i0, :]
    return -half_c * block


def wedge_curvature(sf: SpaceForm, w, eta, I, J) -> complex:
    """Wedge-power curvature pairing along eta against frame sections s_I, s_J.

    Equal to eta . wedge_curvature_block . conj(eta).  On the diagonal I = J
    at the chart center this is the mixed second derivative of log |s_I|^2
    along eta, e.g. -3 for P^2 with I = (1,2), eta = e_1, and +2 for B^2 with
    I = (1,), eta = e_1.
    """
    eta = np.asarray(eta, dtype=np.complex128).reshape(-1)
    if eta.size != sf.dim:
        raise DimensionError(f"tangent vector has {eta.size} entries, expected {sf.dim}")
    block = wedge_curvature_block(sf, w, I, J)
    return complex(eta @ block @ np.conj(eta))


# ---------------------------------------------------------------------------
# chart-centering automorphisms


@dataclass(frozen=True)
class Automorphism:
    """Isometric chart automorphism phi with phi(anchor) = 0.

    forward/inverse are expression-tree maps (usable in compositions);
    dphi is the Jacobian of the forward map at the anchor point.
    """

    forward: MapExpr
    inverse: MapExpr
    dphi: np.ndarray


def _affine_fraction_map(t: np.ndarray) -> MapExpr:
    """MapExpr of z -> (t[1:,0] + t[1:,1:] z) / (t[0,0] + t[0,1:] z)."""
    n = t.shape[0] - 1

    def linear(c0: complex, row: np.ndarray):
        node = Const(c0)
        for k in range(n):
            node = BinOp("+", node, BinOp("*", Const(row[k]), Var(k + 1)))
        return node

    den = linear(t[0, 0], t[0, 1:])
    comps = [BinOp("/", linear(t[j + 1, 0], t[j + 1, 1:]), den) for j in range(n)]
    return MapExpr(comps, n)


def _translation_map(shift: np.ndarray) -> MapExpr:
    n = shift.size
    comps = [BinOp("+", Var(k + 1), Const(shift[k])) for k in range(n)]
    return MapExpr(comps, n)


def center_automorphism(sf: SpaceForm, w) -> Automorphism:
    """Isometry of the space form moving the chart point ``w`` to the origin.

    Euclidean (any signature): the translation z -> z - w.  Definite Ball and
    Projective: the projective action of a matrix in the isometry group of
    the homogeneous form (U(1,n) resp. U(n+1)), built by completing the
    lifted point to a form-orthonormal basis.  Indefinite curved space forms
    are outside the homogeneous chart machinery and raise a domain error.
    """
    z0 = chart_point(sf, w)
    n = sf.dim
    if sf.kind == "euclidean":
        return Automorphism(
            forward=_translation_map(-z0),
            inverse=_translation_map(z0),
            dphi=np.eye(n, dtype=np.complex128),
        )
    if not sf.is_definite:
        raise DomainError(
            "center automorphism is only available for definite ball/projective forms"
        )

    jsign = -1.0 if sf.kind == "ball" else 1.0
    jdiag = np.concatenate(([1.0], jsign * np.ones(n)))

    def jinner(x, y):
        # <x, y>_J = y^H J x
        return np.conj(y) @ (jdiag * x)

    v0 = np.concatenate(([1.0 + 0j], z0))
    q = jinner(v0, v0).real
    if q <= 0:
        raise DomainError("lifted point has non-positive form norm; outside chart reach")
    basis = [v0 / np.sqrt(q)]
    signs = [1.0]
    for i in range(1, n + 1):
        b = np.zeros(n + 1, dtype=np.complex128)
        b[i] = 1.0
        for u, su in zip(basis, signs):
            b = b - su * jinner(b, u) * u
        nb = jinner(b, b).real
        if abs(nb) < 1e-12:
            raise DomainError("degenerate basis completion in automorphism construction")
        basis.append(b / np.sqrt(abs(nb)))
        signs.append(1.0 if nb > 0 else -1.0)
    s = np.column_stack(basis)
    # s^H J s = J, so the inverse is J s^H J
    t = (jdiag[:, None] * s.conj().T) * jdiag[None, :]
    dphi = t[1:, 1:] / np.sqrt(q)
    return Automorphism(
        forward=_affine_fraction_map(t),
        inverse=_affine_fraction_map(s),
        dphi=dphi,
    )


# ---------------------------------------------------------------------------
# sampling


def default_radius(sf: SpaceForm) -> float:
    if sf.kind == "projective" and not sf.is_definite:
        return _RADIUS_INDEFINITE_PROJECTIVE
    return _RADIUS[sf.kind]


def sample_chart_points(sf: SpaceForm, count: int, seed: int, radius: float | None = None) -> np.ndarray:
    """``count`` seeded points, uniform in the real 2n-ball of the chart radius.

    Algorithm (documented for reproducibility): with rng = default_rng(seed),
    each point draws a standard normal direction in R^{2n}, normalizes it,
    and scales by radius * U^(1/(2n)) with U uniform; the first n entries are
    real parts, the last n imaginary parts.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    r = default_radius(sf) if radius is None else float(radius)
    n = sf.dim
    rng = np.random.default_rng(seed)
    pts = np.zeros((count, n), dtype=np.complex128)
    for k in range(count):
        v = rng.standard_normal(2 * n)
        v /= np.linalg.norm(v)
        rho = r * rng.uniform() ** (1.0 / (2 * n))
        w = rho * (v[:n] + 1j * v[n:])
        pts[k] = chart_point(sf, w)
    return pts
