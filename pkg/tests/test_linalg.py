import numpy as np
import pytest

from kform.errors import ConvergenceError, DefinitenessError, DimensionError
from kform.linalg import (
    det,
    generalized_eigenvalues,
    hermitian_eigen,
    hermitize,
    minor_det,
    sign_counts,
    signature,
)

from oracles import cofactor_det, random_hermitian, random_posdef, random_unitary


def test_det_pinned_values():
    assert det(np.diag([2.0, 3.0])) == pytest.approx(6.0)
    m = np.array([[2.0, 1j], [-1j, 2.0]])
    assert det(m) == pytest.approx(3.0)
    assert det(np.zeros((3, 3))) == 0.0
    assert det(np.ones((2, 2))) == pytest.approx(0.0, abs=1e-15)


def test_det_matches_cofactor_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        expect = cofactor_det(a)
        got = det(a)
        assert abs(got - expect) <= 1e-10 * max(1.0, abs(expect)), (
            f"LU det {got} vs cofactor {expect}"
        )


def test_det_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        lhs = det(a @ b)
        rhs = det(a) * det(b)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_minor_det_examples():
    m = np.diag([1.0, 2.0, 3.0])
    assert minor_det(m, (2, 3), (2, 3)) == pytest.approx(6.0)
    assert minor_det(m, (1, 2), (2, 3)) == pytest.approx(0.0)
    assert minor_det(m, (2,), (2,)) == pytest.approx(2.0)


def test_minor_det_validates_indices():
    m = np.eye(3)
    with pytest.raises(IndexError):
        minor_det(m, (0, 1), (1, 2))
    with pytest.raises(IndexError):
        minor_det(m, (1, 4), (1, 2))
    with pytest.raises(IndexError):
        minor_det(m, (2, 1), (1, 2))
    with pytest.raises(IndexError):
        minor_det(m, (1, 1), (1, 2))
    with pytest.raises(DimensionError):
        minor_det(m, (1, 2), (1,))


def test_hermitize_projects_to_hermitian_part():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = hermitize(a)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-15)
    np.testing.assert_allclose(h, 0.5 * (a + a.conj().T), atol=1e-15)


def test_hermitian_eigen_pinned_example():
    m = np.array([[2.0, 1j], [-1j, 2.0]])
    w, v = hermitian_eigen(m)
    np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-12)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-12)


def test_hermitian_eigen_reconstruction_and_orthonormality():
    rng = np.random.default_rng(19)
    for _ in range(60):
        n = int(rng.integers(1, 8))
        h = random_hermitian(rng, n)
        w, v = hermitian_eigen(h)
        assert np.all(np.diff(w) >= -1e-14)
        np.testing.assert_allclose(
            v.conj().T @ v, np.eye(n), atol=1e-11,
            err_msg="eigenvector matrix is not unitary",
        )
        np.testing.assert_allclose(
            v @ np.diag(w) @ v.conj().T, h, atol=1e-10 * max(1.0, np.abs(h).max()),
        )


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eigen_sweep_budget():
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 6)
    with pytest.raises(ConvergenceError):
        hermitian_eigen(h, max_sweeps=0)


def test_signature_examples_and_congruence_invariance():
    assert signature(np.diag([-1.0, 0.0, 2.0])) == (1, 1, 1)
    assert sign_counts([-1e-12, 1e-12, 0.5]) == (0, 2, 1)
    rng = np.random.default_rng(23)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        d = rng.choice([-1.0, 1.0, 2.5, -0.5], size=n)
        h = np.diag(d).astype(np.complex128)
        expect = sign_counts(d)
        # congruence by a random invertible matrix preserves inertia
        u = random_unitary(rng, n) @ np.diag(rng.uniform(0.5, 2.0, size=n))
        assert signature(u @ h @ u.conj().T) == expect


def test_generalized_eigenvalues_pinned_example():
    h = np.diag([2.0, 8.0])
    g = np.diag([1.0, 2.0])
    np.testing.assert_allclose(generalized_eigenvalues(h, g), [2.0, 4.0], atol=1e-12)


def test_generalized_eigenvalues_satisfy_pencil_equation():
    rng = np.random.default_rng(31)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        h = random_hermitian(rng, n)
        g = random_posdef(rng, n)
        lams = generalized_eigenvalues(h, g)
        for lam in lams:
            d = det(h - lam * g)
            assert abs(d) <= 1e-7 * max(1.0, abs(det(g))) * max(1.0, np.abs(h).max()) ** n


def test_generalized_eigenvalues_requires_positive_base():
    h = np.eye(2)
    with pytest.raises(DefinitenessError):
        generalized_eigenvalues(h, np.diag([1.0, -1.0]))
    with pytest.raises(DefinitenessError):
        generalized_eigenvalues(h, np.diag([1.0, 0.0]))
    with pytest.raises(DimensionError):
        generalized_eigenvalues(np.eye(2), np.eye(3))
