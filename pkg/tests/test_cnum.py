import numpy as np
import pytest

from latticeforce import cnum
from latticeforce.errors import (
    ConvergenceError,
    DimensionError,
    NotPositiveDefiniteError,
    RankDeficientError,
    SingularMatrixError,
)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# ---------------------------------------------------------------------------
# hermitian_inner
# ---------------------------------------------------------------------------

def test_inner_unit_vector_with_itself():
    assert cnum.hermitian_inner([1, 0], [1, 0]) == 1


def test_inner_conjugates_second_argument():
    assert cnum.hermitian_inner([1j, 0], [1, 0]) == 1j


def test_inner_hand_value():
    # scalar-loop oracle for sum(a[k] * conj(b[k]))
    a = [1 + 1j, 2]
    b = [1j, 1 - 1j]
    oracle = sum(complex(x) * complex(y).conjugate() for x, y in zip(a, b))
    got = cnum.hermitian_inner(a, b)
    assert got == oracle
    assert got == pytest.approx(3 + 1j)


def test_inner_length_mismatch():
    with pytest.raises(DimensionError):
        cnum.hermitian_inner([1, 0], [1, 0, 0])


def test_inner_sesquilinear_properties():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 5))
        a, b, c = crandn(rng, n), crandn(rng, n), crandn(rng, n)
        lam = complex(crandn(rng, 1)[0])
        lhs = cnum.hermitian_inner(a + lam * c, b)
        rhs = cnum.hermitian_inner(a, b) + lam * cnum.hermitian_inner(c, b)
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))
        assert abs(
            cnum.hermitian_inner(a, b) - cnum.hermitian_inner(b, a).conjugate()
        ) <= 1e-12 * (1 + abs(lhs))


# ---------------------------------------------------------------------------
# gram_schmidt
# ---------------------------------------------------------------------------

def test_gram_schmidt_identity_passthrough():
    ortho, mu = cnum.gram_schmidt(np.eye(2))
    assert np.allclose(ortho, np.eye(2))
    assert mu[1, 0] == 0


def test_gram_schmidt_hand_case():
    ortho, mu = cnum.gram_schmidt([[1, 0], [1 + 1j, 1]])
    assert np.allclose(ortho, [[1, 0], [0, 1]])
    assert mu[1, 0] == pytest.approx(1 + 1j)


def test_gram_schmidt_reconstruction_and_orthogonality():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        basis = crandn(rng, n, n)
        ortho, mu = cnum.gram_schmidt(basis)
        assert np.linalg.norm(mu @ ortho - basis) <= 1e-9 * (1 + np.linalg.norm(basis))
        gram = ortho @ ortho.conj().T
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) <= 1e-9 * (1 + np.max(np.abs(gram)))


def test_gram_schmidt_dependent_rows():
    with pytest.raises(RankDeficientError):
        cnum.gram_schmidt([[1, 1j], [2, 2j]])


# ---------------------------------------------------------------------------
# cholesky
# ---------------------------------------------------------------------------

def test_cholesky_identity():
    assert np.allclose(cnum.cholesky(np.eye(2)), np.eye(2))


def test_cholesky_hand_case():
    m = np.array([[2, 1j], [-1j, 2]])
    expect = np.array([[np.sqrt(2), 0], [-1j / np.sqrt(2), np.sqrt(1.5)]])
    l = cnum.cholesky(m)
    assert np.allclose(l, expect)
    assert np.allclose(l @ l.conj().T, m)


def test_cholesky_random_round_trip():
    rng = np.random.default_rng(13)
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        a = crandn(rng, n, n)
        m = a @ a.conj().T + np.eye(n)
        l = cnum.cholesky(m)
        assert np.all(np.diag(l).real > 0)
        assert np.all(np.abs(np.triu(l, 1)) == 0)
        assert np.linalg.norm(l @ l.conj().T - m) <= 1e-9 * (1 + np.linalg.norm(m))


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        cnum.cholesky(np.diag([1.0, -1.0]))


def test_cholesky_rejects_non_hermitian():
    with pytest.raises(ValueError):
        cnum.cholesky(np.array([[1.0, 2.0], [0.0, 1.0]]))


# ---------------------------------------------------------------------------
# eigh / svd
# ---------------------------------------------------------------------------

def test_eigh_hand_case():
    m = np.array([[2, 1j], [-1j, 2]])
    w, v = cnum.eigh(m)
    assert np.allclose(w, [1.0, 3.0])
    assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - m) <= 1e-12
    assert np.linalg.norm(v.conj().T @ v - np.eye(2)) <= 1e-12


def test_svd_diagonal_matrix():
    res = cnum.svd(np.diag([2.0, 1.0]))
    assert np.allclose(res.sigma, [1.0, 2.0])
    # ascending order puts the small singular direction first: v is the swap
    assert np.allclose(res.v, [[0, 1], [1, 0]])
    assert np.allclose(res.u @ np.diag(res.sigma) @ res.v.conj().T, np.diag([2.0, 1.0]))


def test_svd_permutation_matrix():
    res = cnum.svd(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(res.sigma, [1.0, 1.0])


def test_svd_random_reconstruction():
    rng = np.random.default_rng(14)
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        h = crandn(rng, n, n)
        res = cnum.svd(h)
        scale = 1 + np.linalg.norm(h)
        assert np.all(np.diff(res.sigma) >= 0)
        assert np.all(res.sigma >= 0)
        assert np.linalg.norm(res.u @ np.diag(res.sigma) @ res.v.conj().T - h) <= 1e-9 * scale
        assert np.linalg.norm(res.u.conj().T @ res.u - np.eye(n)) <= 1e-9
        assert np.linalg.norm(res.v.conj().T @ res.v - np.eye(n)) <= 1e-9


def test_svd_phase_fix_is_deterministic():
    rng = np.random.default_rng(15)
    h = crandn(rng, 3, 3)
    res1 = cnum.svd(h)
    res2 = cnum.svd(h.copy())
    assert np.array_equal(res1.v, res2.v)
    for k in range(3):
        piv = res1.v[int(np.argmax(np.abs(res1.v[:, k]))), k]
        assert piv.real > 0 and abs(piv.imag) <= 1e-12


def test_svd_sigma_product_matches_determinant():
    rng = np.random.default_rng(16)
    for _ in range(300):
        h = crandn(rng, 2, 2)
        res = cnum.svd(h)
        det = abs(np.linalg.det(h))
        assert np.prod(res.sigma) == pytest.approx(det, rel=1e-8)


def test_svd_rank_deficient_still_reconstructs():
    h = np.array([[1.0, 1.0], [1.0, 1.0]])
    res = cnum.svd(h)
    assert res.sigma[0] == pytest.approx(0.0, abs=1e-9)
    assert np.linalg.norm(res.u @ np.diag(res.sigma) @ res.v.conj().T - h) <= 1e-9
    assert np.linalg.norm(res.u.conj().T @ res.u - np.eye(2)) <= 1e-9


def test_eigh_sweep_budget():
    rng = np.random.default_rng(17)
    a = crandn(rng, 3, 3)
    m = a @ a.conj().T
    with pytest.raises(ConvergenceError):
        cnum.eigh(m, cnum.NumericTolerances(jacobi_sweeps=0))


# ---------------------------------------------------------------------------
# inverse_det
# ---------------------------------------------------------------------------

def test_inverse_det_identity():
    inv, det = cnum.inverse_det(np.eye(3))
    assert np.allclose(inv, np.eye(3))
    assert det == pytest.approx(1.0)


def test_inverse_det_diagonal():
    inv, det = cnum.inverse_det(np.diag([2.0, 4.0]))
    assert np.allclose(inv, np.diag([0.5, 0.25]))
    assert det == pytest.approx(8.0)


def test_inverse_det_hand_case():
    inv, det = cnum.inverse_det([[1, 0], [1 + 1j, 1]])
    assert np.allclose(inv, [[1, 0], [-1 - 1j, 1]])
    assert det == pytest.approx(1.0)


def test_inverse_det_random_round_trip():
    rng = np.random.default_rng(18)
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        m = crandn(rng, n, n) + 2 * np.eye(n)
        inv, det = cnum.inverse_det(m)
        assert np.linalg.norm(m @ inv - np.eye(n)) <= 1e-9 * np.linalg.cond(m)
        assert det == pytest.approx(complex(np.linalg.det(m)), rel=1e-9)


def test_inverse_det_singular():
    with pytest.raises(SingularMatrixError):
        cnum.inverse_det([[1, 1], [1, 1]])
