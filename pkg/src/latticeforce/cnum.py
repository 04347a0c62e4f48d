"""Dense complex linear algebra for small matrices.

Vectors are rows throughout: a basis is a matrix whose rows are the basis
vectors, and the Hermitian product of ``a`` and ``b`` is
``sum(a[k] * conj(b[k]))`` (conjugation acts on the second argument).

All tolerances are relative to the input scale and collected in a single
:class:`NumericTolerances` value; pass a customized instance to tighten or
loosen individual routines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    NotPositiveDefiniteError,
    RankDeficientError,
    SingularMatrixError,
)

__all__ = [
    "TOL",
    "NumericTolerances",
    "SvdResult",
    "hermitian_inner",
    "gram_schmidt",
    "cholesky",
    "eigh",
    "svd",
    "inverse_det",
    "frobenius",
]


@dataclass(frozen=True)
class NumericTolerances:
    """Shared numeric thresholds, all relative to input scale."""

    rel_residual: float = 1e-9   # round-trip residuals, Hermitian symmetry checks
    rank_rel: float = 1e-12      # dependence / rank thresholds
    singular_rel: float = 1e-12  # |det| threshold relative to the Hadamard bound
    jacobi_sweeps: int = 64      # sweep budget of the eigensolver
    jacobi_off_rel: float = 1e-12  # off-diagonal mass at which Jacobi stops


TOL = NumericTolerances()


@dataclass(frozen=True)
class SvdResult:
    """Singular value decomposition ``h == u @ diag(sigma) @ v.conj().T``.

    ``sigma`` is sorted ascending, so ``sigma[-1]`` is the largest singular
    value.  The columns of ``v`` are the eigenvectors of ``h^h h``, each with
    its phase fixed so the largest-modulus entry is real positive; ``u`` and
    ``v`` are unitary.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def _as_vector(a) -> np.ndarray:
    v = np.asarray(a, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a nonempty vector, got shape {v.shape}")
    return v


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def _require_hermitian(a: np.ndarray, tol: NumericTolerances) -> np.ndarray:
    if np.linalg.norm(a - a.conj().T) > tol.rel_residual * (1.0 + np.linalg.norm(a)):
        raise ValueError("matrix is not Hermitian within tolerance")
    return (a + a.conj().T) / 2.0


def frobenius(m) -> float:
    """Frobenius norm as a plain float."""
    return float(np.linalg.norm(np.asarray(m)))


def hermitian_inner(a, b) -> complex:
    """Hermitian product ``sum(a[k] * conj(b[k]))`` of equal-length vectors."""
    va, vb = _as_vector(a), _as_vector(b)
    if va.shape != vb.shape:
        raise DimensionError(f"length mismatch: {va.shape[0]} vs {vb.shape[0]}")
    return complex(np.vdot(vb, va))


def gram_schmidt(basis, tol: NumericTolerances = TOL):
    """Orthogonalize the rows of ``basis`` without normalizing.

    Returns ``(ortho, mu)`` where ``ortho[k]`` is ``basis[k]`` minus its
    projections onto the earlier orthogonal rows, and ``mu`` is lower
    triangular with unit diagonal such that ``basis == mu @ ortho`` up to
    rounding.  ``mu[k, j]`` is the Hermitian product of ``basis[k]`` with
    ``ortho[j]`` divided by ``|ortho[j]|^2``.

    Raises
    ------
    RankDeficientError
        If an orthogonalized row collapses below ``tol.rank_rel`` times the
        largest input row norm (linearly dependent input).
    """
    b = np.asarray(basis, dtype=complex)
    if b.ndim != 2 or 0 in b.shape:
        raise DimensionError(f"expected a 2-d basis, got shape {b.shape}")
    n = b.shape[0]
    scale = float(np.max(np.linalg.norm(b, axis=1)))
    ortho = b.copy()
    mu = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for j in range(k):
            denom = np.vdot(ortho[j], ortho[j]).real
            mu[k, j] = np.vdot(ortho[j], b[k]) / denom
            ortho[k] -= mu[k, j] * ortho[j]
        mu[k, k] = 1.0
        if np.linalg.norm(ortho[k]) <= tol.rank_rel * scale:
            raise RankDeficientError(f"basis row {k} depends on earlier rows")
    return ortho, mu


def cholesky(m, tol: NumericTolerances = TOL) -> np.ndarray:
    """Lower-triangular ``L`` with positive real diagonal and ``L @ L^h == m``.

    ``m`` must be Hermitian (within ``tol.rel_residual``) and positive
    definite; otherwise :class:`NotPositiveDefiniteError` is raised.
    """
    a = _require_hermitian(_as_square(m), tol)
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("matrix is not positive definite") from exc


def eigh(m, tol: NumericTolerances = TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with real eigenvalues ``w`` ascending and matching
    eigenvectors in the columns of ``v``.  Each column phase is fixed so that
    its largest-modulus entry is real positive, which makes the decomposition
    deterministic.  Convergence is declared when the off-diagonal Frobenius
    mass drops below ``tol.jacobi_off_rel`` times the matrix norm; exceeding
    ``tol.jacobi_sweeps`` sweeps raises :class:`ConvergenceError`.
    """
    a = _require_hermitian(_as_square(m), tol)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(frobenius(a), np.finfo(float).tiny)
    threshold = tol.jacobi_off_rel * scale

    converged = False
    for _ in range(tol.jacobi_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # unitary acting on the (p, q) plane:  [[c, s], [-s*ph~, c*ph~]]
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * col_p + c * np.conj(phase) * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * vp + c * np.conj(phase) * vq
        a = (a + a.conj().T) / 2.0
    if not converged and np.linalg.norm(a - np.diag(np.diag(a))) > threshold:
        raise ConvergenceError("Jacobi eigensolver exhausted its sweep budget")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(n):
        piv = v[int(np.argmax(np.abs(v[:, k]))), k]
        if abs(piv) > 0.0:
            v[:, k] *= np.conj(piv) / abs(piv)
    return w, v


def svd(h, tol: NumericTolerances = TOL) -> SvdResult:
    """Singular value decomposition of a square complex matrix.

    Implemented through the Jacobi eigendecomposition of the Gram matrix
    ``h^h h``; singular values are the square roots of its eigenvalues and
    come out ascending.  Left vectors are recovered as ``h v / sigma``; for
    (numerically) zero singular values the corresponding columns of ``u`` are
    completed to an orthonormal basis deterministically.
    """
    a = _as_square(h)
    n = a.shape[0]
    w, v = eigh(a.conj().T @ a, tol)
    sigma = np.sqrt(np.maximum(w, 0.0))
    cutoff = tol.rank_rel * max(1.0, float(sigma[-1]))

    u = np.zeros_like(a)
    filled = []
    empty = []
    for k in range(n):
        if sigma[k] > cutoff:
            u[:, k] = (a @ v[:, k]) / sigma[k]
            filled.append(k)
        else:
            empty.append(k)
    for k in empty:
        # complete with the first identity vector that survives projection
        for j in range(n):
            cand = np.zeros(n, dtype=complex)
            cand[j] = 1.0
            for f in filled:
                cand -= u[:, f] * np.vdot(u[:, f], cand)
            nrm = np.linalg.norm(cand)
            if nrm > 0.5 / np.sqrt(n):
                u[:, k] = cand / nrm
                break
        filled.append(k)
    return SvdResult(u=u, sigma=sigma, v=v)


def inverse_det(m, tol: NumericTolerances = TOL):
    """Inverse and determinant of a square matrix.

    Raises :class:`SingularMatrixError` when ``|det|`` falls below
    ``tol.singular_rel`` times the Hadamard bound (product of row norms).
    """
    a = _as_square(m)
    hadamard = float(np.prod(np.linalg.norm(a, axis=1)))
    det = complex(np.linalg.det(a))
    if not np.isfinite(abs(det)) or abs(det) <= tol.singular_rel * max(1.0, hadamard):
        raise SingularMatrixError("matrix is numerically singular")
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - caught above
        raise SingularMatrixError("matrix is numerically singular") from exc
    return inv, det
