"""Lattice reduction for complex bases over the Gaussian integers.

A row basis ``g`` is reduced when

1. every Gram-Schmidt coefficient ``mu[l, j]`` (``j < l``) has
   ``|Re| <= 1/2`` and ``|Im| <= 1/2``, and
2. ``|GS(g[m])|^2 >= (delta - |mu[m, m-1]|^2) * |GS(g[m-1])|^2`` for every
   ``m > 1``,

with ``delta`` in ``(1/2, 1]`` trading reduction quality against work.  The
reducer returns both the reduced basis and the unimodular transform ``u``
with ``reduced == u @ g``; ``u`` is updated in exact Gaussian-integer
arithmetic in lockstep with the floating basis rows, so its entries are
exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cnum
from .errors import ConvergenceError, DimensionError
from .gring import GaussInt

__all__ = ["ReductionResult", "clll_reduce", "is_clll_reduced", "DEFAULT_DELTA"]

DEFAULT_DELTA = 0.75

# far above the expected swap count for any sane basis; purely a
# non-termination guard
_SWAP_CAP = 10_000


@dataclass(frozen=True)
class ReductionResult:
    """Reduced row basis plus the exact unimodular transform.

    ``reduced == transform @ original`` up to floating rounding; the
    transform entries are exact Gaussian integers stored as complex floats.
    """

    reduced: np.ndarray
    transform: np.ndarray
    delta: float


def _gso(basis: np.ndarray, tol: cnum.NumericTolerances):
    ortho, mu = cnum.gram_schmidt(basis, tol)
    norms = np.einsum("ij,ij->i", ortho, ortho.conj()).real
    return mu, norms


def clll_reduce(
    g,
    delta: float = DEFAULT_DELTA,
    max_swaps: int = _SWAP_CAP,
    tol: cnum.NumericTolerances = cnum.TOL,
) -> ReductionResult:
    """Reduce the rows of ``g`` and return :class:`ReductionResult`.

    ``g`` must have linearly independent rows (at most as many rows as
    columns) and ``delta`` must lie in ``(1/2, 1]``.  Size reduction rounds
    each ``mu`` coefficient to the nearest Gaussian integer; row swaps follow
    the condition-2 test.  Exceeding ``max_swaps`` raises
    :class:`ConvergenceError` (diagnostic only; not expected for
    ``delta < 1`` on well-posed input).
    """
    basis = np.array(g, dtype=complex)
    if basis.ndim != 2 or basis.shape[0] == 0 or basis.shape[0] > basis.shape[1]:
        raise DimensionError(f"expected an n x m row basis with n <= m, got {basis.shape}")
    if not 0.5 < delta <= 1.0:
        raise ValueError(f"delta must be in (1/2, 1], got {delta}")

    n = basis.shape[0]
    mu, norms = _gso(basis, tol)  # raises RankDeficientError on dependent rows
    u = [[GaussInt(1 if i == j else 0) for j in range(n)] for i in range(n)]

    k = 1
    swaps = 0
    while k < n:
        for j in range(k - 1, -1, -1):
            r = GaussInt.from_complex(mu[k, j])
            if r:
                rc = r.to_complex()
                basis[k] -= rc * basis[j]
                mu[k, :j] -= rc * mu[j, :j]
                mu[k, j] -= rc
                u[k] = [a - r * b for a, b in zip(u[k], u[j])]
        if norms[k] >= (delta - abs(mu[k, k - 1]) ** 2) * norms[k - 1]:
            k += 1
        else:
            swaps += 1
            if swaps > max_swaps:
                raise ConvergenceError(f"swap budget {max_swaps} exceeded")
            basis[[k - 1, k]] = basis[[k, k - 1]]
            u[k - 1], u[k] = u[k], u[k - 1]
            mu, norms = _gso(basis, tol)
            k = max(k - 1, 1)

    transform = np.array([[x.to_complex() for x in row] for row in u], dtype=complex)
    return ReductionResult(reduced=basis, transform=transform, delta=float(delta))


def is_clll_reduced(
    basis,
    delta: float = DEFAULT_DELTA,
    mu_slack: float = 0.0,
    lovasz_slack: float = 0.0,
    tol: cnum.NumericTolerances = cnum.TOL,
) -> bool:
    """Check both reduction conditions on a row basis.

    ``mu_slack`` loosens the 1/2 bounds additively; ``lovasz_slack`` loosens
    condition 2 relative to ``|GS(g[m-1])|^2``.
    """
    b = np.asarray(basis, dtype=complex)
    mu, norms = _gso(b, tol)
    n = b.shape[0]
    for l in range(n):
        for j in range(l):
            if abs(mu[l, j].real) > 0.5 + mu_slack or abs(mu[l, j].imag) > 0.5 + mu_slack:
                return False
    for m in range(1, n):
        rhs = (delta - abs(mu[m, m - 1]) ** 2) * norms[m - 1]
        if norms[m] < rhs - lovasz_slack * norms[m - 1]:
            return False
    return True
