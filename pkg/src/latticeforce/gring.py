"""Exact arithmetic over the Gaussian integers and the mod-2 residue ring.

Unimodularity and mod-2 invertibility are exact properties, so nothing in
this module touches floating determinants: matrices are converted to
arbitrary-precision integer pairs and all eliminations are fraction-free.

Gaussian-integer vectors and matrices travel through the rest of the package
as complex ndarrays with integral components; the helpers here validate and
convert them.  The mod-2 ring has elements ``{0, 1, i, 1+i}`` (canonical
residues with real/imaginary parts in ``{0, 1}``), units ``{1, i}``, and the
nilpotent ``1+i``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotInvertibleMod2Error

__all__ = [
    "GaussInt",
    "round_gaussian",
    "det_exact",
    "is_unimodular",
    "is_invertible_zi",
    "rank_zi",
    "mod2",
    "mul_mod2",
    "rank_mod2",
    "is_invertible_mod2",
    "invert_mod2",
    "solve_mod2",
]


def _half_away(x: np.ndarray) -> np.ndarray:
    # round to nearest, halves away from zero; adding +0.0 clears -0.0
    return np.copysign(np.floor(np.abs(x) + 0.5), x) + 0.0


def round_gaussian(z):
    """Componentwise nearest Gaussian integer; half-ties round away from zero.

    Accepts scalars or arrays and returns the same shape with exact integral
    real/imaginary parts (as complex floats).
    """
    a = np.asarray(z, dtype=complex)
    out = _half_away(a.real) + 1j * _half_away(a.imag)
    if out.ndim == 0:
        return complex(out)
    return out


class GaussInt:
    """Gaussian integer with exact (arbitrary precision) integer parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = int(re)
        self.im = int(im)

    @classmethod
    def from_complex(cls, z) -> "GaussInt":
        z = complex(z)
        re = _half_away(np.asarray(z.real))
        im = _half_away(np.asarray(z.imag))
        return cls(int(re), int(im))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        """Field norm ``re^2 + im^2`` (multiplicative, exact)."""
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __add__(self, other):
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussInt):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussInt({self.re}, {self.im})"


def _exact_rows(mat, what="matrix"):
    """Validate integral entries and convert to nested GaussInt lists."""
    a = np.atleast_2d(np.asarray(mat, dtype=complex))
    re, im = np.rint(a.real), np.rint(a.imag)
    if (
        np.max(np.abs(a.real - re), initial=0.0) > 1e-9
        or np.max(np.abs(a.imag - im), initial=0.0) > 1e-9
    ):
        raise ValueError(f"{what} entries are not Gaussian integers")
    rei = re.astype(object)
    imi = im.astype(object)
    return [
        [GaussInt(int(rei[i, j]), int(imi[i, j])) for j in range(a.shape[1])]
        for i in range(a.shape[0])
    ]


def _exact_square(mat):
    rows = _exact_rows(mat)
    if len(rows) != len(rows[0]):
        raise DimensionError("expected a square matrix")
    return rows


def _exact_div(a: GaussInt, b: GaussInt) -> GaussInt:
    nb = b.norm()
    t = a * b.conj()
    qr, rr = divmod(t.re, nb)
    qi, ri = divmod(t.im, nb)
    if rr or ri:  # cannot happen in fraction-free elimination
        raise ArithmeticError("non-exact division during elimination")
    return GaussInt(qr, qi)


def det_exact(mat) -> GaussInt:
    """Exact determinant of a Gaussian-integer matrix (fraction-free Bareiss)."""
    m = _exact_square(mat)
    n = len(m)
    sign = 1
    prev = GaussInt(1)
    for k in range(n - 1):
        if not m[k][k]:
            pivot = next((i for i in range(k + 1, n) if m[i][k]), None)
            if pivot is None:
                return GaussInt(0)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
            m[i][k] = GaussInt(0)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def is_unimodular(mat) -> bool:
    """True iff the exact determinant is a unit (1, -1, i or -i)."""
    return det_exact(mat).is_unit()


def is_invertible_zi(mat) -> bool:
    """True iff the matrix has an inverse with Gaussian-integer entries.

    Same criterion as :func:`is_unimodular`: the determinant must be a unit.
    """
    return is_unimodular(mat)


def rank_zi(mat) -> int:
    """Exact row rank over the fraction field of the Gaussian integers."""
    rows = _exact_rows(mat)
    ncols = len(rows[0])
    rank = 0
    top = 0
    for col in range(ncols):
        pivot = next((r for r in range(top, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[top], rows[pivot] = rows[pivot], rows[top]
        p = rows[top][col]
        for r in range(top + 1, len(rows)):
            f = rows[r][col]
            if f:
                rows[r] = [a * p - b * f for a, b in zip(rows[r], rows[top])]
        top += 1
        rank += 1
        if top == len(rows):
            break
    return rank


# ---------------------------------------------------------------------------
# mod-2 residue ring Z[i]/2Z[i]
# ---------------------------------------------------------------------------

def _bit_pairs(mat, what="matrix"):
    """Entries as (re, im) bit pairs, reduced mod 2."""
    rows = _exact_rows(mat, what)
    return [[(g.re & 1, g.im & 1) for g in row] for row in rows]


def _pairs_to_complex(pairs):
    return np.array([[complex(r, i) for (r, i) in row] for row in pairs])


def mod2(values):
    """Canonical mod-2 residues of Gaussian-integer scalars or arrays."""
    a = np.asarray(values, dtype=complex)
    re, im = np.rint(a.real), np.rint(a.imag)
    if (
        np.max(np.abs(a.real - re), initial=0.0) > 1e-9
        or np.max(np.abs(a.imag - im), initial=0.0) > 1e-9
    ):
        raise ValueError("values are not Gaussian integers")
    out = np.mod(re.astype(np.int64), 2) + 1j * np.mod(im.astype(np.int64), 2)
    if out.ndim == 0:
        return complex(out)
    return out


def mul_mod2(x, y) -> complex:
    """Product of two residues in the mod-2 ring (minus equals plus here)."""
    a, b = complex(mod2(x)), complex(mod2(y))
    ar, ai = int(a.real), int(a.imag)
    br, bi = int(b.real), int(b.imag)
    return complex((ar * br + ai * bi) & 1, (ar * bi + ai * br) & 1)


def _parity_masks(mat):
    """Rows as bitmasks of the residue-field image re+im mod 2."""
    rows = _bit_pairs(mat)
    masks = []
    for row in rows:
        m = 0
        for j, (r, i) in enumerate(row):
            if (r + i) & 1:
                m |= 1 << j
        masks.append(m)
    return masks, len(rows[0])


def rank_mod2(mat) -> int:
    """Rank of the matrix image in the residue field of the mod-2 ring.

    The mod-2 ring is local with residue field GF(2) via ``a+bi -> a+b``;
    a square matrix is invertible over the ring iff this rank is full.
    """
    masks, _ = _parity_masks(mat)
    pivots = []
    rank = 0
    for m in masks:
        for pm in pivots:
            low = pm & -pm
            if m & low:
                m ^= pm
        if m:
            pivots.append(m)
            rank += 1
    return rank


def is_invertible_mod2(mat) -> bool:
    """True iff the square matrix is invertible over the mod-2 ring."""
    pairs = _bit_pairs(mat)
    if len(pairs) != len(pairs[0]):
        raise DimensionError("expected a square matrix")
    return rank_mod2(mat) == len(pairs)


def _mul2(a, b):
    return ((a[0] * b[0] + a[1] * b[1]) & 1, (a[0] * b[1] + a[1] * b[0]) & 1)


def _add2(a, b):
    return (a[0] ^ b[0], a[1] ^ b[1])


_UNIT2 = {(1, 0), (0, 1)}  # units of the mod-2 ring; each is its own inverse


def invert_mod2(mat):
    """Inverse of a square matrix over the mod-2 ring.

    Gauss-Jordan elimination choosing unit pivots; returns the inverse as a
    complex array of canonical residues.  Raises
    :class:`NotInvertibleMod2Error` when no unit pivot exists in some column
    (the determinant is then 0 or the nilpotent 1+i).
    """
    work = _bit_pairs(mat)
    n = len(work)
    if n != len(work[0]):
        raise DimensionError("expected a square matrix")
    for r in range(n):
        work[r] = work[r] + [(1 if c == r else 0, 0) for c in range(n)]

    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] in _UNIT2), None)
        if piv is None:
            raise NotInvertibleMod2Error(
                "matrix is not invertible over the mod-2 Gaussian ring"
            )
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col]  # 1 and i are each self-inverse mod 2
        work[col] = [_mul2(inv, x) for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != (0, 0):
                f = work[r][col]
                work[r] = [_add2(x, _mul2(f, y)) for x, y in zip(work[r], work[col])]
    return _pairs_to_complex([row[n:] for row in work])


def solve_mod2(mat, r):
    """Solve ``mat @ s == r`` over the mod-2 ring for a square ``mat``.

    ``r`` is a vector of residues; the result is the residue vector
    ``inverse(mat) @ r`` with all products and sums reduced mod 2.
    """
    inv = invert_mod2(mat)
    rv = np.atleast_1d(np.asarray(mod2(r), dtype=complex))
    inv_pairs = _bit_pairs(inv)
    r_pairs = [(int(x.real), int(x.imag)) for x in rv]
    if len(r_pairs) != len(inv_pairs[0]):
        raise DimensionError("vector length does not match the matrix")
    out = []
    for row in inv_pairs:
        acc = (0, 0)
        for x, y in zip(row, r_pairs):
            acc = _add2(acc, _mul2(x, y))
        out.append(complex(acc[0], acc[1]))
    return np.array(out)
