"""Integer-forcing receiver construction plus ZF/MMSE baselines.

Given a square channel ``h`` and per-layer power ``p``, the receiver looks
for an integer matrix ``a`` (Gaussian-integer entries, invertible over a
chosen ring) and a complex filter ``b`` minimizing the worst per-row
effective noise power

    g(a_m, b_m) = |b_m|^2 + p * |b_m h - a_m|^2 .

For fixed ``a`` the optimal filter row is ``b = a h^h s^{-1}`` with
``s = p^{-1} I + h h^h``, and the minimized metric equals
``p * (a mprime a^h)`` where ``mprime = v diag(d) v^h`` is built from the
singular structure of ``h``.  Candidate rows for ``a`` come from three cheap
sources (reduction of the n-dimensional lattice with Gram matrix ``mprime``,
reduction of a 2n-dimensional lattice that carries the filter jointly, and
rounded singular-vector rows) and are combined by a sorted greedy selection;
an exhaustive search over a norm ball provides the reference solution.

Ring tags: ``"zi"`` selects invertibility over the Gaussian integers
(unit determinant), ``"z2i"`` over the mod-2 residue ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import clll, cnum, gring
from .errors import (
    DimensionError,
    EnumerationBudgetError,
    LatticeError,
    SingularMatrixError,
)

__all__ = [
    "RINGS",
    "ChannelContext",
    "CandidateRow",
    "ReceiverSolution",
    "make_context",
    "b_from_a",
    "g_metric",
    "quad_form",
    "build_g2n",
    "algorithm1",
    "algorithm2",
    "algorithm3",
    "canonicalize_unit",
    "combined_select",
    "exhaustive_search",
    "power_scaled_radius",
    "zf_solution",
    "mmse_solution",
    "achievable_rate",
]

RINGS = ("zi", "z2i")

ENUMERATION_BUDGET = 10_000_000


@dataclass(frozen=True)
class ChannelContext:
    """Per-realization quantities shared by all receiver builders.

    ``s = p^{-1} I + h h^h``; ``d[m] = 1 / (p * sigma[m]^2 + 1)`` aligned
    with the ascending singular values; ``mprime = v diag(d) v^h`` (equal to
    ``I - h^h s^{-1} h``); ``l = v diag(sqrt(d))`` so that
    ``l l^h == mprime``; ``bproj = h^h s^{-1}`` maps an integer row to its
    optimal filter row.
    """

    h: np.ndarray
    p: float
    s: np.ndarray
    s_inv: np.ndarray
    svd: cnum.SvdResult
    d: np.ndarray
    mprime: np.ndarray
    l: np.ndarray
    bproj: np.ndarray

    @property
    def n(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class CandidateRow:
    """One integer row with its optimal filter row and noise metric."""

    a: np.ndarray
    b: np.ndarray
    g: float
    source: str


@dataclass(frozen=True)
class ReceiverSolution:
    """A full receiver: method tag, integer matrix, filter, per-row metrics."""

    method: str
    a: np.ndarray
    b: np.ndarray
    gmax: float
    rows: tuple


def make_context(h, p: float, tol: cnum.NumericTolerances = cnum.TOL) -> ChannelContext:
    """Build the :class:`ChannelContext` for channel ``h`` and power ``p > 0``.

    Raises :class:`SingularMatrixError` (message ``"singular channel"``) when
    ``|det h|`` falls below ``tol.singular_rel`` times the Hadamard bound;
    simulations treat this as a resampling signal.
    """
    hm = np.asarray(h, dtype=complex)
    if hm.ndim != 2 or hm.shape[0] != hm.shape[1]:
        raise DimensionError(f"expected a square channel matrix, got {hm.shape}")
    if not p > 0:
        raise ValueError(f"power must be positive, got {p}")
    hadamard = float(np.prod(np.linalg.norm(hm, axis=1)))
    if abs(complex(np.linalg.det(hm))) <= tol.singular_rel * max(1.0, hadamard):
        raise SingularMatrixError("singular channel")

    sv = cnum.svd(hm, tol)
    d = 1.0 / (p * sv.sigma**2 + 1.0)
    mprime = (sv.v * d) @ sv.v.conj().T
    mprime = (mprime + mprime.conj().T) / 2.0
    l = sv.v * np.sqrt(d)
    n = hm.shape[0]
    s = np.eye(n, dtype=complex) / p + hm @ hm.conj().T
    s_inv, _ = cnum.inverse_det(s, tol)
    bproj = hm.conj().T @ s_inv
    return ChannelContext(
        h=hm, p=float(p), s=s, s_inv=s_inv, svd=sv, d=d, mprime=mprime, l=l, bproj=bproj
    )


def b_from_a(ctx: ChannelContext, a) -> np.ndarray:
    """Optimal filter row ``a h^h s^{-1}`` for integer row ``a``."""
    av = np.asarray(a, dtype=complex)
    if av.shape != (ctx.n,):
        raise DimensionError(f"expected a length-{ctx.n} row, got shape {av.shape}")
    return av @ ctx.bproj


def g_metric(ctx: ChannelContext, a, b) -> float:
    """Effective noise power ``|b|^2 + p * |b h - a|^2`` of one row pair."""
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    if av.shape != (ctx.n,) or bv.shape != (ctx.n,):
        raise DimensionError("row length does not match the channel size")
    resid = bv @ ctx.h - av
    return float(np.vdot(bv, bv).real + ctx.p * np.vdot(resid, resid).real)


def quad_form(ctx: ChannelContext, a) -> float:
    """Quadratic form ``a mprime a^h``; ``p`` times this is the minimized g."""
    av = np.asarray(a, dtype=complex)
    return float((av @ ctx.mprime @ av.conj()).real)


def _candidate(ctx: ChannelContext, a: np.ndarray, source: str) -> CandidateRow:
    b = a @ ctx.bproj
    resid = b @ ctx.h - a
    g = float(np.vdot(b, b).real + ctx.p * np.vdot(resid, resid).real)
    return CandidateRow(a=a, b=b, g=g, source=source)


def algorithm1(ctx: ChannelContext, delta: float = clll.DEFAULT_DELTA):
    """Candidate rows from reducing the lattice generated by the rows of ``l``.

    The reduction transform maps reduced rows back to integer coordinates, so
    its rows are exactly the integer candidates (squared lengths in the
    ``mprime`` form are the reduced row norms).
    """
    red = clll.clll_reduce(ctx.l, delta)
    rows = gring.round_gaussian(red.transform)  # scrub float dust; entries exact
    return [_candidate(ctx, rows[m], "alg1") for m in range(ctx.n)]


def build_g2n(ctx: ChannelContext) -> np.ndarray:
    """Generator of the 2n-dimensional lattice carrying filter and integer parts.

    Block row basis ``[[p^{-1/2} I, -h], [0, I]]``: a coefficient row
    ``[d | c]`` maps to a lattice vector of squared length
    ``p^{-1} |d|^2 + |d h - c|^2``, i.e. ``p^{-1} g(c, d)``.
    """
    n = ctx.n
    top = np.hstack([np.eye(n, dtype=complex) / math.sqrt(ctx.p), -ctx.h])
    bottom = np.hstack([np.zeros((n, n), dtype=complex), np.eye(n, dtype=complex)])
    return np.vstack([top, bottom])


def algorithm2(ctx: ChannelContext, delta: float = clll.DEFAULT_DELTA):
    """Candidate rows from reducing the 2n-dimensional joint lattice.

    Each reduced coefficient row splits as ``[d | c]``; only the integer part
    ``c`` is kept (an integer filter would leave a residual error floor) and
    the filter is recomputed optimally.  Rows with ``c == 0`` are dropped.
    """
    red = clll.clll_reduce(build_g2n(ctx), delta)
    rows = gring.round_gaussian(red.transform)
    n = ctx.n
    out = []
    for m in range(2 * n):
        c = rows[m, n:]
        if np.all(c == 0):
            continue
        out.append(_candidate(ctx, c, "alg2"))
    return out


def algorithm3(ctx: ChannelContext):
    """Candidate rows by rounding the rows of the singular-vector matrix ``v``.

    Rows of a unitary matrix have entries of modulus at most one, so the
    rounded candidates live in ``{0, ±1, ±i, ±1±i}^n``.  Zero rows are
    dropped.
    """
    rows = gring.round_gaussian(ctx.svd.v)
    out = []
    for m in range(ctx.n):
        if np.all(rows[m] == 0):
            continue
        out.append(_candidate(ctx, rows[m], "alg3"))
    return out


def _identity_rows(ctx: ChannelContext):
    eye = np.eye(ctx.n, dtype=complex)
    return [_candidate(ctx, eye[m], "identity") for m in range(ctx.n)]


def canonicalize_unit(a) -> np.ndarray:
    """Scale by a unit so the first nonzero entry has ``Re > 0, Im >= 0``.

    ``a`` and ``u * a`` for units ``u in {1, -1, i, -i}`` produce identical
    metrics; this picks one representative per orbit so pools never contain
    unit-scaled duplicates.
    """
    av = np.asarray(a, dtype=complex)
    for z in av:
        if z != 0:
            if z.real > 0 and z.imag >= 0:
                return av
            if z.real <= 0 and z.imag > 0:
                return av * -1j
            if z.real < 0 and z.imag <= 0:
                return -av
            return av * 1j
    return av


def _int_key(a: np.ndarray) -> tuple:
    out = []
    for z in a:
        out.append(int(round(z.real)))
        out.append(int(round(z.imag)))
    return tuple(out)


def _sort_key(row: CandidateRow):
    return (row.g, _int_key(row.a))


# ---------------------------------------------------------------------------
# greedy selection of a ring-invertible row set
# ---------------------------------------------------------------------------

class _ExactEchelon:
    """Incremental exact rank tracking over the Gaussian-integer fraction field."""

    def __init__(self, rows=()):
        self.rows = list(rows)  # echelon rows as GaussInt lists

    def extended(self, key):
        """Echelon with one more row, or None if the row is dependent."""
        vec = [gring.GaussInt(key[2 * j], key[2 * j + 1]) for j in range(len(key) // 2)]
        for er in self.rows:
            lead = next(i for i, x in enumerate(er) if x)
            if vec[lead]:
                f = vec[lead]
                p = er[lead]
                vec = [a * p - b * f for a, b in zip(vec, er)]
        if not any(vec):
            return None
        return _ExactEchelon(self.rows + [vec])


class _ParityEchelon:
    """Incremental rank tracking in the residue field of the mod-2 ring.

    Full rank there is exactly invertibility over the ring, so no final
    determinant check is needed on this route.
    """

    def __init__(self, pivots=()):
        self.pivots = tuple(pivots)

    def extended(self, key):
        m = 0
        for j in range(len(key) // 2):
            if (key[2 * j] + key[2 * j + 1]) & 1:
                m |= 1 << j
        for pm in self.pivots:
            if m & (pm & -pm):
                m ^= pm
        if m == 0:
            return None
        return _ParityEchelon(self.pivots + (m,))


class _LazyKeys:
    """Row tuples of an integer column array, converted on first touch."""

    def __init__(self, arr):
        self._arr = arr
        self._cache = {}

    def __len__(self):
        return len(self._arr)

    def __getitem__(self, i):
        key = self._cache.get(i)
        if key is None:
            key = tuple(int(x) for x in self._arr[i])
            self._cache[i] = key
        return key


def _select_rows(keys, n: int, ring: str):
    """Indices of the first ``n`` keys forming a ring-invertible matrix.

    Depth-first search in pool order with exact rank pruning; for the
    Gaussian-integer ring a final exact unit-determinant check runs at full
    depth and failure backtracks to the next candidate.
    """
    if ring not in RINGS:
        raise ValueError(f"unknown ring {ring!r}; expected one of {RINGS}")
    state0 = _ParityEchelon() if ring == "z2i" else _ExactEchelon()
    m = len(keys)

    def final_ok(chosen):
        if ring == "z2i":
            return True  # full residue-field rank already implies invertibility
        mat = np.array(
            [[complex(keys[i][2 * j], keys[i][2 * j + 1]) for j in range(n)] for i in chosen]
        )
        return gring.is_unimodular(mat)

    def rec(start, chosen, state):
        if len(chosen) == n:
            return list(chosen) if final_ok(chosen) else None
        last_start = m - (n - len(chosen)) + 1
        for idx in range(start, last_start):
            nxt = state.extended(keys[idx])
            if nxt is None:
                continue
            chosen.append(idx)
            res = rec(idx + 1, chosen, nxt)
            if res is not None:
                return res
            chosen.pop()
        return None

    return rec(0, [], state0)


def _verify_ring(a: np.ndarray, ring: str) -> None:
    ok = gring.is_invertible_mod2(a) if ring == "z2i" else gring.is_unimodular(a)
    if not ok:
        raise LatticeError("internal error: selected matrix is not ring invertible")


def _solution_from_rows(method: str, rows) -> ReceiverSolution:
    a = np.array([r.a for r in rows])
    b = np.array([r.b for r in rows])
    gmax = max(r.g for r in rows)
    return ReceiverSolution(method=method, a=a, b=b, gmax=gmax, rows=tuple(rows))


def combined_select(
    ctx: ChannelContext,
    ring: str = "zi",
    fallback_identity: bool = True,
    delta: float = clll.DEFAULT_DELTA,
) -> ReceiverSolution:
    """Combine all candidate sources and pick the best ring-invertible rows.

    The pool is the union of :func:`algorithm1`, :func:`algorithm2`,
    :func:`algorithm3` and the identity rows, canonicalized to unit-scaling
    representatives and deduplicated, then sorted by ascending metric (ties
    broken by the integer entries).  The first rows forming a ring-invertible
    matrix are selected greedily.  With ``fallback_identity`` the identity
    solution replaces the selection when its worst metric is strictly
    smaller, which pins the result at or below the MMSE worst row.
    """
    pool = {}
    for cand in (
        algorithm1(ctx, delta) + algorithm2(ctx, delta) + algorithm3(ctx) + _identity_rows(ctx)
    ):
        canon = canonicalize_unit(gring.round_gaussian(cand.a))
        key = _int_key(canon)
        if key not in pool:
            pool[key] = _candidate(ctx, np.array([complex(re, im) for re, im in
                                                  zip(key[0::2], key[1::2])]),
                                    cand.source)
    cands = sorted(pool.values(), key=_sort_key)
    keys = [_int_key(c.a) for c in cands]
    chosen = _select_rows(keys, ctx.n, ring)
    if chosen is None:  # unreachable: identity rows always admit a completion
        raise LatticeError("no ring-invertible candidate subset exists")
    rows = [cands[i] for i in chosen]
    sol = _solution_from_rows("if_clll_svd", rows)
    _verify_ring(sol.a, ring)

    if fallback_identity:
        ident = _identity_rows(ctx)
        if max(r.g for r in ident) < sol.gmax:
            sol = _solution_from_rows("if_clll_svd", ident)
    return sol


def power_scaled_radius(ctx: ChannelContext) -> float:
    """Search radius whose square is ``1 + p * sigma_max^2``.

    Grows with power, so enumeration cost does too; prefer the fixed default
    radius unless studying the full search.
    """
    return math.sqrt(1.0 + ctx.p * float(ctx.svd.sigma[-1]) ** 2)


@lru_cache(maxsize=16)
def _ball_candidates(n: int, radius: float):
    """Canonical unit-scaling representatives of nonzero integer rows with
    squared norm at most ``radius^2``, deduplicated and lexicographically
    ordered.  Returns ``(vectors, int_columns)`` as read-only arrays."""
    if radius < 1.0:
        raise ValueError(f"radius must be at least 1, got {radius}")
    half = int(math.floor(radius))
    width = 2 * half + 1
    if width ** (2 * n) > ENUMERATION_BUDGET:
        raise EnumerationBudgetError(
            f"box of {width ** (2 * n)} vectors exceeds the {ENUMERATION_BUDGET} budget"
        )
    axes = [np.arange(-half, half + 1, dtype=np.int64)] * (2 * n)
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2 * n)
    norms = np.sum(grid.astype(np.float64) ** 2, axis=1)
    grid = grid[(norms <= radius * radius + 1e-9) & (norms > 0)]

    vecs = grid[:, 0::2].astype(np.complex128) + 1j * grid[:, 1::2].astype(np.complex128)
    # vectorized unit canonicalization: rotate so the first nonzero entry
    # lands in {Re > 0, Im >= 0}
    first = np.argmax(vecs != 0, axis=1)
    z = vecs[np.arange(len(vecs)), first]
    u = np.ones(len(vecs), dtype=complex)
    u[(z.real <= 0) & (z.imag > 0)] = -1j
    u[(z.real < 0) & (z.imag <= 0)] = -1.0
    u[(z.real >= 0) & (z.imag < 0)] = 1j
    vecs = vecs * u[:, None]

    cols = np.empty((len(vecs), 2 * n), dtype=np.int64)
    cols[:, 0::2] = np.rint(vecs.real).astype(np.int64)
    cols[:, 1::2] = np.rint(vecs.imag).astype(np.int64)
    cols = np.unique(cols, axis=0)
    vecs = cols[:, 0::2].astype(np.complex128) + 1j * cols[:, 1::2].astype(np.complex128)
    vecs.flags.writeable = False
    cols.flags.writeable = False
    return vecs, cols


def exhaustive_search(ctx: ChannelContext, radius: float = 8.0, ring: str = "zi") -> ReceiverSolution:
    """Reference solution: search every integer row in a norm ball.

    Enumerates all nonzero rows with squared norm at most ``radius^2`` (box
    enumeration, then norm filter), canonicalizes unit-scaled duplicates,
    sorts by the ``mprime`` quadratic form ascending with the same tie-break
    as :func:`combined_select`, and greedily selects the first
    ring-invertible row set.  ``radius`` must be at least 1 so the identity
    rows are always available.  Raises :class:`EnumerationBudgetError` when
    the box would exceed the enumeration budget.
    """
    vecs, cols = _ball_candidates(ctx.n, float(radius))
    forms = np.einsum("ij,jk,ik->i", vecs, ctx.mprime, vecs.conj()).real
    # candidate columns are unique and lexicographically sorted, so a stable
    # sort on the form breaks ties exactly like the combined-pool sort key
    order = np.argsort(forms, kind="stable")

    keys = _LazyKeys(cols[order])
    chosen = _select_rows(keys, ctx.n, ring)
    if chosen is None:  # unreachable for radius >= 1
        raise LatticeError("no ring-invertible candidate subset exists")
    rows = [_candidate(ctx, vecs[order[i]], "exhaustive") for i in chosen]
    sol = _solution_from_rows("if_exhaustive", rows)
    _verify_ring(sol.a, ring)
    return sol


def zf_solution(ctx: ChannelContext) -> ReceiverSolution:
    """Zero-forcing baseline: ``a = I`` and ``b = h^{-1}``.

    The residual ``b h - a`` vanishes identically, so each row metric is just
    the squared filter row norm.
    """
    hinv, _ = cnum.inverse_det(ctx.h)
    eye = np.eye(ctx.n, dtype=complex)
    rows = [
        CandidateRow(a=eye[m], b=hinv[m], g=float(np.vdot(hinv[m], hinv[m]).real), source="zf")
        for m in range(ctx.n)
    ]
    sol = _solution_from_rows("zf", rows)
    return sol


def mmse_solution(ctx: ChannelContext) -> ReceiverSolution:
    """Linear MMSE baseline: ``a = I`` with the optimal filter per row."""
    rows = [
        _candidate(ctx, np.eye(ctx.n, dtype=complex)[m], "mmse") for m in range(ctx.n)
    ]
    rows = [CandidateRow(a=r.a, b=r.b, g=r.g, source="mmse") for r in rows]
    return _solution_from_rows("mmse", rows)


def achievable_rate(sol: ReceiverSolution, p: float) -> float:
    """Per-realization rate ``n * max(0, log2(p / gmax))`` in bits."""
    n = sol.a.shape[0]
    if sol.gmax <= 0:
        raise ValueError("solution has a non-positive worst-row metric")
    return n * max(0.0, math.log2(p / sol.gmax))
