"""Seeded Monte Carlo experiments: ergodic-rate sweeps and uncoded 4-QAM BER.

Every result table is a pure function of the :class:`SimConfig`: trial ``t``
draws all of its randomness from a stream derived from ``(seed, t)``, each
trial samples one channel which is reused across the SNR grid, and
aggregation runs in fixed trial order with compensated summation.  Worker
processes only change how trials are scheduled, never what they produce, so
CSV output is byte-identical for any worker count.

The uncoded error-rate experiment sends one symbol vector per channel draw
from the constellation ``{0, 1, i, 1+i}`` (bits are the real and imaginary
parts), scales it by ``sqrt(snr/4)``, and decodes by quantizing the filtered
observation to the nearest Gaussian integers, reducing mod 2 per component,
and solving the integer system over the mod-2 ring.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import gring, ifrx
from .errors import EnumerationBudgetError

__all__ = [
    "METHODS",
    "SimConfig",
    "ResultRow",
    "sample_channel",
    "capacity_bits",
    "rates_for_channel",
    "ergodic_rate_run",
    "ml_decode",
    "modulo_decode",
    "ber_run",
    "write_csv",
    "format_table",
    "resolve_workers",
]

METHODS = ("zf", "mmse", "if_clll_svd", "if_exhaustive", "ml", "capacity")

CONSTELLATION = (0, 1, 1j, 1 + 1j)

CSV_HEADER = ("method", "snr_db", "metric", "value", "stderr", "trials", "seed")


@dataclass(frozen=True)
class SimConfig:
    """Seeded experiment description; the whole result is a function of this."""

    snr_db_grid: tuple
    trials: int
    seed: int = 0xC111
    n: int = 2
    methods: tuple = ("zf", "mmse", "if_clll_svd", "if_exhaustive")
    ring: str = "zi"
    delta: float = 0.75
    radius: float = 8.0
    fallback_identity: bool = True

    def __post_init__(self):
        object.__setattr__(self, "snr_db_grid", tuple(float(x) for x in self.snr_db_grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.snr_db_grid:
            raise ValueError("SNR grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; expected among {METHODS}")
        if self.ring not in ifrx.RINGS:
            raise ValueError(f"unknown ring {self.ring!r}")


@dataclass(frozen=True)
class ResultRow:
    """One (method, SNR) cell of a result table.

    ``stderr`` is the Monte Carlo standard error of ``value`` estimated from
    the per-trial spread; ``trials`` is 0 for rows flagged as unavailable
    (solver budget exceeded), with ``value`` and ``stderr`` NaN.
    """

    method: str
    snr_db: float
    metric: str
    value: float
    stderr: float
    trials: int
    seed: int


def sample_channel(stream: np.random.Generator, n: int) -> np.ndarray:
    """One flat-fading channel draw: entries ``(x + iy)/sqrt(2)``, unit power."""
    re = stream.standard_normal((n, n))
    im = stream.standard_normal((n, n))
    return (re + 1j * im) / math.sqrt(2.0)


def _sample_nonsingular(stream: np.random.Generator, n: int) -> np.ndarray:
    # singular draws have measure zero; resample within the same stream
    while True:
        h = sample_channel(stream, n)
        hadamard = float(np.prod(np.linalg.norm(h, axis=1)))
        if abs(complex(np.linalg.det(h))) > 1e-12 * max(1.0, hadamard):
            return h


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((int(seed), int(trial)))


def capacity_bits(ctx: ifrx.ChannelContext) -> float:
    """``log2 det(I + p h h^h)`` via the singular values, in bits."""
    return float(np.sum(np.log2(1.0 + ctx.p * ctx.svd.sigma**2)))


def _if_solutions(ctx, methods, cfg: SimConfig, dead):
    sols = {}
    for meth in methods:
        if meth in dead or meth in ("ml", "capacity"):
            continue
        if meth == "zf":
            sols[meth] = ifrx.zf_solution(ctx)
        elif meth == "mmse":
            sols[meth] = ifrx.mmse_solution(ctx)
        elif meth == "if_clll_svd":
            sols[meth] = ifrx.combined_select(
                ctx, ring=cfg.ring, fallback_identity=cfg.fallback_identity, delta=cfg.delta
            )
        elif meth == "if_exhaustive":
            sols[meth] = ifrx.exhaustive_search(ctx, radius=cfg.radius, ring=cfg.ring)
    return sols


def rates_for_channel(ctx: ifrx.ChannelContext, cfg: SimConfig, dead=frozenset()):
    """Per-method achievable rates on one channel context (NaN when dead)."""
    sols = _if_solutions(ctx, cfg.methods, cfg, dead)
    out = {}
    for meth in cfg.methods:
        if meth in dead:
            out[meth] = float("nan")
        elif meth in ("ml", "capacity"):
            out[meth] = capacity_bits(ctx)
        else:
            out[meth] = ifrx.achievable_rate(sols[meth], ctx.p)
    return out


def _dead_methods(cfg: SimConfig):
    """Methods that cannot run for this config (enumeration budget)."""
    dead = set()
    if "if_exhaustive" in cfg.methods:
        try:
            ifrx._ball_candidates(cfg.n, float(cfg.radius))
        except EnumerationBudgetError:
            dead.add("if_exhaustive")
    return frozenset(dead)


def _rate_chunk(args):
    cfg, start, stop, dead = args
    nm, ns = len(cfg.methods), len(cfg.snr_db_grid)
    out = np.empty((stop - start, nm, ns), dtype=np.float64)
    for t in range(start, stop):
        rng = _trial_rng(cfg.seed, t)
        h = _sample_nonsingular(rng, cfg.n)
        for si, snr in enumerate(cfg.snr_db_grid):
            p = 10.0 ** (snr / 10.0) / cfg.n
            ctx = ifrx.make_context(h, p)
            rates = rates_for_channel(ctx, cfg, dead)
            for mi, meth in enumerate(cfg.methods):
                out[t - start, mi, si] = rates[meth]
    return out


def _chunks(trials: int, workers: int):
    pieces = min(trials, max(1, workers * 4))
    step = math.ceil(trials / pieces)
    return [(a, min(a + step, trials)) for a in range(0, trials, step)]


def _run_chunked(worker, cfg, dead, workers: int):
    spans = _chunks(cfg.trials, workers)
    args = [(cfg, a, b, dead) for a, b in spans]
    if workers <= 1 or len(spans) == 1:
        parts = [worker(x) for x in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(worker, args))
    return np.concatenate(parts, axis=0)


def _mean_stderr(column) -> tuple:
    vals = [float(x) for x in column]
    t = len(vals)
    mean = math.fsum(vals) / t
    if t < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in vals) / (t - 1)
    return mean, math.sqrt(var / t)


def ergodic_rate_run(cfg: SimConfig, workers=None):
    """Average per-method achievable rate over seeded channel draws.

    ``ml`` and ``capacity`` rows both report the ergodic capacity
    ``E[log2 det(I + p h h^h)]`` computed on the same channel draws as the
    other methods.  Returns :class:`ResultRow` objects ordered by method then
    SNR.
    """
    workers = resolve_workers(workers)
    dead = _dead_methods(cfg)
    vals = _run_chunked(_rate_chunk, cfg, dead, workers)
    rows = []
    for mi, meth in enumerate(cfg.methods):
        for si, snr in enumerate(cfg.snr_db_grid):
            if meth in dead:
                rows.append(ResultRow(meth, snr, "ergodic_rate_bits",
                                      float("nan"), float("nan"), 0, cfg.seed))
                continue
            mean, se = _mean_stderr(vals[:, mi, si])
            rows.append(ResultRow(meth, snr, "ergodic_rate_bits", mean, se,
                                  cfg.trials, cfg.seed))
    return rows


# ---------------------------------------------------------------------------
# uncoded 4-QAM error-rate experiment
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _symbol_grid(n: int) -> np.ndarray:
    cands = np.array(list(product(CONSTELLATION, repeat=n)), dtype=complex)
    cands.flags.writeable = False
    return cands


def ml_decode(y, h, scale: float) -> np.ndarray:
    """Joint search decoder: argmin over all symbol vectors of
    ``|y - scale * h s|^2``, ties broken by lexicographic candidate order."""
    hm = np.asarray(h, dtype=complex)
    n = hm.shape[0]
    cands = _symbol_grid(n)
    resid = np.asarray(y, dtype=complex)[None, :] - scale * (cands @ hm.T)
    metrics = np.einsum("ij,ij->i", resid, resid.conj()).real
    return cands[int(np.argmin(metrics))].copy()


def modulo_decode(y, sol: ifrx.ReceiverSolution, scale: float) -> np.ndarray:
    """Integer-forcing decoder for one observation.

    Applies the solution filter, rescales, quantizes each component to the
    nearest Gaussian integer, reduces mod 2 per real/imaginary part, and
    solves the integer system over the mod-2 ring.  The solution matrix must
    be invertible over that ring or :class:`NotInvertibleMod2Error` is
    raised.
    """
    ytil = (sol.b @ np.asarray(y, dtype=complex)) / scale
    r = gring.mod2(gring.round_gaussian(ytil))
    return gring.solve_mod2(sol.a, r)


def _bit_errors(s_hat: np.ndarray, s: np.ndarray) -> int:
    return int(np.sum(s_hat.real != s.real) + np.sum(s_hat.imag != s.imag))


def _ber_chunk(args):
    cfg, start, stop, dead = args
    nm, ns = len(cfg.methods), len(cfg.snr_db_grid)
    counts = np.zeros((stop - start, nm, ns), dtype=np.int64)
    for t in range(start, stop):
        rng = _trial_rng(cfg.seed, t)
        h = _sample_nonsingular(rng, cfg.n)
        for si, snr in enumerate(cfg.snr_db_grid):
            lin = 10.0 ** (snr / 10.0)
            p = lin / cfg.n
            scale = math.sqrt(lin / 4.0)
            ctx = ifrx.make_context(h, p)
            sols = _if_solutions(ctx, cfg.methods, cfg, dead)
            bits = rng.integers(0, 2, size=(cfg.n, 2))
            s = bits[:, 0] + 1j * bits[:, 1]
            z = (rng.standard_normal(cfg.n) + 1j * rng.standard_normal(cfg.n)) / math.sqrt(2.0)
            y = scale * (h @ s) + z
            for mi, meth in enumerate(cfg.methods):
                if meth in dead:
                    continue
                if meth == "ml":
                    s_hat = ml_decode(y, h, scale)
                else:
                    s_hat = modulo_decode(y, sols[meth], scale)
                counts[t - start, mi, si] = _bit_errors(s_hat, s)
    return counts


def ber_run(cfg: SimConfig, workers=None):
    """Uncoded bit error rate per method over seeded channel draws.

    One symbol vector is sent per channel draw; the error count runs over the
    ``2 n`` bits per trial.  Integer-forcing methods should use
    ``ring="z2i"`` so every selected matrix is invertible for the mod-2
    decoder.  ``capacity`` has no error-rate meaning and is rejected.
    """
    if "capacity" in cfg.methods:
        raise ValueError("'capacity' is not a decodable method; use 'ml'")
    workers = resolve_workers(workers)
    dead = _dead_methods(cfg)
    counts = _run_chunked(_ber_chunk, cfg, dead, workers)
    bits_per_trial = 2 * cfg.n
    rows = []
    for mi, meth in enumerate(cfg.methods):
        for si, snr in enumerate(cfg.snr_db_grid):
            if meth in dead:
                rows.append(ResultRow(meth, snr, "ber", float("nan"), float("nan"),
                                      0, cfg.seed))
                continue
            col = counts[:, mi, si]
            total = int(col.sum())
            value = total / (bits_per_trial * cfg.trials)
            _, se = _mean_stderr(col / bits_per_trial)
            rows.append(ResultRow(meth, snr, "ber", value, se, cfg.trials, cfg.seed))
    return rows


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(rows, dest) -> None:
    """Write rows to a path or text file object, fixed column order and
    shortest-roundtrip float formatting (byte stable for identical inputs)."""
    own = isinstance(dest, (str, os.PathLike))
    fh = open(dest, "w", encoding="utf-8", newline="") if own else dest
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.method, _fmt(r.snr_db), r.metric, _fmt(r.value),
                        _fmt(r.stderr), r.trials, r.seed])
    finally:
        if own:
            fh.close()


def csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def format_table(rows) -> str:
    """Human-readable mirror of the CSV for stdout."""
    header = f"{'method':<14} {'snr_db':>7} {'metric':<18} {'value':>14} {'stderr':>12} {'trials':>7}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.method:<14} {r.snr_db:>7.2f} {r.metric:<18} {r.value:>14.6g} "
            f"{r.stderr:>12.3g} {r.trials:>7d}"
        )
    return "\n".join(lines)


def resolve_workers(workers=None) -> int:
    """Worker count: explicit argument, else the LATTICEFORCE_THREADS cap,
    else 1; never more than the machine has.  Affects speed only."""
    if workers is None:
        env = os.environ.get("LATTICEFORCE_THREADS", "").strip()
        workers = int(env) if env else 1
    return max(1, min(int(workers), os.cpu_count() or 1))
