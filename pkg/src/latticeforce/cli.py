"""Command-line front end: ``reduce``, ``solve``, ``rate`` and ``ber``.

Matrix files use the shared text grammar: one row per line, entries comma
separated, each entry ``a+bi`` / ``a-bi`` with decimal parts; zero parts may
be omitted (``2``, ``3i``) and ``#`` starts a comment line.

Exit codes: 0 on success, 2 for usage errors (bad flags or unreadable
files), 1 for numeric failures with a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import clll, ifrx, matio, simlab
from .errors import LatticeError

_MATRIX_GRAMMAR = (
    "matrix file grammar: one row per line; entries comma separated; each entry\n"
    "'a+bi' or 'a-bi' with decimal a, b (e.g. '1.0+0.5i'); zero parts may be\n"
    "omitted ('2', '3i'); blank lines and lines starting with '#' are skipped."
)

DEFAULT_SEED = 0xC111
DEFAULT_TRIALS = 5000


def _snr_grid(text: str):
    """Parse 'start:step:stop' (inclusive, dB) or a single value."""
    try:
        if ":" not in text:
            return (float(text),)
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError
        start, step, stop = (float(x) for x in parts)
        if step <= 0 or stop < start:
            raise ValueError
        count = int(round((stop - start) / step))
        grid = [start + k * step for k in range(count + 1)]
        if grid[-1] > stop + 1e-9:
            grid.pop()
        return tuple(grid)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad SNR grid {text!r}; expected start:step:stop in dB"
        ) from None


def _method_list(valid):
    def parse(text: str):
        methods = tuple(m.strip() for m in text.split(",") if m.strip())
        bad = [m for m in methods if m not in valid]
        if bad or not methods:
            raise argparse.ArgumentTypeError(
                f"bad methods {text!r}; choose from {','.join(valid)}"
            )
        return methods

    return parse


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="latticeforce",
        description="Integer-forcing MIMO receivers via complex lattice reduction.",
        epilog=_MATRIX_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = top.add_subparsers(dest="command", required=True)

    red = sub.add_parser("reduce", help="reduce a complex row basis",
                         epilog=_MATRIX_GRAMMAR,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    red.add_argument("matrix", help="path to the basis matrix file")
    red.add_argument("--delta", type=float, default=clll.DEFAULT_DELTA,
                     help="reduction quality factor in (1/2, 1] (default %(default)s)")

    sol = sub.add_parser("solve", help="build one receiver for a channel file",
                         epilog=_MATRIX_GRAMMAR,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    sol.add_argument("matrix", help="path to the channel matrix file")
    sol.add_argument("--p", type=float, required=True, help="per-layer power (SNR/n)")
    sol.add_argument("--method", default="if_clll_svd",
                     choices=("if_clll_svd", "if_exhaustive", "zf", "mmse"))
    sol.add_argument("--ring", default="zi", choices=ifrx.RINGS,
                     help="invertibility ring for integer-forcing methods")
    sol.add_argument("--delta", type=float, default=clll.DEFAULT_DELTA)
    sol.add_argument("--radius", type=float, default=8.0,
                     help="exhaustive-search norm radius (default %(default)s)")
    sol.add_argument("--no-fallback-identity", dest="fallback_identity",
                     action="store_false",
                     help="disable replacing the combined pick by the identity solution")
    sol.add_argument("--csv", metavar="PATH", default=None,
                     help="also append a one-line CSV summary to PATH")

    def add_sim_flags(p, ring_default, methods_default, valid_methods):
        p.add_argument("--snr", type=_snr_grid, default=_snr_grid("0:5:30"),
                       help="SNR grid start:step:stop in dB (default %(default)s)")
        p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--n", type=_positive_int, default=2, help="antennas per side")
        p.add_argument("--methods", type=_method_list(valid_methods),
                       default=methods_default,
                       help=f"comma list among {','.join(valid_methods)}")
        p.add_argument("--ring", default=ring_default, choices=ifrx.RINGS)
        p.add_argument("--delta", type=float, default=clll.DEFAULT_DELTA)
        p.add_argument("--radius", type=float, default=8.0)
        p.add_argument("--no-fallback-identity", dest="fallback_identity",
                       action="store_false")
        p.add_argument("--output", "-o", metavar="PATH", default=None,
                       help="write the CSV table to PATH (stdout always mirrors it)")

    rate = sub.add_parser("rate", help="ergodic rate sweep over random channels")
    add_sim_flags(rate, "zi",
                  ("zf", "mmse", "if_clll_svd", "if_exhaustive", "capacity"),
                  simlab.METHODS)

    ber = sub.add_parser("ber", help="uncoded 4-QAM bit error rate sweep")
    add_sim_flags(ber, "z2i",
                  ("zf", "mmse", "if_clll_svd", "if_exhaustive", "ml"),
                  tuple(m for m in simlab.METHODS if m != "capacity"))
    ber.set_defaults(snr=_snr_grid("5:5:25"))
    return top


def _load_matrix_or_exit(path: str) -> np.ndarray:
    try:
        return matio.load_matrix(path)
    except (OSError, ValueError) as exc:
        print(f"latticeforce: cannot read matrix {path!r}: {exc}", file=sys.stderr)
        raise SystemExit(2) from exc


def _cmd_reduce(args) -> int:
    basis = _load_matrix_or_exit(args.matrix)
    res = clll.clll_reduce(basis, delta=args.delta)
    print("# reduced basis")
    print(matio.format_matrix(res.reduced))
    print("# transform")
    print(matio.format_matrix(res.transform))
    return 0


def _cmd_solve(args) -> int:
    h = _load_matrix_or_exit(args.matrix)
    ctx = ifrx.make_context(h, args.p)
    if args.method == "zf":
        sol = ifrx.zf_solution(ctx)
    elif args.method == "mmse":
        sol = ifrx.mmse_solution(ctx)
    elif args.method == "if_exhaustive":
        sol = ifrx.exhaustive_search(ctx, radius=args.radius, ring=args.ring)
    else:
        sol = ifrx.combined_select(ctx, ring=args.ring,
                                   fallback_identity=args.fallback_identity,
                                   delta=args.delta)
    rate = ifrx.achievable_rate(sol, args.p)
    print(f"method: {sol.method}")
    print(f"ring: {args.ring}")
    print(f"p: {args.p!r}")
    print("A:")
    print(matio.format_matrix(sol.a))
    print("B:")
    print(matio.format_matrix(sol.b))
    print("row g: " + ", ".join(repr(r.g) for r in sol.rows))
    print(f"gmax: {sol.gmax!r}")
    print(f"rate_bits: {rate!r}")
    if args.csv:
        import os
        fresh = not os.path.exists(args.csv)
        with open(args.csv, "a", encoding="utf-8", newline="") as fh:
            if fresh:
                fh.write("method,p,gmax,rate_bits\n")
            fh.write(f"{sol.method},{args.p!r},{sol.gmax!r},{rate!r}\n")
    return 0


def _sim_config(args) -> simlab.SimConfig:
    return simlab.SimConfig(
        snr_db_grid=args.snr,
        trials=args.trials,
        seed=args.seed,
        n=args.n,
        methods=args.methods,
        ring=args.ring,
        delta=args.delta,
        radius=args.radius,
        fallback_identity=args.fallback_identity,
    )


def _cmd_sim(args, runner) -> int:
    cfg = _sim_config(args)
    rows = runner(cfg, workers=simlab.resolve_workers())
    if args.output:
        simlab.write_csv(rows, args.output)
    print(simlab.format_table(rows))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "reduce":
            return _cmd_reduce(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "rate":
            return _cmd_sim(args, simlab.ergodic_rate_run)
        return _cmd_sim(args, simlab.ber_run)
    except (LatticeError, ValueError) as exc:
        print(f"latticeforce: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"latticeforce: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
