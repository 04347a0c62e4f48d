"""Integer-forcing MIMO linear receivers via complex lattice reduction.

Submodules
----------
cnum
    Dense complex linear algebra (Hermitian products, Gram-Schmidt,
    Cholesky, Jacobi eigen/SVD, inversion).
gring
    Exact Gaussian-integer arithmetic and the mod-2 residue ring.
clll
    Reduction of complex row bases with an exact unimodular transform.
ifrx
    Receiver construction: candidate generation, combined selection,
    exhaustive search, ZF/MMSE baselines, achievable rate.
simlab
    Seeded Monte Carlo harness for ergodic-rate and uncoded-BER sweeps.
matio
    Shared text format for complex matrices.
cli
    ``latticeforce`` command with subcommands reduce/solve/rate/ber.
"""

from . import clll, cnum, gring, ifrx, matio, simlab
from .clll import ReductionResult, clll_reduce, is_clll_reduced
from .cnum import SvdResult, TOL, NumericTolerances
from .errors import (
    ConvergenceError,
    DimensionError,
    EnumerationBudgetError,
    LatticeError,
    NotInvertibleMod2Error,
    NotPositiveDefiniteError,
    RankDeficientError,
    SingularMatrixError,
)
from .gring import GaussInt, round_gaussian
from .ifrx import (
    CandidateRow,
    ChannelContext,
    ReceiverSolution,
    achievable_rate,
    combined_select,
    exhaustive_search,
    make_context,
    mmse_solution,
    zf_solution,
)
from .simlab import ResultRow, SimConfig, ber_run, ergodic_rate_run, sample_channel

__version__ = "0.1.0"

__all__ = [
    "clll",
    "cnum",
    "gring",
    "ifrx",
    "matio",
    "simlab",
    "ReductionResult",
    "clll_reduce",
    "is_clll_reduced",
    "SvdResult",
    "TOL",
    "NumericTolerances",
    "GaussInt",
    "round_gaussian",
    "CandidateRow",
    "ChannelContext",
    "ReceiverSolution",
    "achievable_rate",
    "combined_select",
    "exhaustive_search",
    "make_context",
    "mmse_solution",
    "zf_solution",
    "ResultRow",
    "SimConfig",
    "ber_run",
    "ergodic_rate_run",
    "sample_channel",
    "LatticeError",
    "DimensionError",
    "RankDeficientError",
    "SingularMatrixError",
    "NotPositiveDefiniteError",
    "ConvergenceError",
    "NotInvertibleMod2Error",
    "EnumerationBudgetError",
]
