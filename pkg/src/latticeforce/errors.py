"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(LatticeError, ValueError):
    """Operands have incompatible shapes or lengths."""


class RankDeficientError(LatticeError, ArithmeticError):
    """A basis or matrix does not have full row rank."""


class SingularMatrixError(LatticeError, ArithmeticError):
    """A matrix that must be inverted is numerically singular."""


class NotPositiveDefiniteError(LatticeError, ArithmeticError):
    """A Cholesky pivot failed: the matrix is not positive definite."""


class ConvergenceError(LatticeError, RuntimeError):
    """An iterative routine exhausted its sweep or swap budget."""


class NotInvertibleMod2Error(LatticeError, ArithmeticError):
    """The matrix has no inverse over the mod-2 Gaussian residue ring."""


class EnumerationBudgetError(LatticeError, RuntimeError):
    """A lattice enumeration would exceed the configured vector budget."""
