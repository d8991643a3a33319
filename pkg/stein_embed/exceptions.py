"""
Exceptions raised by stein-embed.

Validation problems also derive from ValueError and numerical failures from
ArithmeticError, so callers may catch either family.
"""


class SteinEmbedError(Exception):
    """Base class for all package errors."""


class InvalidModel(SteinEmbedError, ValueError):
    """Model parameters outside their admissible range."""


class NotSymmetric(SteinEmbedError, ValueError):
    """A matrix that must be symmetric differs from its transpose."""


class InvalidMatrix(SteinEmbedError, ValueError):
    """Matrix entries violate the structure of its type."""


class NotPSD(SteinEmbedError, ArithmeticError):
    """A matrix has an eigenvalue below the PSD clamping tolerance."""


class Singular(SteinEmbedError, ArithmeticError):
    """A matrix that must be invertible is singular to working precision."""


class NoConvergence(SteinEmbedError, ArithmeticError):
    """Jacobi sweeps exhausted without reaching the off-diagonal tolerance."""


class DimensionMismatch(SteinEmbedError, ValueError):
    """Operand shapes do not agree."""


class DegenerateInputs(SteinEmbedError, ValueError):
    """A′ = B′ = C′ = 0: the non-smooth bound is undefined."""


class TooLarge(SteinEmbedError, ValueError):
    """Exhaustive enumeration requested above its size cap."""


class BudgetExceeded(SteinEmbedError, ValueError):
    """Subset or configuration count above the configured budget."""


class MissingConditionalKernel(SteinEmbedError, LookupError):
    """A kernel model does not supply the conditional kernel ψ_k needed."""


class FormatError(SteinEmbedError, ValueError):
    """Malformed kernel table, coefficient file or edge list."""

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
