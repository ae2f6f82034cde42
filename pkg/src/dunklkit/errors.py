"""Exception hierarchy shared by every module of the package."""


class DunklError(Exception):
    """Base class for all errors raised by dunklkit."""


class DomainError(DunklError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class ConvergenceError(DunklError, ArithmeticError):
    """An iterative evaluation hit its iteration cap before converging."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SubdivisionError(DunklError, ArithmeticError):
    """Adaptive quadrature ran out of subdivisions.

    Carries the best available estimate and its error bound so callers can
    decide whether the result is still usable.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class EnvelopeError(DunklError, ValueError):
    """A declared integrand envelope is missing or not integrable."""


class StructureError(DunklError, TypeError):
    """An exact-mode operation was asked to act on an unstructured function."""


class ModeError(DunklError, ValueError):
    """A requested checking mode cannot honour the requested order."""


class NonHermitianError(DunklError, ValueError):
    """A matrix handed to a Hermitian eigen-solver is not Hermitian."""


class GrammarError(DunklError, ValueError):
    """Syntax error in a textual function specification."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f", expected {' or '.join(self.expected)}"
        super().__init__(detail)


class PositivityError(DunklError, ArithmeticError):
    """A quantity that is positive by theorem came out nonpositive."""
