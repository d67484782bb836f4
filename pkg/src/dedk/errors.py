"""Exception types raised across the package.

Validation problems derive from ``ValueError`` so callers that only care about
"bad input" can catch that; the CLI maps each family to an exit code.
"""


class DedError(Exception):
    """Base class for every error raised by dedk."""

    exit_code = 1


class ValidationError(DedError, ValueError):
    exit_code = 2


class CycleDetected(ValidationError):
    pass


class BadEndpoint(ValidationError):
    pass


class NegativeCost(ValidationError):
    pass


class KOutOfRange(ValidationError):
    pass


class BadParams(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotBipartite(ValidationError):
    pass


class NotStructured(ValidationError):
    """No integer r places every positive x_e inside one structured band."""


class InvalidCertificate(ValidationError):
    pass


class DegeneratePiece(ValidationError):
    pass


class NumericalFailure(DedError):
    exit_code = 3


class InfeasibleInput(NumericalFailure):
    """A rounding left a k-path alive; the fractional input violated the LP."""


class TooManyPaths(DedError):
    exit_code = 4


class BudgetExceeded(DedError):
    exit_code = 4
