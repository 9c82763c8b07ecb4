"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should
raise the most specific type that applies.
"""


class OrbcorrError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(OrbcorrError):
    """Invalid input data: bad patterns, broken normalization, bad arguments."""


class ParseError(ValidationError):
    """Malformed wavefunction file. Carries the offending line number."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class NumericalConsistencyError(OrbcorrError):
    """A quantity violated a tolerance that should hold by construction.

    Examples: a reduced density matrix with an eigenvalue below -1e-9,
    or two routes to the same scalar disagreeing beyond the documented
    bound. These indicate a bug or pathological input, not user error.
    """


class OptimizerError(OrbcorrError):
    """The measurement optimizer failed to converge within its restart budget."""
