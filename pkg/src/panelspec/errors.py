"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit with 2,
numerical failures with 3.
"""


class PanelSpecError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(PanelSpecError, ValueError):
    """An input violates a documented precondition."""


class NumericalError(PanelSpecError, ArithmeticError):
    """A numerical operation failed (e.g. a Cholesky factorization)."""
