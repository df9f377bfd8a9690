"""Exception hierarchy shared across the package."""


class RicciGiniError(Exception):
    """Base class for all package errors."""


class DomainError(RicciGiniError, ValueError):
    """An input lies outside the domain of an operation."""


class SchemaError(RicciGiniError, ValueError):
    """A dataset does not contain exactly the canonical indicators."""


class ParseError(RicciGiniError, ValueError):
    """A row or document could not be decoded."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DegenerateDesignError(DomainError):
    """The regressor has no variance, so the fit is undefined."""


class IntegrationError(DomainError):
    """The Gini rate became non-finite during time stepping."""

    def __init__(self, message, t):
        self.t = t
        super().__init__(f"{message} at t={t!r}")
