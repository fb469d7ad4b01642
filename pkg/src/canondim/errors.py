"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class CanonDimError(Exception):
    exit_code = 1


class InputError(CanonDimError, ValueError):
    """Invalid group spec, prime, data file or flag."""

    exit_code = 2


class PreconditionError(CanonDimError):
    """An operation was called on data that was not prepared far enough."""

    exit_code = 2


class InfeasibleScale(CanonDimError):
    """A computation would exceed its resource budget."""

    exit_code = 3


class ConsistencyFailure(CanonDimError):
    """Two routes that must agree did not, or an algebraic identity broke."""

    exit_code = 4

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}
