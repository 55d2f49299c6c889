"""Exception hierarchy. CLI exit codes hang off these classes."""


class MargulisError(Exception):
    exit_code = 1


class ValidationError(MargulisError, ValueError):
    exit_code = 2


class ConstructionError(MargulisError):
    exit_code = 2


class ResourceError(MargulisError):
    exit_code = 2


class LiftError(MargulisError):
    exit_code = 3


class ExhaustionError(MargulisError):
    exit_code = 3


class IntegrityError(MargulisError):
    exit_code = 4


class ConsistencyError(MargulisError, AssertionError):
    """An internal invariant failed; indicates a bug, not bad input."""

    exit_code = 1


class DecodeFailure(MargulisError):
    """The syndrome is not in the column space of the check matrix."""
