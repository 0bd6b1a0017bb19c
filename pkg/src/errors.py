"""Exceptions raised by randfib, each mapped to a CLI exit code."""


class RandFibError(Exception):
    """Base class for all randfib errors."""

    exit_code = 1


class InvalidConfigError(RandFibError, ValueError):
    """Invalid input or flag combination, rejected before computing anything."""

    exit_code = 2


class ResourceGuardError(RandFibError, RuntimeError):
    """A level or state-count cap would be exceeded."""

    exit_code = 3


class VerificationError(RandFibError, AssertionError):
    """A verification suite found a failing case."""

    exit_code = 4
