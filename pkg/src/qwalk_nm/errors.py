"""Exception hierarchy shared across the package.

Each error class carries the process exit code the CLI maps it to, so
library code can raise precise categories without knowing about the CLI.
"""

from __future__ import annotations


class QwalkError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class UsageError(QwalkError):
    """A caller asked for something the API cannot interpret."""

    exit_code = 2


class ShapeError(UsageError):
    """Operands have incompatible or invalid dimensions."""

    exit_code = 2


class ConfigError(QwalkError):
    """A run configuration violates a precondition."""

    exit_code = 3


class UnsupportedError(ConfigError):
    """A parameter value outside the implemented range (e.g. power-law
    exponent other than 3)."""

    exit_code = 3


class IntegrityError(QwalkError):
    """A numerical invariant was violated badly enough to indicate a bug
    rather than roundoff (non-CPTP channel, negative probability, ...)."""

    exit_code = 4
