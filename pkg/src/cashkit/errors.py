"""Exception types shared by every cashkit module."""


class CashkitError(Exception):
    """Base class for all errors raised by cashkit."""

    exit_code = 1


class InputError(CashkitError, ValueError):
    """Malformed or inconsistent input data."""

    exit_code = 1


class DomainError(CashkitError, ValueError):
    """A value lies outside the mathematical domain of a model (e.g. k <= 0)."""

    exit_code = 2


class ConfigError(CashkitError, ValueError):
    """A simulation or application configuration cannot be honoured."""

    exit_code = 1


class MixedBasisWarning(UserWarning):
    """Rate and flow totals are expressed over different period lengths."""


class DegenerateDomainWarning(UserWarning):
    """A reserve formula fell outside its domain and was clamped to zero."""
