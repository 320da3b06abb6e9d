"""Exception hierarchy.

Every error raised for bad physical input derives from :class:`DomainError`
so callers (and the CLI) can separate "your numbers make no sense" from
programming mistakes.
"""


class GravnuError(Exception):
    """Base class for all package errors."""


class DomainError(GravnuError, ValueError):
    """An input lies outside the domain of the requested formula."""


class HorizonError(DomainError):
    """A radius lies on or inside the Schwarzschild horizon r = 2GM."""


class InversionError(DomainError):
    """Proper-distance inversion found no root in the admissible region."""


class ValidationError(GravnuError, ValueError):
    """A composite object (sweep spec, density matrix, config) is invalid."""
