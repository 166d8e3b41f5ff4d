"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ImpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ImpError, ValueError):
    """Malformed polynomial or instance text."""


class ZeroPolynomial(ImpError, ValueError):
    pass


class ZeroDivisorInBasis(ImpError, ValueError):
    pass


class ResourceLimit(ImpError, RuntimeError):
    """A configured size cap was exceeded (oracle blow-up, huge expansion)."""


class ExpansionTooLarge(ResourceLimit):
    pass


class TooLarge(ResourceLimit):
    pass


class EmptyRelation(ImpError, ValueError):
    pass


class NotMinorityClosed(ImpError, ValueError):
    pass


class ScopeOutOfRange(ImpError, ValueError):
    pass


class InfeasibleSystem(ImpError):
    """The constraint system has no 0/1 solution; the ideal is the unit ideal."""


class DegreeTooHigh(ImpError, ValueError):
    pass


class InternalInvariantViolation(ImpError, AssertionError):
    pass


class UnownedTerm(InternalInvariantViolation, KeyError):
    pass
