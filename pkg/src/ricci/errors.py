"""Exception hierarchy shared by the library and the CLI."""


class RicciError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(RicciError, ValueError):
    """Unparseable or invalid input data (edge lists, matrices)."""


class DomainError(RicciError, ValueError):
    """An argument lies outside the domain of an operation."""


class NotAnEdge(DomainError):
    pass


class DegreeMismatch(DomainError):
    pass


class OracleTooLarge(RicciError):
    """The brute-force oracle was asked for an instance beyond its size bound."""


class PreconditionViolation(RicciError):
    """A structural precondition (e.g. a degree bound) does not hold."""


class UnsupportedRegime(RicciError):
    """Degree regime not covered by the padding simulation."""
