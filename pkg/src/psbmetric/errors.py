"""Exception types raised across the package."""


class PsbmError(Exception):
    """Base class for every error this package raises deliberately."""


class UnknownPoint(PsbmError):
    """A point argument is not part of the carrier (or candidate set)."""


class UnknownBuiltin(PsbmError):
    """No builtin space, map, or comparison function under that name."""


class InfeasibleExhaustive(PsbmError):
    """Exhaustive enumeration requested on a non-finite carrier."""


class ParseError(PsbmError):
    """Malformed space-file or breakpoint input."""


class IncompleteTable(PsbmError):
    """A tabulated metric leaves some ordered triple undefined."""


class NegativeValue(PsbmError):
    """A distance table entry is negative."""


class NotInBall(PsbmError):
    """Inner-ball construction asked for a point outside the outer ball."""


class EmptySubfamily(PsbmError):
    """Cover-witness search over an empty subfamily."""


class WrongSpaceShape(PsbmError):
    """Case-table reproduction needs a two-isolated-points-plus-ray space."""


class InvalidExponents(PsbmError):
    """Interpolation exponents must each lie in (0,1) and sum below 1."""


class TraceTooShort(PsbmError):
    """Iteration trace has fewer points than the diagnostic window needs."""


class NotAFixedPoint(PsbmError):
    """Uniqueness check received a claimed point the map does not fix."""
