"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``), numerical
breakdowns from :class:`NumericalError`. The command line maps the two
families onto distinct exit codes.
"""


class SDDError(Exception):
    """Base class for all package errors."""


class InputError(SDDError, ValueError):
    """Invalid user input: bad arguments, malformed files, out-of-range indices."""


class ParseError(InputError):
    """A CSV cell could not be parsed as a number."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class StructureError(InputError):
    """A matrix or table violates its expected shape or block structure."""

    def __init__(self, message, max_deviation=None):
        super().__init__(message)
        self.max_deviation = max_deviation


class BoundsError(InputError):
    pass


class BandwidthError(InputError):
    pass


class NumericalError(SDDError, ArithmeticError):
    """Numerical failure: singular inputs, unstable models, degenerate paths."""


class SingularityError(NumericalError):
    pass


class DegeneratePathError(NumericalError):
    pass


class GenerationError(NumericalError):
    pass
