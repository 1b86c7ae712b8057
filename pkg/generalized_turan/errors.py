"""Exception hierarchy shared by every module."""


class TuranError(Exception):
    """Base class for all generalized-turan errors."""


class GraphFormatError(TuranError, ValueError):
    """Malformed graph text (graph6 string or edge list)."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class InvalidGraphError(TuranError, ValueError):
    """Vertex pair that does not describe a simple graph edge or a valid vertex pair."""


class ParameterError(TuranError, ValueError):
    """A numeric precondition of an operation is violated."""


class DivisibilityError(ParameterError):
    """A required divisibility (e.g. t - 1 | q - 1) does not hold."""


class NotPrimeError(ParameterError):
    """A prime (or prime power) was required."""


class UndefinedOrderError(TuranError, ArithmeticError):
    """The multiplicative order of zero was requested."""


class SizeLimitError(TuranError, ValueError):
    """Input exceeds a documented size cap."""


class InfeasibleError(TuranError, ValueError):
    """No admissible parameter exists for the requested size."""

    def __init__(self, message: str, smallest_n: int | None = None):
        super().__init__(message)
        self.smallest_n = smallest_n


class StructureError(TuranError, ValueError):
    """Input graph does not have the required structure (e.g. it is not a tree)."""


class NotApplicableError(TuranError, ValueError):
    """Operation is not defined for this input."""


class TrivialForbiddenError(TuranError, ValueError):
    """Forbidden graph is contained in every host graph of the requested size."""


class ConsistencyError(TuranError, RuntimeError):
    """An internal cross-check failed; signals a bug rather than bad input."""
