"""Exception hierarchy shared by all tropsched modules."""

from __future__ import annotations


class TropicalError(Exception):
    """Base class for every error raised by tropsched."""


# -- scalar algebra ---------------------------------------------------------

class InverseOfZero(TropicalError, ZeroDivisionError):
    pass


class ZeroToNonpositivePower(TropicalError, ValueError):
    pass


# -- matrix algebra ---------------------------------------------------------

class ShapeMismatch(TropicalError, ValueError):
    pass


class NotSquare(ShapeMismatch):
    pass


class AllZeroMatrix(TropicalError, ValueError):
    pass


class StarDiverges(TropicalError, ArithmeticError):
    """Kleene star requested for a matrix with Tr(A) > 1."""


class NotColumnRegular(TropicalError, ValueError):
    pass


class IrregularBound(TropicalError, ValueError):
    pass


class IrregularVector(TropicalError, ValueError):
    pass


class ParameterBelowBound(TropicalError, ValueError):
    pass


# -- bi-objective problem ---------------------------------------------------

class InvalidProblem(TropicalError, ValueError):
    pass


class ZeroArgument(TropicalError, ValueError):
    pass


class UnboundedFrontier(TropicalError, ValueError):
    """The flow-time lower bound is the tropical zero, so no frontier exists."""


class AlphaOutOfRange(TropicalError, ValueError):
    pass


class ParameterOutOfBox(TropicalError, ValueError):
    pass


class EmptyParameterBox(TropicalError, ValueError):
    """The claimed frontier point admits no feasible parameter vector."""


# -- scheduling -------------------------------------------------------------

class InvalidInstance(TropicalError, ValueError):
    """A project instance violates one of its structural constraints.

    ``constraint`` names the violated rule and ``indices`` lists the
    (zero-based) activities involved, so callers can report precisely.
    """

    constraint = "invalid_instance"

    def __init__(self, message: str, indices: tuple[int, ...] = ()):
        super().__init__(message)
        self.indices = tuple(indices)


class InfeasibleReleaseWindow(InvalidInstance):
    constraint = "release_window"


class InfeasibleDeadline(InvalidInstance):
    constraint = "deadline"


class DanglingActivity(InvalidInstance):
    constraint = "dangling_activity"


class BothOrNeitherDeadlineKind(InvalidInstance):
    constraint = "deadline_kind"


class WrongDeadlineKind(InvalidInstance):
    constraint = "deadline_kind"


class IrregularDeadline(InvalidInstance):
    constraint = "irregular_deadline"


class StartTimeOutOfWindow(InvalidInstance):
    constraint = "start_window"


class FinishAfterDeadline(InvalidInstance):
    constraint = "finish_deadline"


# -- oracle -----------------------------------------------------------------

class OracleLimitExceeded(TropicalError, RuntimeError):
    """An instance is too large for brute-force verification."""


class GridTooLarge(OracleLimitExceeded):
    pass
