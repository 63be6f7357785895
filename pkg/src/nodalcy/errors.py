"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class NodalcyError(ValueError):
    """Base class; ``code`` is the machine-readable tag used in CLI error objects."""

    code = "NodalcyError"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


def _make(name: str, *bases: type) -> type:
    return type(name, (NodalcyError, *bases), {"code": name, "__doc__": None})


OrderMismatch = _make("OrderMismatch")
DivisionByZero = _make("DivisionByZero", ZeroDivisionError)
BadPrime = _make("BadPrime")
BadRoot = _make("BadRoot")
ArityMismatch = _make("ArityMismatch")
IndexOutOfRange = _make("IndexOutOfRange", IndexError)
ChartNotValid = _make("ChartNotValid")
UnsupportedDimension = _make("UnsupportedDimension")
DimensionMismatch = _make("DimensionMismatch")
InvalidDimension = _make("InvalidDimension")
SchemaError = _make("SchemaError")
DegreeMismatch = _make("DegreeMismatch")
NotANode = _make("NotANode")
NotOrdinary = _make("NotOrdinary")
DuplicateNode = _make("DuplicateNode")
UnknownCommand = _make("UnknownCommand")


class OutOfBudget(NodalcyError):
    """Raised when a product enumeration would exceed the configured budget.

    ``partial_dimension`` carries the span dimension reached before giving up,
    which is a valid lower bound.
    """

    code = "OutOfBudget"

    def __init__(self, message: str = "", partial_dimension: int | None = None, **details):
        super().__init__(message, partial_dimension=partial_dimension, **details)
        self.partial_dimension = partial_dimension
