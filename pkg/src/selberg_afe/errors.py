"""Exception types raised across the package.

Every error carries a short machine-readable ``kind`` so the CLI can emit
a one-line JSON object without string matching.
"""

from __future__ import annotations


class SelbergError(Exception):
    kind = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


class ValidationError(SelbergError, ValueError):
    """Invalid input data; ``field`` names the offending field."""

    kind = "validation"

    def __init__(self, field: str, message: str, **details):
        super().__init__(f"{field}: {message}", field=field, **details)
        self.field = field


class DomainError(SelbergError, ValueError):
    """Argument outside the region where an operation is defined."""

    kind = "domain"


class HypothesisError(DomainError):
    """A hypothesis of one of the approximate functional equations fails."""

    kind = "hypothesis"


class ContourDegeneracyError(DomainError):
    kind = "contour_degeneracy"


class CapacityError(SelbergError, ValueError):
    kind = "capacity"


class AccuracyError(SelbergError, ArithmeticError):
    kind = "accuracy"


class SmoothnessError(SelbergError, TypeError):
    """A smooth cutoff was required but the sharp cutoff was supplied."""

    kind = "smoothness"


class CoefficientRangeError(SelbergError, IndexError):
    kind = "out_of_range"
