"""
Coded errors for qudecide.

Every error is a ValueError whose message starts with "CODE: " so callers can
dispatch on the prefix, and carries the code as an attribute as well.
"""

from typing import Any, Optional


class QudecideError(ValueError):
    """Base class for all qudecide errors."""
    code = "QUDECIDE_ERROR"

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"{self.code}: {detail}")


class NotUnitaryError(QudecideError):
    code = "NOT_UNITARY"


class DimensionMismatchError(QudecideError):
    code = "DIMENSION_MISMATCH"


class SingularMatrixError(QudecideError):
    code = "SINGULAR"


class NonUnitAxisError(QudecideError):
    code = "NON_UNIT_AXIS"


class DegenerateCompositionError(QudecideError):
    """The composed rotation is +-I; `fallback` holds the documented result."""
    code = "DEGENERATE_COMPOSITION"

    def __init__(self, detail: str, fallback: Any = None):
        self.fallback = fallback
        super().__init__(detail)


class CommutingPairError(QudecideError):
    code = "COMMUTING_PAIR"


class BadDimensionError(QudecideError):
    code = "BAD_DIMENSION"


class InvalidInputError(QudecideError):
    code = "INVALID_INPUT"


class GroupTooLargeError(QudecideError):
    code = "GROUP_TOO_LARGE"


class ParseError(QudecideError):
    """Malformed gate-set document. `line` is 1-based when known."""
    code = "PARSE_ERROR"

    def __init__(self, detail: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            detail = f"{detail} ({', '.join(where)})"
        super().__init__(detail)


class GateValidationError(QudecideError):
    """A parsed gate failed one of the special-unitary invariants."""
    code = "VALIDATION_ERROR"

    def __init__(self, gate: str, invariant: str, detail: str):
        self.gate = gate
        self.invariant = invariant
        super().__init__(f"gate '{gate}' failed {invariant}: {detail}")


class ConfigError(QudecideError):
    code = "CONFIG_ERROR"
