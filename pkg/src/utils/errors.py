from typing import List, Optional


class LieIndexError(Exception):
    """Base class for every error raised by the library"""


class InvalidAlgebraError(LieIndexError):
    """Raised when an operation needs a Lie algebra and the Jacobi identity fails"""

    def __init__(self, message: str, violations: Optional[List] = None):
        super().__init__(message)
        self.violations = violations or []


class DimensionMismatchError(LieIndexError):
    pass


class InconsistentRankError(LieIndexError):
    """Internal consistency failure: the computed ranks contradict each other"""


class NonExactDivisionError(LieIndexError):
    """Internal consistency failure: a division expected to be exact left a remainder"""


class SingularMatrixError(LieIndexError):
    pass


class NotNilpotentError(LieIndexError):
    pass


class ParseError(LieIndexError):
    """Algebra file grammar violation, located by line and column (both 1-based)"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)


class CatalogError(LieIndexError):
    """Unknown catalog name or parameters outside the family's range"""


class FamilyError(LieIndexError):
    pass


class GuardExceededError(LieIndexError):
    pass


class SearchExhaustedError(LieIndexError):
    pass


class ParameterError(LieIndexError):
    """Invalid numeric argument, surfaced as a usage error by the CLI"""
