"""
Exception hierarchy for folbound.

Library code raises these; only the command line layer turns them into exit
codes. Everything derives from FolboundError so callers can catch one type.
"""

from typing import Optional


class FolboundError(Exception):
    """Base class for every error raised by folbound."""


class OrderBeyondTruncation(FolboundError):
    """A coefficient or order was requested past the known precision of a series."""


class CompositionDivergent(FolboundError):
    """Composition f(g) with ord(g) = 0 has no formal meaning."""


class TruncationInsufficient(FolboundError):
    """The supplied or computed precision cannot separate the objects involved."""


class FieldTooSmall(FolboundError):
    """The cyclotomic field does not contain the roots of unity or values required."""


class NotInvariant(FolboundError):
    """A branch expected to be invariant by the foliation is not."""


class InvariantCurve(FolboundError):
    """A tangency order was requested along an invariant curve."""


class NonRationalSingularity(FolboundError):
    """A required point does not have coordinates in the coefficient field."""


class MissingSingularity(FolboundError):
    """Supplied singular point data is inconsistent with the curve."""


class InvalidBranch(FolboundError):
    """A branch parametrization is not in the accepted normal form."""


class SingularityRequired(FolboundError):
    """A singular curve was required but the input is smooth."""


class NotWeaklyIsolated(FolboundError):
    """A check needing weak isolation was asked to run on a curve without it."""


class NonGenericInfinity(FolboundError):
    """The line at infinity fails the genericity test of the global checks."""


class ConsistencyError(FolboundError):
    """Two independent computations of the same exact quantity disagree."""


class CaseFileError(FolboundError, ValueError):
    """
    A case file could not be parsed or validated.

    Args:
        message: What went wrong
        line: 1-based line of the offending text, if known
        column: 1-based column of the offending text, if known
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
