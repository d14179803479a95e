"""
Exception hierarchy for the separation toolkit.

Everything derives from ValueError so callers that only know about bad
inputs keep working; the CLI maps the subclasses onto exit codes.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable, List, Optional, Tuple


class SeparationError(ValueError):
    """Base class for every error raised by the toolkit."""


class DimensionMismatchError(SeparationError):
    pass


class NotSquareError(SeparationError):
    pass


class NotHermitianError(SeparationError):
    pass


class NotPSDError(SeparationError):
    pass


class InvalidStateError(SeparationError):
    """A vector or matrix violates the PureState/DensityMatrix/GramMatrix invariants."""


class InvalidInstanceError(SeparationError):
    pass


class InfeasibleCertificateError(SeparationError):
    pass


class LinearDependenceError(SeparationError):
    pass


class MixedStateConstructionError(SeparationError):
    pass


class GridTooLargeError(SeparationError):
    pass


class SingularInstanceError(SeparationError):
    """Target fidelity equals 1 for a pair whose input fidelity is below 1."""

    def __init__(self, pairs: Iterable[Tuple[int, int]], message: Optional[str] = None):
        self.pairs: List[Tuple[int, int]] = [tuple(p) for p in pairs]
        shown = ", ".join(f"({i + 1},{j + 1})" for i, j in self.pairs)
        super().__init__(message or f"Singular instance: target fidelity is 1 for pairs {shown}")


class InstanceFileError(SeparationError):
    """Instance or channel file that cannot be parsed into a valid object."""

    def __init__(self, field: str, message: str, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}field '{field}': {message}")


class ExitStatus(IntEnum):
    """
    Process exit codes of the command-line front door.

    OK: command succeeded (feasible, constructed, verified)
    PARSE: unreadable or malformed input file
    INVARIANT: a library invariant was violated by the input
    INFEASIBLE: the requested separation is infeasible or not realized
    SINGULAR: target fidelity 1 for a pair of distinct inputs
    """
    OK = 0
    PARSE = 1
    INVARIANT = 2
    INFEASIBLE = 3
    SINGULAR = 4

    @staticmethod
    def determine(exc: BaseException) -> 'ExitStatus':
        if isinstance(exc, (InstanceFileError, OSError)):
            return ExitStatus.PARSE
        if isinstance(exc, SingularInstanceError):
            return ExitStatus.SINGULAR
        if isinstance(exc, InfeasibleCertificateError):
            return ExitStatus.INFEASIBLE
        return ExitStatus.INVARIANT
