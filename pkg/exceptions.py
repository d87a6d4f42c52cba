"""Exception hierarchy for microcech.

Every error raised on purpose by the toolkit derives from MicrocechError so
the CLI can map it onto an exit code. A *false* verification verdict is never
an exception: verifiers return a CheckResult instead.
"""
from __future__ import annotations

from typing import Optional, Sequence


class MicrocechError(Exception):
    """Base exception for all microcech errors."""

    def __init__(self, message: str = "microcech error") -> None:
        self.message = message
        super().__init__(self.message)


class SectorMismatchError(MicrocechError):
    """Raised when two symbols living in different ξ₁-sectors are combined."""

    def __init__(self, left, right) -> None:
        self.left = left
        self.right = right
        super().__init__(f"Sector mismatch: {left} vs {right} (mod 1)")


class WindowError(MicrocechError):
    """Raised when a requested degree or overlap lies outside the known window."""

    def __init__(self, message: str, requested=None, available=None) -> None:
        self.requested = requested
        self.available = available
        super().__init__(message)


class NvarsMismatchError(MicrocechError):
    """Raised when symbols on charts of different dimension are combined."""

    def __init__(self, left: int, right: int) -> None:
        self.left = left
        self.right = right
        super().__init__(f"nvars mismatch: {left} vs {right}")


class NotInvertibleError(MicrocechError):
    """Raised when an inverse is requested for a non-unit."""

    def __init__(self, message: str = "Element is not invertible") -> None:
        super().__init__(message)


class FractionalSectorError(MicrocechError):
    """Raised by the adjoint on operators of fractional order."""

    def __init__(self, sector) -> None:
        self.sector = sector
        super().__init__(f"Adjoint needs integer order, got sector {sector}")


class GroupAxiomError(MicrocechError):
    """Raised when a group, crossed module or structure table fails its axioms."""

    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(f"Axiom violated: {detail}")


class IncompleteDataError(MicrocechError):
    """Raised when cocycle or descent data misses a simplex."""

    def __init__(self, what: str, missing: Sequence[int]) -> None:
        self.missing = tuple(missing)
        super().__init__(f"{what} missing on simplex {list(self.missing)}")


class CocycleError(MicrocechError):
    """Raised when input cochains that must be cocycles are not."""

    def __init__(self, message: str, simplex: Optional[Sequence[int]] = None) -> None:
        self.simplex = tuple(simplex) if simplex is not None else None
        if simplex is not None:
            message = f"{message} (simplex {list(simplex)})"
        super().__init__(message)


class PairingError(MicrocechError):
    """Raised when two coefficient groups admit no pairing or do not match."""

    def __init__(self, left, right) -> None:
        self.left = left
        self.right = right
        super().__init__(f"No pairing between coefficients {left} and {right}")


class BudgetExceededError(MicrocechError):
    """Raised when an enumeration search explores more nodes than allowed."""

    def __init__(self, explored: int, budget: int, what: str = "search") -> None:
        self.explored = explored
        self.budget = budget
        super().__init__(f"{what} exceeded budget: explored {explored} nodes, budget {budget}")


class NormalFormError(MicrocechError):
    """Raised when descent data is not in SectorShift normal form."""

    def __init__(self, message: str, simplex: Optional[Sequence[int]] = None) -> None:
        self.simplex = tuple(simplex) if simplex is not None else None
        if simplex is not None:
            message = f"{message} (simplex {list(simplex)})"
        super().__init__(message)


class MonodromyMismatchError(MicrocechError):
    """Raised when a local system's fiber monodromy is not e^{-2πiλ} for the given shift."""

    def __init__(self, monodromy, shift, vertex: Optional[int] = None) -> None:
        self.monodromy = monodromy
        self.shift = shift
        self.vertex = vertex
        where = f" at vertex {vertex}" if vertex is not None else ""
        super().__init__(f"Fiber monodromy {monodromy}{where} does not match shift {shift}")


class SchemaError(MicrocechError):
    """Raised when an input document does not match its JSON schema."""

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path or '/'}: {message}")


class ZeroOperatorError(MicrocechError):
    """Raised when an operation needs a nonzero operator."""

    def __init__(self, message: str = "Operation undefined on the zero operator") -> None:
        super().__init__(message)
