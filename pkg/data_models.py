"""
Shared data models for the microcech toolkit.

This module defines the small result and command structures that cross
module boundaries: three-valued verification verdicts, violation records,
and the parsed form of a CLI invocation.

Domain objects (symbols, nerves, crossed modules, descent data) live in
their owning modules; only the types every layer agrees on live here.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, List, Optional, Tuple


class VerificationStatus(Enum):
    """Outcome of an exact or window-limited identity check."""
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"  # window too small to decide

    @staticmethod
    def combine(statuses) -> "VerificationStatus":
        """FALSE dominates INDETERMINATE, which dominates TRUE."""
        result = VerificationStatus.TRUE
        for status in statuses:
            if status is VerificationStatus.FALSE:
                return VerificationStatus.FALSE
            if status is VerificationStatus.INDETERMINATE:
                result = VerificationStatus.INDETERMINATE
        return result


class ExitCode(IntEnum):
    """Process exit codes of the `microcech` command."""
    SUCCESS = 0
    FALSE = 1
    USAGE = 2
    INDETERMINATE = 3


@dataclass(frozen=True)
class Violation:
    """One failed identity on one simplex."""
    simplex: Tuple[int, ...]
    identity: str  # short identity name, e.g. "triangle" or "tetrahedron"
    message: str
    status: VerificationStatus = VerificationStatus.FALSE

    def to_dict(self) -> Dict:
        return {
            "simplex": list(self.simplex),
            "identity": self.identity,
            "status": self.status.value,
            "message": self.message,
        }


@dataclass(frozen=True)
class CheckResult:
    """
    Result of a verification pass.

    Attributes:
        status: combined three-valued verdict
        violations: every non-TRUE check, sorted by (simplex dimension, simplex)
        checked: number of simplex-level identities evaluated
    """
    status: VerificationStatus
    violations: Tuple[Violation, ...] = ()
    checked: int = 0

    @property
    def holds(self) -> bool:
        return self.status is VerificationStatus.TRUE

    @property
    def first_violation(self) -> Optional[Violation]:
        """Lowest violating simplex carrying the deciding status."""
        for violation in self.violations:
            if violation.status is self.status:
                return violation
        return None

    @staticmethod
    def from_violations(violations: List[Violation], checked: int) -> "CheckResult":
        ordered = tuple(sorted(violations, key=lambda v: (len(v.simplex), v.simplex, v.identity)))
        status = VerificationStatus.combine(v.status for v in ordered)
        return CheckResult(status=status, violations=ordered, checked=checked)

    def to_dict(self) -> Dict:
        first = self.first_violation
        return {
            "status": self.status.value,
            "checked": self.checked,
            "first_violation": first.to_dict() if first else None,
            "violations": [v.to_dict() for v in self.violations],
        }


class Subcommand(Enum):
    """Subcommands of the CLI."""
    OP = "op"
    COHOMOLOGY = "cohomology"
    H1 = "h1"
    VERIFY = "verify"
    TWIST = "twist"
    CLASSIFY = "classify"
    SEQUENCE = "sequence"
    SELFTEST = "selftest"


@dataclass(frozen=True)
class CommandSpec:
    """
    A fully parsed CLI invocation.

    Every run is deterministic given the inputs and the seed.
    """
    subcommand: Subcommand
    inputs: Tuple[str, ...] = ()
    options: Dict[str, object] = field(default_factory=dict)
    window: Optional[int] = None
    coeff: Optional[str] = None
    deg: Optional[int] = None
    budget: Optional[int] = None
    seed: int = 0
