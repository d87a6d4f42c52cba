"""
Budgeted Constraint Search.

Depth-first enumeration over finite domains with forward checking.

═══════════════════════════════════════════════════════════════════════════
CORE CONTRACT:
═══════════════════════════════════════════════════════════════════════════

- Every yielded assignment satisfies every constraint
- Enumeration order depends only on the inputs (no randomness, no hashing)
- Every assignment tried counts as one node against the budget
- Running out of budget raises BudgetExceededError; the search NEVER
  reports "no solution" for a space it did not finish
═══════════════════════════════════════════════════════════════════════════
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from config import get_settings
from exceptions import BudgetExceededError

logger = logging.getLogger(__name__)

Assignment = List[Optional[int]]


@dataclass(frozen=True)
class Constraint:
    """A predicate over the variables in `scope`, read from the full assignment."""
    scope: Tuple[int, ...]
    check: Callable[[Assignment], bool]
    name: str = ""


class ConstraintSearch:
    """
    Backtracking search; the next variable is the one with the fewest
    candidates left, ties broken by index.

    A constraint filters a variable's candidates once every other variable
    in its scope is assigned.
    """

    def __init__(
        self,
        domains: Sequence[Sequence[int]],
        constraints: Sequence[Constraint],
        budget: Optional[int] = None,
        what: str = "search",
    ):
        self.domains = [tuple(d) for d in domains]
        self.constraints = list(constraints)
        self.budget = get_settings().budget if budget is None else budget
        self.what = what
        self.explored = 0
        self._by_var: Dict[int, List[Constraint]] = {v: [] for v in range(len(self.domains))}
        for c in self.constraints:
            for v in set(c.scope):
                self._by_var[v].append(c)

    def _candidates(self, assignment: Assignment, var: int) -> List[int]:
        values = list(self.domains[var])
        for c in self._by_var[var]:
            if any(assignment[v] is None for v in c.scope if v != var):
                continue
            kept = []
            for value in values:
                assignment[var] = value
                if c.check(assignment):
                    kept.append(value)
            assignment[var] = None
            values = kept
            if not values:
                break
        return values

    def _tick(self):
        self.explored += 1
        if self.explored > self.budget:
            raise BudgetExceededError(self.explored, self.budget, self.what)

    def solutions(self) -> Iterator[List[int]]:
        """All satisfying assignments, depth first."""
        assignment: Assignment = [None] * len(self.domains)
        yield from self._descend(assignment)

    def _descend(self, assignment: Assignment) -> Iterator[List[int]]:
        best: Optional[Tuple[int, List[int]]] = None
        for var, value in enumerate(assignment):
            if value is not None:
                continue
            candidates = self._candidates(assignment, var)
            if not candidates:
                return
            if best is None or len(candidates) < len(best[1]):
                best = (var, candidates)
                if len(candidates) == 1:
                    break
        if best is None:
            yield list(assignment)
            return
        var, candidates = best
        for value in candidates:
            self._tick()
            assignment[var] = value
            yield from self._descend(assignment)
        assignment[var] = None

    def first(self) -> Optional[List[int]]:
        for solution in self.solutions():
            return solution
        return None

    def all(self) -> List[List[int]]:
        found = list(self.solutions())
        logger.debug(f"{self.what}: {len(found)} solutions, {self.explored} nodes")
        return found
