"""
Finite groups, crossed modules and 2-group valued Čech cocycles.
"""

from twogroup.cocycles import (
    CoboundaryPair,
    PointedSet,
    TwoGroupCocycle,
    act,
    are_cohomologous,
    class_group,
    compare_with_abelian,
    h0_pointed_set,
    h1_pointed_set,
    h_minus1,
    verify_cocycle,
)
from twogroup.crossed_module import CrossedModule
from twogroup.groups import FiniteGroup, invariant_factors
from twogroup.search import Constraint, ConstraintSearch

__all__ = [
    "CoboundaryPair",
    "Constraint",
    "ConstraintSearch",
    "CrossedModule",
    "FiniteGroup",
    "PointedSet",
    "TwoGroupCocycle",
    "act",
    "are_cohomologous",
    "class_group",
    "compare_with_abelian",
    "h0_pointed_set",
    "h1_pointed_set",
    "h_minus1",
    "invariant_factors",
    "verify_cocycle",
]
