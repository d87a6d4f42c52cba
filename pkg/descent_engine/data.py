"""
Descent data containers.

All data is indexed by strictly increasing simplices of the nerve:
f_ij : A_j → A_i on edges i<j, a_ijk ∈ A_i on triangles i<j<k.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

from descent_engine.base import AlgebraEngine
from descent_engine.morphisms import Morphism
from exceptions import IncompleteDataError
from homology.nerve import CoverNerve, Simplex


def _lookup(table: Dict, key: Tuple[int, ...], what: str) -> Any:
    try:
        return table[key]
    except KeyError:
        raise IncompleteDataError(what, key) from None


@dataclass(frozen=True)
class AlgebroidDescentData:
    """(A_i, f_ij, a_ijk) on a nerve."""
    nerve: CoverNerve
    algebras: Tuple[AlgebraEngine, ...]
    morphisms: Dict[Simplex, Morphism] = field(default_factory=dict)
    units: Dict[Simplex, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.algebras) != self.nerve.vertices:
            raise IncompleteDataError("algebra", (len(self.algebras),))

    def algebra(self, i: int) -> AlgebraEngine:
        return self.algebras[i]

    def morphism(self, i: int, j: int) -> Morphism:
        return _lookup(self.morphisms, (i, j), "morphism f")

    def unit(self, i: int, j: int, k: int) -> Any:
        return _lookup(self.units, (i, j, k), "unit a")

    def require_complete(self) -> None:
        for edge in self.nerve.simplices(1):
            self.morphism(*edge)
        for triangle in self.nerve.simplices(2):
            self.unit(*triangle)

    @property
    def homogeneous(self) -> bool:
        """All local algebras interchangeable."""
        first = self.algebras[0]
        return all(first.compatible(a) for a in self.algebras[1:])


@dataclass(frozen=True)
class FunctorData:
    """g_i : A_i → A'_i per vertex and b_ij ∈ A'_i per edge."""
    functors: Dict[int, Morphism]
    corrections: Dict[Simplex, Any]

    def functor(self, i: int) -> Morphism:
        try:
            return self.functors[i]
        except KeyError:
            raise IncompleteDataError("functor g", (i,)) from None

    def correction(self, i: int, j: int) -> Any:
        return _lookup(self.corrections, (i, j), "correction b")


@dataclass(frozen=True)
class TransformationData:
    """d_i ∈ A'_i per vertex."""
    units: Dict[int, Any]

    def unit(self, i: int) -> Any:
        try:
            return self.units[i]
        except KeyError:
            raise IncompleteDataError("transformation unit d", (i,)) from None


@dataclass(frozen=True)
class ModuleData:
    """
    A twisted module with M_i = A_i and gluing φ_ij(u) = f_ij(u)·p_ij.

    The units p_ij ∈ A_i must satisfy f_ij(p_jk)·p_ij = a_ijk·p_ik.
    """
    units: Dict[Simplex, Any]

    def unit(self, i: int, j: int) -> Any:
        return _lookup(self.units, (i, j), "module unit p")
