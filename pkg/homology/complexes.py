"""
Cochain complexes with integer coboundary matrices.

A CochainComplex stores one basis (a tuple of labels) per degree and the
sparse integer matrices of d_k: C^k → C^{k+1}. The matrices are the same
for every coefficient group; cochains carry the coefficient group they take
values in. Nerves, tensor products of complexes and the circle-bundle cone
model all produce this one type.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from homology.coefficients import CoefficientGroup, Z
from homology.nerve import CoverNerve

logger = logging.getLogger(__name__)

# rows of d_k, one per basis element of C^{k+1}: ((column, coefficient), ...)
SparseRows = Tuple[Tuple[Tuple[int, int], ...], ...]


@dataclass(frozen=True)
class CochainComplex:
    """Finite cochain complex of free abelian groups."""
    bases: Tuple[Tuple[Hashable, ...], ...]
    differentials: Tuple[SparseRows, ...]
    coefficient: CoefficientGroup = Z
    name: str = ""
    nerve: Optional[CoverNerve] = field(default=None, compare=False)
    _index: Tuple[Dict[Hashable, int], ...] = field(default=(), compare=False, repr=False, hash=False)

    def __post_init__(self):
        if len(self.differentials) != max(0, len(self.bases) - 1):
            raise ValueError(
                f"complex with {len(self.bases)} degrees needs {max(0, len(self.bases) - 1)} differentials"
            )
        for k, rows in enumerate(self.differentials):
            if len(rows) != len(self.bases[k + 1]):
                raise ValueError(f"d_{k} has {len(rows)} rows, C^{k + 1} has rank {len(self.bases[k + 1])}")
        object.__setattr__(self, "_index", tuple({b: i for i, b in enumerate(basis)} for basis in self.bases))

    @property
    def top_degree(self) -> int:
        return len(self.bases) - 1

    def dim(self, k: int) -> int:
        if 0 <= k < len(self.bases):
            return len(self.bases[k])
        return 0

    def basis(self, k: int) -> Tuple[Hashable, ...]:
        if 0 <= k < len(self.bases):
            return self.bases[k]
        return ()

    def index(self, k: int, label: Hashable) -> int:
        try:
            return self._index[k][label]
        except (IndexError, KeyError):
            raise KeyError(f"{label!r} is not a basis element of C^{k}") from None

    def sparse(self, k: int) -> SparseRows:
        """Rows of d_k (empty when C^{k+1} or C^k is zero)."""
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return tuple(() for _ in range(self.dim(k + 1)))

    def matrix(self, k: int) -> List[List[int]]:
        """Dense integer matrix of d_k, shape dim(k+1) × dim(k)."""
        cols = self.dim(k)
        dense = []
        for row in self.sparse(k):
            line = [0] * cols
            for col, coeff in row:
                line[col] += coeff
            dense.append(line)
        return dense

    def with_coefficient(self, coefficient: CoefficientGroup) -> "CochainComplex":
        return CochainComplex(self.bases, self.differentials, coefficient, self.name, self.nerve)

    def is_complex(self) -> bool:
        """d_{k+1} ∘ d_k = 0 in every degree."""
        for k in range(len(self.differentials) - 1):
            first, second = self.matrix(k), self.matrix(k + 1)
            for row in second:
                for j in range(self.dim(k)):
                    if sum(row[i] * first[i][j] for i in range(len(first))) != 0:
                        return False
        return True

    def apply(self, k: int, values: Sequence[Any], coefficient: Optional[CoefficientGroup] = None) -> List[Any]:
        """d_k applied to a value vector in the given coefficient group."""
        group = coefficient or self.coefficient
        out = []
        for row in self.sparse(k):
            acc = group.zero()
            for col, coeff in row:
                acc = group.add(acc, group.times(values[col], coeff))
            out.append(acc)
        return out


def nerve_complex(nerve: CoverNerve, coefficient: Optional[CoefficientGroup] = None) -> CochainComplex:
    """Čech complex of a nerve: (dc)(σ) = Σ_i (−1)^i c(σ without its i-th vertex)."""
    bases = tuple(nerve.simplices(k) for k in range(nerve.dimension + 1))
    differentials = []
    for k in range(nerve.dimension):
        rows = []
        for simplex in nerve.simplices(k + 1):
            row = []
            for i in range(len(simplex)):
                face = simplex[:i] + simplex[i + 1:]
                row.append((nerve.index(face), -1 if i % 2 else 1))
            rows.append(tuple(row))
        differentials.append(tuple(rows))
    return CochainComplex(bases, tuple(differentials), coefficient or Z, nerve.name, nerve)


@dataclass(frozen=True)
class Cochain:
    """Degree-k cochain: one coefficient value per basis element of C^k."""
    complex: CochainComplex
    degree: int
    values: Tuple[Any, ...]
    coefficient: Optional[CoefficientGroup] = None

    def __post_init__(self):
        group = self.coefficient or self.complex.coefficient
        object.__setattr__(self, "coefficient", group)
        if len(self.values) != self.complex.dim(self.degree):
            raise ValueError(
                f"degree-{self.degree} cochain needs {self.complex.dim(self.degree)} values, got {len(self.values)}"
            )
        object.__setattr__(self, "values", tuple(group.normalize(v) for v in self.values))

    # ----- constructors ------------------------------------------------

    @classmethod
    def zero(cls, complex: CochainComplex, degree: int, coefficient: Optional[CoefficientGroup] = None) -> "Cochain":
        group = coefficient or complex.coefficient
        return cls(complex, degree, tuple(group.zero() for _ in range(complex.dim(degree))), group)

    @classmethod
    def from_mapping(
        cls,
        complex: CochainComplex,
        degree: int,
        mapping: Mapping[Hashable, Any],
        coefficient: Optional[CoefficientGroup] = None,
    ) -> "Cochain":
        """Values by basis label; labels not mentioned are zero."""
        group = coefficient or complex.coefficient
        values = [group.zero()] * complex.dim(degree)
        for label, value in mapping.items():
            key = tuple(label) if isinstance(label, list) else label
            values[complex.index(degree, key)] = value
        return cls(complex, degree, tuple(values), group)

    @classmethod
    def unit(cls, complex: CochainComplex, coefficient: Optional[CoefficientGroup] = None) -> "Cochain":
        """The constant 0-cochain 1 (integral coefficients)."""
        group = coefficient or complex.coefficient
        return cls(complex, 0, tuple(1 for _ in range(complex.dim(0))), group)

    # ----- access --------------------------------------------------------

    def value(self, label: Hashable) -> Any:
        return self.values[self.complex.index(self.degree, tuple(label) if isinstance(label, list) else label)]

    def __getitem__(self, label: Hashable) -> Any:
        return self.value(label)

    def as_mapping(self) -> Dict[Hashable, Any]:
        return dict(zip(self.complex.basis(self.degree), self.values))

    def is_zero(self) -> bool:
        return all(self.coefficient.is_zero(v) for v in self.values)

    # ----- arithmetic ------------------------------------------------------

    def _check_same_space(self, other: "Cochain") -> None:
        if self.degree != other.degree or self.complex.bases != other.complex.bases:
            raise ValueError("cochains live on different complexes or degrees")
        if self.coefficient != other.coefficient:
            raise ValueError(f"coefficient mismatch: {self.coefficient} vs {other.coefficient}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_same_space(other)
        group = self.coefficient
        return Cochain(self.complex, self.degree, tuple(group.add(a, b) for a, b in zip(self.values, other.values)), group)

    def __neg__(self) -> "Cochain":
        group = self.coefficient
        return Cochain(self.complex, self.degree, tuple(group.neg(a) for a in self.values), group)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def times(self, n: int) -> "Cochain":
        group = self.coefficient
        return Cochain(self.complex, self.degree, tuple(group.times(a, n) for a in self.values), group)

    def map_values(self, fn, coefficient: CoefficientGroup) -> "Cochain":
        """Push values through a homomorphism into another coefficient group."""
        return Cochain(self.complex, self.degree, tuple(fn(v) for v in self.values), coefficient)

    # ----- JSON ----------------------------------------------------------

    def to_json(self) -> Dict:
        entries = []
        for label, value in zip(self.complex.basis(self.degree), self.values):
            entries.append({"simplex": _label_json(label), "value": self.coefficient.to_json(value)})
        return {"kind": "cochain", "degree": self.degree, "coeff": self.coefficient.label, "values": entries}


def _label_json(label: Hashable) -> Any:
    if isinstance(label, tuple):
        return [_label_json(x) for x in label]
    return label


def coboundary(c: Cochain) -> Cochain:
    """dc in degree k+1 (the zero cochain over the empty set when C^{k+1} = 0)."""
    values = c.complex.apply(c.degree, c.values, c.coefficient)
    return Cochain(c.complex, c.degree + 1, tuple(values), c.coefficient)


def is_cocycle(c: Cochain) -> bool:
    return coboundary(c).is_zero()
