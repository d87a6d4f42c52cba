"""
Finite-dimensional test algebras given by structure constants.

An element is a coefficient vector over the basis e_0..e_{dim-1}; the
product is e_i·e_j = Σ_k c[i][j][k] e_k. Coefficients are integers mod m
when a modulus is given, Gaussian rationals (ExactScalar) otherwise.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from data_models import VerificationStatus
from descent_engine.base import AlgebraEngine
from exceptions import GroupAxiomError, NotInvertibleError
from homology.coefficients import RCxValue
from symcore import ExactScalar, I_UNIT, ONE, ZERO, format_rational, parse_rational
from twogroup.groups import FiniteGroup

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]


@dataclass(frozen=True)
class FiniteTable:
    """Structure constants, unit vector and coefficient ring of a finite algebra."""
    dim: int
    structure: Tuple[Tuple[Vector, ...], ...]
    unit: Vector
    modulus: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise GroupAxiomError("algebra needs dimension >= 1")
        if self.modulus is not None and self.modulus < 2:
            raise GroupAxiomError(f"coefficient modulus must be >= 2, got {self.modulus}")
        if len(self.structure) != self.dim or any(len(row) != self.dim for row in self.structure):
            raise GroupAxiomError(f"structure table must be {self.dim}x{self.dim}")
        norm = self.coefficient
        structure = tuple(
            tuple(self._vector(entry, norm, f"c[{i}][{j}]") for j, entry in enumerate(row))
            for i, row in enumerate(self.structure)
        )
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "unit", self._vector(self.unit, norm, "unit"))
        self._check_axioms()

    def _vector(self, raw: Sequence[Any], norm, what: str) -> Vector:
        if len(raw) != self.dim:
            raise GroupAxiomError(f"{what} needs {self.dim} coefficients, got {len(raw)}")
        return tuple(norm(v) for v in raw)

    # ----- coefficients ------------------------------------------------

    def coefficient(self, value: Any) -> Any:
        if self.modulus is not None:
            if isinstance(value, ExactScalar):
                if value.im != 0 or value.re.denominator != 1:
                    raise ValueError(f"{value} is not an integer mod {self.modulus}")
                value = value.re.numerator
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer mod {self.modulus}")
                value = value.numerator
            return int(value) % self.modulus
        if isinstance(value, (list, tuple)):
            return ExactScalar.from_json(value)
        return ExactScalar.of(value)

    @property
    def zero_coefficient(self) -> Any:
        return 0 if self.modulus is not None else ZERO

    @property
    def one_coefficient(self) -> Any:
        return 1 if self.modulus is not None else ONE

    # ----- arithmetic ----------------------------------------------------

    def basis_vector(self, i: int) -> Vector:
        zero, one = self.zero_coefficient, self.one_coefficient
        return tuple(one if k == i else zero for k in range(self.dim))

    def add(self, a: Vector, b: Vector) -> Vector:
        return tuple(self.coefficient(x + y) for x, y in zip(a, b))

    def scale(self, c: Any, a: Vector) -> Vector:
        return tuple(self.coefficient(c * x) for x in a)

    def mul(self, a: Vector, b: Vector) -> Vector:
        acc = [self.zero_coefficient] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                w = ai * bj
                for k, ck in enumerate(self.structure[i][j]):
                    if ck:
                        acc[k] = acc[k] + w * ck
        return tuple(self.coefficient(v) for v in acc)

    def _check_axioms(self) -> None:
        basis = [self.basis_vector(i) for i in range(self.dim)]
        for i, e in enumerate(basis):
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise GroupAxiomError(f"unit fails on basis vector {i}")
        for i, ei in enumerate(basis):
            for j, ej in enumerate(basis):
                left = self.mul(ei, ej)
                for k, ek in enumerate(basis):
                    if self.mul(left, ek) != self.mul(ei, self.mul(ej, ek)):
                        raise GroupAxiomError(f"associativity fails on basis ({i}, {j}, {k})")

    # ----- constructors ------------------------------------------------

    @classmethod
    def scalars(cls, modulus: Optional[int] = None) -> "FiniteTable":
        return cls(1, (((1,),),), (1,), modulus, "scalars")

    @classmethod
    def group_algebra(cls, group: FiniteGroup, modulus: Optional[int] = None) -> "FiniteTable":
        """k[G] with basis the group elements."""
        n = group.order
        structure = tuple(
            tuple(tuple(1 if k == group.mul(g, h) else 0 for k in range(n)) for h in range(n))
            for g in range(n)
        )
        unit = tuple(1 if k == group.identity else 0 for k in range(n))
        return cls(n, structure, unit, modulus, f"group algebra of {group.name or f'order-{n} group'}")

    @classmethod
    def matrix_algebra(cls, k: int, modulus: Optional[int] = None) -> "FiniteTable":
        """M_k with basis E_ab at index a*k + b."""
        n = k * k
        structure = []
        for a in range(k):
            for b in range(k):
                row = []
                for c in range(k):
                    for d in range(k):
                        row.append(tuple(1 if (b == c and t == a * k + d) else 0 for t in range(n)))
                structure.append(tuple(row))
        unit = tuple(1 if t // k == t % k else 0 for t in range(n))
        return cls(n, tuple(structure), unit, modulus, f"M_{k}")

    def to_json(self) -> Dict:
        return {
            "kind": "table",
            "dim": self.dim,
            "modulus": self.modulus,
            "structure": [[[coefficient_to_json(c) for c in entry] for entry in row] for row in self.structure],
            "unit": [coefficient_to_json(c) for c in self.unit],
            "name": self.name,
        }


def coefficient_to_json(value: Any) -> Any:
    if isinstance(value, ExactScalar):
        if value.im == 0:
            return format_rational(value.re)
        return value.to_json()
    return int(value)


def _to_sympy(value: Any) -> sympy.Expr:
    if isinstance(value, ExactScalar):
        return sympy.Rational(value.re.numerator, value.re.denominator) + sympy.I * sympy.Rational(
            value.im.numerator, value.im.denominator
        )
    return sympy.Integer(int(value))


def _from_sympy(value: sympy.Expr) -> ExactScalar:
    re, im = sympy.expand(value).as_real_imag()
    re, im = sympy.Rational(re), sympy.Rational(im)
    return ExactScalar(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


class TableAlgebraEngine(AlgebraEngine):
    """
    Exact engine over a FiniteTable.

    Equality is exact, so `equal` never answers INDETERMINATE.
    """

    def __init__(self, table: FiniteTable, name: Optional[str] = None):
        super().__init__(name or table.name or f"table algebra of dim {table.dim}")
        self.table = table

    def one(self) -> Vector:
        return self.table.unit

    def mul(self, a: Vector, b: Vector) -> Vector:
        return self.table.mul(a, b)

    def _left_matrix(self, a: Vector) -> sympy.Matrix:
        columns = [self.table.mul(a, self.table.basis_vector(j)) for j in range(self.table.dim)]
        return sympy.Matrix(self.table.dim, self.table.dim, lambda i, j: _to_sympy(columns[j][i]))

    def inverse(self, a: Vector) -> Vector:
        table = self.table
        matrix = self._left_matrix(a)
        rhs = sympy.Matrix([_to_sympy(c) for c in table.unit])
        if table.modulus is not None:
            try:
                solution = matrix.inv_mod(table.modulus) * rhs
            except ValueError:
                raise NotInvertibleError(f"{self.element_to_json(a)} is not a unit mod {table.modulus}") from None
            return tuple(int(v) % table.modulus for v in solution)
        if matrix.det() == 0:
            raise NotInvertibleError(f"{self.element_to_json(a)} is not a unit")
        solution = matrix.LUsolve(rhs)
        return tuple(_from_sympy(v) for v in solution)

    def is_unit(self, a: Vector) -> bool:
        try:
            self.inverse(a)
        except NotInvertibleError:
            return False
        return True

    def equal(self, a: Vector, b: Vector, window: Optional[int] = None) -> VerificationStatus:
        return VerificationStatus.TRUE if tuple(a) == tuple(b) else VerificationStatus.FALSE

    def generators(self) -> List[Vector]:
        return [self.table.basis_vector(i) for i in range(self.table.dim)]

    def scalar(self, value: Any) -> Vector:
        """
        Central element value·1.

        RCx values are accepted when they are fourth roots of unity, the only
        roots of unity with exact Gaussian-rational coordinates.
        """
        if isinstance(value, RCxValue):
            value = self._root_of_unity(value)
        return self.table.scale(self.table.coefficient(value), self.table.unit)

    def _root_of_unity(self, value: RCxValue) -> Any:
        quarter = value.t * 4
        if value.u != 0 or quarter.denominator != 1:
            raise ValueError(f"scalar e^(2πi·{value.t})·e^({value.u}) has no exact form in {self.name}")
        power = int(quarter) % 4
        if self.table.modulus is not None:
            if power % 2:
                raise ValueError(f"i has no image in Z/{self.table.modulus}")
            return 1 if power == 0 else -1
        return (ONE, I_UNIT, ExactScalar(-1), ExactScalar(0, -1))[power]

    def scalar_ratio(self, a: Vector, b: Vector) -> Optional[Vector]:
        table = self.table
        pivot = next((k for k, c in enumerate(b) if c), None)
        if pivot is None:
            return None
        if table.modulus is not None:
            try:
                rho = a[pivot] * pow(int(b[pivot]), -1, table.modulus)
            except ValueError:
                return None
        else:
            rho = a[pivot] / b[pivot]
        if table.scale(rho, b) != tuple(a):
            return None
        return self.scalar(rho)

    def linear_map(self, images: Sequence[Vector], a: Vector) -> Vector:
        acc = tuple(self.table.zero_coefficient for _ in range(self.table.dim))
        for coeff, image in zip(a, images):
            if coeff:
                acc = self.table.add(acc, self.table.scale(coeff, image))
        return acc

    def element_to_json(self, a: Vector) -> List[Any]:
        return [coefficient_to_json(c) for c in a]

    def element_from_json(self, raw: Any) -> Vector:
        if not isinstance(raw, (list, tuple)) or len(raw) != self.table.dim:
            raise ValueError(f"{self.name} elements are lists of {self.table.dim} coefficients")
        return tuple(self.table.coefficient(_parse_coefficient(c)) for c in raw)

    def descriptor(self) -> Dict:
        return self.table.to_json()


def _parse_coefficient(raw: Any) -> Any:
    if isinstance(raw, (list, tuple)):
        return ExactScalar.from_json(raw)
    return parse_rational(raw)
