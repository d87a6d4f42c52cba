"""
Čech cohomology with abelian coefficients.

Every computation starts from the integer matrices of the complex:

    H^k(ℤ)    = ker d_k / im d_{k-1}, presented through two Smith forms
    H^k(ℤ/m)  = ker(d_k mod m) / im(d_{k-1} mod m)
    H^k(ℚ)    = rational rank of H^k(ℤ)
    H^k(ℚ/ℤ)  ≅ H^k(ℚ)/H^k(ℤ)_free ⊕ Tors H^{k+1}(ℤ)
    H^k(RCx)  = H^k(ℚ/ℤ) ⊕ H^k(ℚ)

A presentation records the invariant factors and a coordinate map that
sends any cocycle to its coordinates. Coordinates are a flat tuple laid
out as torsion entries (ints mod d_i), then free entries (ints), circle
entries (Fractions mod 1) and rational entries (Fractions).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

from config import get_settings
from exceptions import CocycleError
from homology.coefficients import CoefficientGroup, CoefficientKind, RCxValue, Z
from homology.complexes import Cochain, CochainComplex, nerve_complex
from homology.nerve import CoverNerve
from homology.smith import SmithResult, mat_vec, smith_decomposition, solve_integer
from symcore import format_rational, frac_part

logger = logging.getLogger(__name__)

Coordinates = Tuple[Any, ...]

TORSION = "torsion"
FREE = "free"
CIRCLE = "circle"
RATIONAL = "rational"


# =============================================================================
# PRESENTATION
# =============================================================================

@dataclass(frozen=True)
class AbelianGroupPresentation:
    """
    H^k(C; M) ≅ ⊕ ℤ/d_i ⊕ ℤ^free ⊕ (ℚ/ℤ)^circle ⊕ ℚ^rational.

    Attributes:
        torsion: invariant factors d₁ | d₂ | …, all > 1
        generators: representing cocycles for the torsion, free and
            rational summands, in coordinate order
        directions: integer cocycles g with t·g representing t on the
            matching circle summand
    """
    coefficient: CoefficientGroup
    degree: int
    free_rank: int = 0
    torsion: Tuple[int, ...] = ()
    circle_rank: int = 0
    rational_rank: int = 0
    generators: Tuple[Cochain, ...] = field(default=(), compare=False, repr=False)
    directions: Tuple[Cochain, ...] = field(default=(), compare=False, repr=False)
    coordinator: Optional[Callable[[Cochain], Coordinates]] = field(default=None, compare=False, repr=False)

    def layout(self) -> List[Tuple[str, Optional[int]]]:
        """(summand kind, modulus) per coordinate position."""
        return (
            [(TORSION, d) for d in self.torsion]
            + [(FREE, None)] * self.free_rank
            + [(CIRCLE, 1)] * self.circle_rank
            + [(RATIONAL, None)] * self.rational_rank
        )

    def order(self) -> Optional[int]:
        """Group order, None when infinite."""
        if self.free_rank or self.circle_rank or self.rational_rank:
            return None
        return prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.order() == 1

    def coordinates(self, cochain: Cochain) -> Coordinates:
        if cochain.coefficient != self.coefficient:
            raise ValueError(f"cochain over {cochain.coefficient}, presentation over {self.coefficient}")
        if cochain.degree != self.degree:
            raise ValueError(f"degree-{cochain.degree} cochain, presentation in degree {self.degree}")
        return self.coordinator(cochain)

    def zero_coordinates(self) -> Coordinates:
        return tuple(Fraction(0) if kind in (CIRCLE, RATIONAL) else 0 for kind, _ in self.layout())

    def reduce(self, coords: Sequence[Any]) -> Coordinates:
        out = []
        for (kind, modulus), value in zip(self.layout(), coords):
            if kind == TORSION:
                out.append(int(value) % modulus)
            elif kind == CIRCLE:
                out.append(frac_part(Fraction(value)))
            elif kind == RATIONAL:
                out.append(Fraction(value))
            else:
                out.append(int(value))
        return tuple(out)

    def add_coordinates(self, a: Sequence[Any], b: Sequence[Any]) -> Coordinates:
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg_coordinates(self, a: Sequence[Any]) -> Coordinates:
        return self.reduce([-x for x in a])

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        if self.circle_rank:
            parts.append("Q/Z" if self.circle_rank == 1 else f"(Q/Z)^{self.circle_rank}")
        if self.rational_rank:
            parts.append("Q" if self.rational_rank == 1 else f"Q^{self.rational_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "kind": "presentation",
            "coeff": self.coefficient.label,
            "degree": self.degree,
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "circle_rank": self.circle_rank,
            "rational_rank": self.rational_rank,
            "order": self.order(),
            "display": self.describe(),
            "generators": [g.to_json()["values"] for g in self.generators],
        }


def coordinates_to_json(coords: Sequence[Any]) -> List[Any]:
    return [format_rational(c) if isinstance(c, Fraction) else int(c) for c in coords]


# =============================================================================
# INTEGRAL STRUCTURE (cached per complex, degree and SNF check flag)
# =============================================================================

def _structure_key(complex: CochainComplex) -> Tuple:
    return (tuple(len(b) for b in complex.bases), complex.differentials)


def _dense(key: Tuple, k: int) -> List[List[int]]:
    dims, differentials = key
    def dim(j):
        return dims[j] if 0 <= j < len(dims) else 0
    rows = differentials[k] if 0 <= k < len(differentials) else tuple(() for _ in range(dim(k + 1)))
    dense = []
    for row in rows:
        line = [0] * dim(k)
        for col, coeff in row:
            line[col] += coeff
        dense.append(line)
    return dense


@dataclass(frozen=True)
class _DegreeData:
    """Smith data for ker d_k / im d_{k-1} in one degree."""
    n: int
    prev_n: int
    smith_d: SmithResult        # of d_k
    image: List[List[int]]       # (V⁻¹·d_{k-1}) restricted to kernel rows
    smith_image: SmithResult     # of `image`
    torsion_positions: Tuple[int, ...]
    free_positions: Tuple[int, ...]
    generator_columns: Tuple[Tuple[int, ...], ...]  # integer cochains, per quotient coordinate

    @property
    def rank(self) -> int:
        return self.smith_d.rank

    def kernel_coords(self, z: Sequence) -> list:
        return mat_vec(self.smith_d.V_inv, z)[self.rank:]

    def quotient_coords(self, z: Sequence) -> list:
        return mat_vec(self.smith_image.U, self.kernel_coords(z))


@lru_cache(maxsize=512)
def _degree_data(key: Tuple, k: int, checked: bool) -> _DegreeData:
    """Smith data of one degree; `checked` keys the cache on the SNF check flag."""
    dims = key[0]
    n = dims[k] if 0 <= k < len(dims) else 0
    prev_n = dims[k - 1] if 1 <= k <= len(dims) else 0
    d_k = _dense(key, k)
    smith_d = smith_decomposition(d_k, cols=n)
    r = smith_d.rank
    d_prev = _dense(key, k - 1)
    moved = [[sum(v * d_prev[t][j] for t, v in enumerate(row)) for j in range(prev_n)] for row in smith_d.V_inv]
    image = moved[r:]
    smith_image = smith_decomposition(image, cols=prev_n)
    m = n - r
    r2 = smith_image.rank
    torsion_positions = tuple(i for i in range(r2) if smith_image.diagonal[i] > 1)
    free_positions = tuple(range(r2, m))
    generator_columns = []
    for i in range(m):
        # kernel basis columns V[:, r:] times column i of U'⁻¹
        column = tuple(
            sum(smith_d.V[row][r + j] * smith_image.U_inv[j][i] for j in range(m)) for row in range(n)
        )
        generator_columns.append(column)
    logger.debug(f"degree {k}: kernel rank {m}, image rank {r2}, torsion {[smith_image.diagonal[i] for i in torsion_positions]}")
    return _DegreeData(
        n, prev_n, smith_d, image, smith_image, torsion_positions, free_positions, tuple(generator_columns)
    )


def _checked() -> bool:
    return get_settings().check_snf


def _data(complex: CochainComplex, k: int) -> _DegreeData:
    return _degree_data(_structure_key(complex), k, _checked())


def _require_integer_cocycle(complex: CochainComplex, k: int, values: Sequence[int]) -> None:
    for row_index, value in enumerate(complex.apply(k, values, Z)):
        if value != 0:
            raise CocycleError("cochain is not a cocycle", _simplex_of(complex, k + 1, row_index))


def _simplex_of(complex: CochainComplex, k: int, index: int):
    label = complex.basis(k)[index]
    return label if isinstance(label, tuple) and all(isinstance(v, int) for v in label) else None


# =============================================================================
# PER-COEFFICIENT PRESENTATIONS
# =============================================================================

def _integral(complex: CochainComplex, k: int) -> AbelianGroupPresentation:
    data = _data(complex, k)
    diag = data.smith_image.diagonal
    gens = tuple(
        Cochain(complex, k, data.generator_columns[i], Z)
        for i in data.torsion_positions + data.free_positions
    )

    def coordinator(c: Cochain) -> Coordinates:
        values = [int(v) for v in c.values]
        _require_integer_cocycle(complex, k, values)
        y = data.quotient_coords(values)
        return tuple(y[i] % diag[i] for i in data.torsion_positions) + tuple(y[i] for i in data.free_positions)

    return AbelianGroupPresentation(
        coefficient=Z,
        degree=k,
        free_rank=len(data.free_positions),
        torsion=tuple(diag[i] for i in data.torsion_positions),
        generators=gens,
        coordinator=coordinator,
    )


@dataclass(frozen=True)
class _ModularData:
    scales: Tuple[int, ...]     # y_i = scale_i · c_i on kernel coordinates
    orders: Tuple[int, ...]
    smith_relations: SmithResult
    positions: Tuple[int, ...]  # quotient coordinates with d > 1


@lru_cache(maxsize=512)
def _modular_data(key: Tuple, k: int, m: int, checked: bool) -> _ModularData:
    data = _degree_data(key, k, checked)
    n, r = data.n, data.rank
    scales, orders = [], []
    for i in range(n):
        if i < r:
            g = gcd(data.smith_d.diagonal[i], m)
            scales.append(m // g)
            orders.append(g)
        else:
            scales.append(1)
            orders.append(m)
    relations = []
    for i in range(n):
        row = [orders[i] if j == i else 0 for j in range(n)]
        row += [x % m for x in data.image[i - r]] if i >= r else [0] * data.prev_n
        relations.append(row)
    smith_relations = smith_decomposition(relations, cols=n + data.prev_n)
    positions = tuple(i for i, d in enumerate(smith_relations.diagonal) if d > 1)
    return _ModularData(tuple(scales), tuple(orders), smith_relations, positions)


def _modular(complex: CochainComplex, k: int, coefficient: CoefficientGroup) -> AbelianGroupPresentation:
    m = coefficient.modulus
    key = _structure_key(complex)
    checked = _checked()
    data = _degree_data(key, k, checked)
    mod = _modular_data(key, k, m, checked)
    diag = mod.smith_relations.diagonal
    gens = []
    for i in mod.positions:
        c = [mod.smith_relations.U_inv[j][i] for j in range(data.n)]
        y = [cj * s for cj, s in zip(c, mod.scales)]
        z = tuple(v % m for v in mat_vec(data.smith_d.V, y))
        gens.append(Cochain(complex, k, z, coefficient))

    def coordinator(c: Cochain) -> Coordinates:
        values = [int(v) % m for v in c.values]
        for row_index, value in enumerate(complex.apply(k, values, Z)):
            if value % m != 0:
                raise CocycleError(f"cochain is not a Z/{m} cocycle", _simplex_of(complex, k + 1, row_index))
        y = [v % m for v in mat_vec(data.smith_d.V_inv, values)]
        kernel = [(yi // s) % o for yi, s, o in zip(y, mod.scales, mod.orders)]
        q = mat_vec(mod.smith_relations.U, kernel)
        return tuple(q[i] % diag[i] for i in mod.positions)

    return AbelianGroupPresentation(
        coefficient=coefficient,
        degree=k,
        torsion=tuple(diag[i] for i in mod.positions),
        generators=tuple(gens),
        coordinator=coordinator,
    )


def _rational_coords(complex: CochainComplex, k: int, values: Sequence[Fraction]) -> Coordinates:
    data = _data(complex, k)
    y = data.quotient_coords(values)
    return tuple(Fraction(y[i]) for i in data.free_positions)


def _require_rational_cocycle(complex: CochainComplex, k: int, values: Sequence[Fraction]) -> None:
    for row_index, row in enumerate(complex.sparse(k)):
        if sum(values[col] * coeff for col, coeff in row) != 0:
            raise CocycleError("cochain is not a rational cocycle", _simplex_of(complex, k + 1, row_index))


def _rational(complex: CochainComplex, k: int, coefficient: CoefficientGroup) -> AbelianGroupPresentation:
    data = _data(complex, k)
    gens = tuple(
        Cochain(complex, k, tuple(Fraction(v) for v in data.generator_columns[i]), coefficient)
        for i in data.free_positions
    )

    def coordinator(c: Cochain) -> Coordinates:
        values = [Fraction(v) for v in c.values]
        _require_rational_cocycle(complex, k, values)
        return _rational_coords(complex, k, values)

    return AbelianGroupPresentation(
        coefficient=coefficient,
        degree=k,
        rational_rank=len(data.free_positions),
        generators=gens,
        coordinator=coordinator,
    )


class _CircleCoordinator:
    """
    Coordinates on H^k(ℚ/ℤ) = Tors H^{k+1}(ℤ) ⊕ (ℚ/ℤ)^free.

    The torsion part is the Bockstein class; subtracting the section
    τ ↦ Σ τ_i w_i/d_i (with d w_i = d_i c_i) leaves a class that lifts to a
    rational cocycle, whose free coordinates mod 1 give the circle part.
    """

    def __init__(self, complex: CochainComplex, k: int):
        self.complex = complex
        self.k = k
        self.data = _data(complex, k)
        self.upper = _data(complex, k + 1)
        self.torsion = tuple(self.upper.smith_image.diagonal[i] for i in self.upper.torsion_positions)
        self.sections: List[Tuple[Fraction, ...]] = []
        for i, d in zip(self.upper.torsion_positions, self.torsion):
            target = [d * v for v in self.upper.generator_columns[i]]
            w = solve_integer(self.data.smith_d, target, self.data.n)
            if w is None:
                raise ArithmeticError("torsion generator does not bound after scaling by its order")
            self.sections.append(tuple(Fraction(x, d) for x in w))

    def section_cochains(self, coefficient: CoefficientGroup, wrap) -> Tuple[Cochain, ...]:
        return tuple(Cochain(self.complex, self.k, tuple(wrap(v) for v in s), coefficient) for s in self.sections)

    def direction_cochains(self) -> Tuple[Cochain, ...]:
        return tuple(Cochain(self.complex, self.k, self.data.generator_columns[i], Z) for i in self.data.free_positions)

    def __call__(self, lifted: Sequence[Fraction]) -> Coordinates:
        complex, k = self.complex, self.k
        z = [frac_part(Fraction(v)) for v in lifted]
        b = []
        for row_index, row in enumerate(complex.sparse(k)):
            value = sum(z[col] * coeff for col, coeff in row)
            if Fraction(value).denominator != 1:
                raise CocycleError("cochain is not a Q/Z cocycle", _simplex_of(complex, k + 1, row_index))
            b.append(int(value))
        y = self.upper.quotient_coords(b)
        tau = [y[i] % d for i, d in zip(self.upper.torsion_positions, self.torsion)]
        for t, section in zip(tau, self.sections):
            z = [zi - t * si for zi, si in zip(z, section)]
        residual = [int(sum(z[col] * coeff for col, coeff in row)) for row in complex.sparse(k)]
        u = solve_integer(self.data.smith_d, residual, self.data.n)
        if u is None:
            raise ArithmeticError("Bockstein residual is not a coboundary")
        q = [zi - ui for zi, ui in zip(z, u)]
        circle = tuple(frac_part(c) for c in _rational_coords(complex, k, q))
        return tuple(tau) + circle


def _qmodz(complex: CochainComplex, k: int, coefficient: CoefficientGroup) -> AbelianGroupPresentation:
    engine = _CircleCoordinator(complex, k)

    def coordinator(c: Cochain) -> Coordinates:
        return engine([Fraction(v) for v in c.values])

    return AbelianGroupPresentation(
        coefficient=coefficient,
        degree=k,
        torsion=engine.torsion,
        circle_rank=len(engine.data.free_positions),
        generators=engine.section_cochains(coefficient, frac_part),
        directions=engine.direction_cochains(),
        coordinator=coordinator,
    )


def _rcx(complex: CochainComplex, k: int, coefficient: CoefficientGroup) -> AbelianGroupPresentation:
    engine = _CircleCoordinator(complex, k)
    data = engine.data
    gens = engine.section_cochains(coefficient, lambda v: RCxValue(v, 0)) + tuple(
        Cochain(complex, k, tuple(RCxValue(0, v) for v in data.generator_columns[i]), coefficient)
        for i in data.free_positions
    )

    def coordinator(c: Cochain) -> Coordinates:
        t_part = [v.t for v in c.values]
        u_part = [v.u for v in c.values]
        _require_rational_cocycle(complex, k, u_part)
        return engine(t_part) + _rational_coords(complex, k, u_part)

    return AbelianGroupPresentation(
        coefficient=coefficient,
        degree=k,
        torsion=engine.torsion,
        circle_rank=len(data.free_positions),
        rational_rank=len(data.free_positions),
        generators=gens,
        directions=engine.direction_cochains(),
        coordinator=coordinator,
    )


def cohomology(
    target: Union[CoverNerve, CochainComplex],
    coefficient: CoefficientGroup,
    k: int,
) -> AbelianGroupPresentation:
    """
    Presentation of H^k(target; coefficient).

    Args:
        target: a nerve (its Čech complex is used) or any cochain complex
        coefficient: Z, Z/m, Q, Q/Z or RCx
        k: degree, k ≥ 0
    """
    if k < 0:
        raise ValueError(f"cohomology degree must be >= 0, got {k}")
    complex = nerve_complex(target) if isinstance(target, CoverNerve) else target
    complex = complex.with_coefficient(coefficient)
    kind = coefficient.kind
    if kind is CoefficientKind.Z:
        result = _integral(complex, k)
    elif kind is CoefficientKind.ZMOD:
        result = _modular(complex, k, coefficient)
    elif kind is CoefficientKind.Q:
        result = _rational(complex, k, coefficient)
    elif kind is CoefficientKind.QMODZ:
        result = _qmodz(complex, k, coefficient)
    else:
        result = _rcx(complex, k, coefficient)
    logger.debug(f"H^{k}({complex.name or 'complex'}; {coefficient}) = {result.describe()}")
    return result


# =============================================================================
# HELPERS
# =============================================================================

def bockstein(c: Cochain) -> Cochain:
    """Integer cochain d(lift c) for a ℚ/ℤ cochain c lifted into [0, 1)."""
    if c.coefficient.kind is not CoefficientKind.QMODZ:
        raise ValueError("bockstein takes a Q/Z cochain")
    lifted = [frac_part(Fraction(v)) for v in c.values]
    values = []
    for row in c.complex.sparse(c.degree):
        value = sum(lifted[col] * coeff for col, coeff in row)
        if Fraction(value).denominator != 1:
            raise CocycleError("bockstein needs a Q/Z cocycle")
        values.append(int(value))
    return Cochain(c.complex, c.degree + 1, tuple(values), Z)


def _solve(smith: SmithResult, target: Sequence, cols: int, kind: CoefficientKind, m: Optional[int] = None):
    """Solve d·x = target in SNF coordinates; None when there is no solution."""
    rhs = mat_vec(smith.U, target)
    y: List[Any] = [0] * cols
    for i, value in enumerate(rhs):
        d = smith.diagonal[i] if i < smith.rank else 0
        if kind is CoefficientKind.ZMOD:
            value %= m
            if d == 0:
                if value != 0:
                    return None
                continue
            g = gcd(d, m)
            if value % g != 0:
                return None
            mm = m // g
            y[i] = (value // g) * pow(d // g, -1, mm) % mm if mm > 1 else 0
        elif kind is CoefficientKind.QMODZ:
            if d == 0:
                if Fraction(value).denominator != 1:
                    return None
                continue
            y[i] = Fraction(value) / d
        elif kind is CoefficientKind.Q:
            if d == 0:
                if value != 0:
                    return None
                continue
            y[i] = Fraction(value) / d
        else:
            if d == 0:
                if value != 0:
                    return None
                continue
            if value % d != 0:
                return None
            y[i] = value // d
    return mat_vec(smith.V, y)


def coboundary_preimage(y: Cochain) -> Optional[Cochain]:
    """
    A cochain x with dx = y, or None when y is not a coboundary.

    Works in every coefficient group; RCx splits into its ℚ/ℤ and ℚ parts.
    """
    complex, k = y.complex, y.degree - 1
    if k < 0:
        return None if not y.is_zero() else Cochain.zero(complex, -1, y.coefficient)
    data = _data(complex, k)
    group = y.coefficient
    kind = group.kind
    if kind is CoefficientKind.RCX:
        t = _solve(data.smith_d, [v.t for v in y.values], data.n, CoefficientKind.QMODZ)
        u = _solve(data.smith_d, [v.u for v in y.values], data.n, CoefficientKind.Q)
        if t is None or u is None:
            return None
        return Cochain(complex, k, tuple(RCxValue(a, b) for a, b in zip(t, u)), group)
    values = [Fraction(v) if kind in (CoefficientKind.Q, CoefficientKind.QMODZ) else int(v) for v in y.values]
    x = _solve(data.smith_d, values, data.n, kind, group.modulus)
    if x is None:
        return None
    return Cochain(complex, k, tuple(x), group)


def induced_map_matrix(
    source: AbelianGroupPresentation,
    target: AbelianGroupPresentation,
    cochain_map: Callable[[Cochain], Cochain],
) -> List[List[Any]]:
    """
    Matrix of the map on cohomology induced by a cochain map.

    Column j holds the target coordinates of the image of source
    generator j. Circle summands have no generators; sample them through
    ℤ/N coefficients instead.
    """
    if source.circle_rank:
        raise ValueError("induced_map_matrix needs finitely generated source summands")
    columns = [target.coordinates(cochain_map(g)) for g in source.generators]
    rows = len(target.layout())
    return [[columns[j][i] for j in range(len(columns))] for i in range(rows)]


def subgroup_order(vectors: Sequence[Sequence[int]], moduli: Sequence[int]) -> int:
    """Order of the subgroup of ⊕ ℤ/moduli_i generated by the given vectors."""
    n = len(moduli)
    if n == 0:
        return 1
    relations = []
    for i in range(n):
        row = [int(v[i]) % moduli[i] for v in vectors] + [moduli[i] if j == i else 0 for j in range(n)]
        relations.append(row)
    smith = smith_decomposition(relations, cols=len(vectors) + n)
    index = prod(smith.diagonal)
    return prod(moduli) // index
