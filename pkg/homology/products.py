"""
Cup products, tensor products of complexes and pullbacks.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from exceptions import PairingError
from homology.coefficients import CoefficientGroup, CoefficientKind
from homology.complexes import Cochain, CochainComplex, nerve_complex
from homology.nerve import CoverNerve, point

logger = logging.getLogger(__name__)


def _pairing(left: CoefficientGroup, right: CoefficientGroup):
    """(result group, value product) for a coefficient pairing, or PairingError."""
    if left.kind is CoefficientKind.Z:
        return right, lambda a, b: right.times(b, a)
    if right.kind is CoefficientKind.Z:
        return left, lambda a, b: left.times(a, b)
    if left == right and left.kind in (CoefficientKind.ZMOD, CoefficientKind.Q):
        return left, lambda a, b: left.normalize(a * b)
    raise PairingError(left.label, right.label)


def cup_product(a: Cochain, b: Cochain) -> Cochain:
    """
    Alexander–Whitney cup product on a nerve complex.

    (a⌣b)(v₀…v_{p+q}) = a(v₀…v_p)·b(v_p…v_{p+q}). A ℤ-valued factor pairs
    with any coefficient group; ℤ/m pairs with ℤ/m and ℚ with ℚ.
    """
    nerve = a.complex.nerve
    if nerve is None or b.complex.nerve is None or a.complex.bases != b.complex.bases:
        raise ValueError("cup product needs two cochains on the same nerve complex")
    group, product = _pairing(a.coefficient, b.coefficient)
    p, q = a.degree, b.degree
    values = []
    for simplex in nerve.simplices(p + q):
        values.append(product(a.value(simplex[: p + 1]), b.value(simplex[p:])))
    return Cochain(a.complex, p + q, tuple(values), group)


def tensor_total_complex(left: CochainComplex, right: CochainComplex) -> CochainComplex:
    """
    Total complex of C ⊗ D: degree n is ⊕_{p+q=n} C^p ⊗ D^q with
    d(x⊗y) = dx⊗y + (−1)^p x⊗dy. Basis labels are ((p, x), (q, y)).
    """
    if left.coefficient != right.coefficient:
        raise PairingError(left.coefficient.label, right.coefficient.label)
    top = left.top_degree + right.top_degree
    bases: List[Tuple] = []
    positions: List[Dict[Tuple[int, int, int], int]] = []
    for n in range(top + 1):
        basis = []
        where = {}
        for p in range(max(0, n - right.top_degree), min(n, left.top_degree) + 1):
            q = n - p
            for ix, x in enumerate(left.basis(p)):
                for iy, y in enumerate(right.basis(q)):
                    where[(p, ix, iy)] = len(basis)
                    basis.append(((p, x), (q, y)))
        bases.append(tuple(basis))
        positions.append(where)

    differentials = []
    for n in range(top):
        rows = []
        for label in bases[n + 1]:
            (p, x), (q, y) = label
            ix, iy = left.index(p, x), right.index(q, y)
            row = []
            if p >= 1:
                for col, coeff in left.sparse(p - 1)[ix]:
                    row.append((positions[n][(p - 1, col, iy)], coeff))
            if q >= 1:
                sign = -1 if p % 2 else 1
                for col, coeff in right.sparse(q - 1)[iy]:
                    row.append((positions[n][(p, ix, col)], sign * coeff))
            rows.append(tuple(row))
        differentials.append(tuple(rows))
    name = f"{left.name or 'C'}x{right.name or 'D'}"
    logger.debug(f"tensor complex {name}: ranks {[len(b) for b in bases]}")
    return CochainComplex(tuple(bases), tuple(differentials), left.coefficient, name)


def point_complex(coefficient: Optional[CoefficientGroup] = None) -> CochainComplex:
    """Čech complex of the one-vertex nerve."""
    return nerve_complex(point(), coefficient)


def _sorting_sign(image: Sequence[int]) -> int:
    sign = 1
    items = list(image)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def pullback(
    vertex_map: Sequence[int],
    source: CoverNerve,
    c: Cochain,
) -> Cochain:
    """
    Pull a cochain on the target nerve back along a simplicial vertex map.

    (f*c)(σ) = sign·c(sorted f(σ)) when f(σ) has distinct vertices, 0 when
    f collapses σ.
    """
    target = c.complex.nerve
    if target is None:
        raise ValueError("pullback needs a cochain on a nerve complex")
    if len(vertex_map) != source.vertices:
        raise ValueError(f"vertex map has {len(vertex_map)} entries, source has {source.vertices} vertices")
    group = c.coefficient
    complex = nerve_complex(source, group)
    values = []
    for simplex in source.simplices(c.degree):
        image = [vertex_map[v] for v in simplex]
        if not target.contains(sorted(set(image))):
            raise ValueError(f"vertex map is not simplicial: {list(simplex)} -> {image}")
        if len(set(image)) < len(image):
            values.append(group.zero())
            continue
        value = c.value(tuple(sorted(image)))
        values.append(value if _sorting_sign(image) > 0 else group.neg(value))
    return Cochain(complex, c.degree, tuple(values), group)
