"""
Algebra morphisms between local algebras.

Every morphism is a composite of four kinds: the identity, an inner
automorphism ad(P), a sector shift ad(∂₁^λ) and (for table algebras) a
linear map given by the images of the basis. Composites are stored as the
list of parts applied right to left and simplified on construction.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from data_models import VerificationStatus
from descent_engine.base import AlgebraEngine
from symcore import format_rational, parse_rational

logger = logging.getLogger(__name__)


class MorphismKind(Enum):
    IDENTITY = "identity"
    AD_CONJ = "ad"
    SECTOR_SHIFT = "shift"
    TABLE = "table"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class Morphism:
    kind: MorphismKind
    element: Any = None
    shift: Fraction = Fraction(0)
    images: Tuple[Any, ...] = ()
    parts: Tuple["Morphism", ...] = ()

    def __repr__(self) -> str:
        if self.kind is MorphismKind.SECTOR_SHIFT:
            return f"Shift({self.shift})"
        if self.kind is MorphismKind.COMPOSITE:
            return " ∘ ".join(repr(p) for p in self.parts)
        return self.kind.name.capitalize()


IDENTITY = Morphism(MorphismKind.IDENTITY)


def ad(element: Any) -> Morphism:
    return Morphism(MorphismKind.AD_CONJ, element=element)


def sector_shift(lam: Any) -> Morphism:
    lam = parse_rational(lam)
    if lam == 0:
        return IDENTITY
    return Morphism(MorphismKind.SECTOR_SHIFT, shift=lam)


def table_map(images) -> Morphism:
    return Morphism(MorphismKind.TABLE, images=tuple(tuple(v) for v in images))


def compose(*morphisms: Morphism, engine: Optional[AlgebraEngine] = None) -> Morphism:
    """
    m₁ ∘ m₂ ∘ … (the last one is applied first).

    Identities are dropped and adjacent shifts merged. With an engine, an
    ad(P) whose P is a power of ∂₁ becomes the matching shift.
    """
    flat = []
    for m in morphisms:
        flat.extend(m.parts if m.kind is MorphismKind.COMPOSITE else (m,))
    parts = []
    for m in flat:
        if m.kind is MorphismKind.AD_CONJ and engine is not None:
            mu = engine.shift_exponent(m.element)
            if mu is not None:
                m = sector_shift(mu)
        if m.kind is MorphismKind.IDENTITY:
            continue
        if m.kind is MorphismKind.SECTOR_SHIFT and parts and parts[-1].kind is MorphismKind.SECTOR_SHIFT:
            merged = sector_shift(parts[-1].shift + m.shift)
            parts.pop()
            if merged.kind is not MorphismKind.IDENTITY:
                parts.append(merged)
            continue
        parts.append(m)
    if not parts:
        return IDENTITY
    if len(parts) == 1:
        return parts[0]
    return Morphism(MorphismKind.COMPOSITE, parts=tuple(parts))


def apply_morphism(engine: AlgebraEngine, m: Morphism, x: Any) -> Any:
    """m(x), computed in the target engine."""
    kind = m.kind
    if kind is MorphismKind.IDENTITY:
        return x
    if kind is MorphismKind.AD_CONJ:
        return engine.conjugate(m.element, x)
    if kind is MorphismKind.SECTOR_SHIFT:
        return engine.sector_shift(m.shift, x)
    if kind is MorphismKind.TABLE:
        return engine.linear_map(m.images, x)
    for part in reversed(m.parts):
        x = apply_morphism(engine, part, x)
    return x


def shift_of(m: Morphism) -> Optional[Fraction]:
    """λ when m is ad(∂₁^λ) (the identity counts as λ = 0), else None."""
    if m.kind is MorphismKind.IDENTITY:
        return Fraction(0)
    if m.kind is MorphismKind.SECTOR_SHIFT:
        return m.shift
    return None


def ad_element(engine: AlgebraEngine, m: Morphism) -> Optional[Any]:
    """
    An element P with m = ad(P), or None when m has a table part.

    Shifts contribute ∂₁^λ, so the product may have fractional order.
    """
    kind = m.kind
    if kind is MorphismKind.IDENTITY:
        return engine.one()
    if kind is MorphismKind.AD_CONJ:
        return m.element
    if kind is MorphismKind.SECTOR_SHIFT:
        return engine.shift_unit(m.shift)
    if kind is MorphismKind.TABLE:
        return None
    result = engine.one()
    for part in m.parts:
        element = ad_element(engine, part)
        if element is None:
            return None
        result = engine.mul(result, element)
    return result


def morphisms_agree(
    source: AlgebraEngine,
    target: AlgebraEngine,
    left: Morphism,
    right: Morphism,
    window: Optional[int] = None,
) -> VerificationStatus:
    """Compare two morphisms source → target on the source generators."""
    statuses = []
    for g in source.generators():
        status = target.equal(apply_morphism(target, left, g), apply_morphism(target, right, g), window)
        if status is VerificationStatus.FALSE:
            return status
        statuses.append(status)
    return VerificationStatus.combine(statuses)


def is_multiplicative(source: AlgebraEngine, target: AlgebraEngine, m: Morphism) -> bool:
    """m(ab) = m(a)m(b) on generator pairs and m(1) = 1; used to vet table maps."""
    gens = source.generators()
    if target.equal(apply_morphism(target, m, source.one()), target.one()) is VerificationStatus.FALSE:
        return False
    for a in gens:
        for b in gens:
            lhs = apply_morphism(target, m, source.mul(a, b))
            rhs = target.mul(apply_morphism(target, m, a), apply_morphism(target, m, b))
            if target.equal(lhs, rhs) is VerificationStatus.FALSE:
                return False
    return True


# =============================================================================
# JSON
# =============================================================================

def morphism_to_json(engine: AlgebraEngine, m: Morphism) -> Dict:
    kind = m.kind
    if kind is MorphismKind.IDENTITY:
        return {"kind": "identity"}
    if kind is MorphismKind.AD_CONJ:
        return {"kind": "ad", "element": engine.element_to_json(m.element)}
    if kind is MorphismKind.SECTOR_SHIFT:
        return {"kind": "shift", "lambda": format_rational(m.shift)}
    if kind is MorphismKind.TABLE:
        return {"kind": "table", "images": [engine.element_to_json(v) for v in m.images]}
    return {"kind": "composite", "parts": [morphism_to_json(engine, p) for p in m.parts]}


def morphism_from_json(engine: AlgebraEngine, raw: Dict) -> Morphism:
    kind = raw.get("kind")
    if kind == "identity":
        return IDENTITY
    if kind == "ad":
        return ad(engine.element_from_json(raw["element"]))
    if kind == "shift":
        return sector_shift(raw["lambda"])
    if kind == "table":
        return table_map(engine.element_from_json(v) for v in raw["images"])
    if kind == "composite":
        return compose(*(morphism_from_json(engine, p) for p in raw["parts"]))
    raise ValueError(f"unknown morphism kind {kind!r}")
