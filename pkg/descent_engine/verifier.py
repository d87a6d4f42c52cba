"""
Descent Identity Verifier.

Checks the gluing identities of algebroid descent data and of the functor,
transformation and module data built on top of it.

═══════════════════════════════════════════════════════════════════════════
CORE CONTRACT:
═══════════════════════════════════════════════════════════════════════════

- A false identity is a Violation inside the returned CheckResult, never
  an exception
- Missing data raises IncompleteDataError before anything is checked
- Identities between morphisms are decided on the source generators;
  identities containing a unit a are tested as lhs·a = a·rhs so no
  inverse is ever truncated
- Violations are reported in (dimension, simplex) order whatever the
  thread schedule
═══════════════════════════════════════════════════════════════════════════
"""

import logging
from typing import Any, Callable, List, Optional, Sequence

from data_models import CheckResult, VerificationStatus, Violation
from descent_engine.base import AlgebraEngine
from descent_engine.data import AlgebroidDescentData, FunctorData, ModuleData, TransformationData
from descent_engine.morphisms import apply_morphism
from homology.nerve import Simplex
from services.parallel import ordered_map

logger = logging.getLogger(__name__)


def _compare(engine: AlgebraEngine, lhs: Any, rhs: Any, window: Optional[int]) -> VerificationStatus:
    return engine.equal(lhs, rhs, window)


def _unit_violation(engine: AlgebraEngine, element: Any, simplex: Simplex, what: str) -> List[Violation]:
    if engine.is_unit(element):
        return []
    return [Violation(simplex, "unit", f"{what} on {list(simplex)} is not a unit")]


def _status_violation(status: VerificationStatus, simplex: Simplex, identity: str, message: str) -> List[Violation]:
    if status is VerificationStatus.TRUE:
        return []
    if status is VerificationStatus.INDETERMINATE:
        message = f"{message} (window too small to decide)"
    return [Violation(simplex, identity, message, status)]


def _run(
    simplices: Sequence[Simplex],
    check: Callable[[Simplex], List[Violation]],
    what: str,
) -> CheckResult:
    found = ordered_map(check, simplices)
    result = CheckResult.from_violations([v for vs in found for v in vs], checked=len(simplices))
    first = result.first_violation
    if first is None:
        logger.info(f"{what}: {result.status.value} on {result.checked} simplices")
    else:
        logger.info(f"{what}: {result.status.value}, first violation {first.identity} on {list(first.simplex)}")
    return result


# =============================================================================
# ALGEBROID DESCENT DATA
# =============================================================================

def verify_descent(data: AlgebroidDescentData, window: Optional[int] = None) -> CheckResult:
    """
    f_ij∘f_jk = ad(a_ijk)∘f_ik on every triangle and
    a_ijk·a_ikl = f_ij(a_jkl)·a_ijl on every tetrahedron.
    """
    data.require_complete()
    nerve = data.nerve

    def triangle(s: Simplex) -> List[Violation]:
        i, j, k = s
        target, source = data.algebra(i), data.algebra(k)
        a = data.unit(i, j, k)
        out = _unit_violation(target, a, s, "a")
        f_ij, f_jk, f_ik = data.morphism(i, j), data.morphism(j, k), data.morphism(i, k)
        statuses = []
        for x in source.generators():
            via_j = apply_morphism(target, f_ij, apply_morphism(data.algebra(j), f_jk, x))
            direct = apply_morphism(target, f_ik, x)
            status = _compare(target, target.mul(via_j, a), target.mul(a, direct), window)
            statuses.append(status)
            if status is VerificationStatus.FALSE:
                break
        return out + _status_violation(
            VerificationStatus.combine(statuses), s, "triangle", "f_ij∘f_jk ≠ ad(a_ijk)∘f_ik"
        )

    def tetrahedron(s: Simplex) -> List[Violation]:
        i, j, k, l = s
        target = data.algebra(i)
        lhs = target.mul(data.unit(i, j, k), data.unit(i, k, l))
        rhs = target.mul(apply_morphism(target, data.morphism(i, j), data.unit(j, k, l)), data.unit(i, j, l))
        return _status_violation(
            _compare(target, lhs, rhs, window), s, "tetrahedron", "a_ijk·a_ikl ≠ f_ij(a_jkl)·a_ijl"
        )

    simplices = list(nerve.simplices(2)) + list(nerve.simplices(3))

    def check(s: Simplex) -> List[Violation]:
        return triangle(s) if len(s) == 3 else tetrahedron(s)

    return _run(simplices, check, "descent data")


# =============================================================================
# FUNCTOR DATA
# =============================================================================

def verify_functor_data(
    source: AlgebroidDescentData,
    target: AlgebroidDescentData,
    functor: FunctorData,
    window: Optional[int] = None,
) -> CheckResult:
    """
    g_i∘f_ij = ad(b_ij)∘f'_ij∘g_j on edges and
    g_i(a_ijk)·b_ik = b_ij·f'_ij(b_jk)·a'_ijk on triangles.
    """
    source.require_complete()
    target.require_complete()
    nerve = source.nerve
    for v in range(nerve.vertices):
        functor.functor(v)
    for edge in nerve.simplices(1):
        functor.correction(*edge)

    def edge(s: Simplex) -> List[Violation]:
        i, j = s
        alg_i = target.algebra(i)
        b = functor.correction(i, j)
        out = _unit_violation(alg_i, b, s, "b")
        g_i, g_j = functor.functor(i), functor.functor(j)
        f, f2 = source.morphism(i, j), target.morphism(i, j)
        statuses = []
        for x in source.algebra(j).generators():
            lhs = apply_morphism(alg_i, g_i, apply_morphism(source.algebra(i), f, x))
            rhs = apply_morphism(alg_i, f2, apply_morphism(target.algebra(j), g_j, x))
            status = _compare(alg_i, alg_i.mul(lhs, b), alg_i.mul(b, rhs), window)
            statuses.append(status)
            if status is VerificationStatus.FALSE:
                break
        return out + _status_violation(
            VerificationStatus.combine(statuses), s, "functor_edge", "g_i∘f_ij ≠ ad(b_ij)∘f'_ij∘g_j"
        )

    def triangle(s: Simplex) -> List[Violation]:
        i, j, k = s
        alg_i = target.algebra(i)
        lhs = alg_i.mul(apply_morphism(alg_i, functor.functor(i), source.unit(i, j, k)), functor.correction(i, k))
        rhs = alg_i.product(
            functor.correction(i, j),
            apply_morphism(alg_i, target.morphism(i, j), functor.correction(j, k)),
            target.unit(i, j, k),
        )
        return _status_violation(
            _compare(alg_i, lhs, rhs, window), s, "functor_triangle", "g_i(a_ijk)·b_ik ≠ b_ij·f'_ij(b_jk)·a'_ijk"
        )

    simplices = list(nerve.simplices(1)) + list(nerve.simplices(2))

    def check(s: Simplex) -> List[Violation]:
        return edge(s) if len(s) == 2 else triangle(s)

    return _run(simplices, check, "functor data")


# =============================================================================
# TRANSFORMATION DATA
# =============================================================================

def verify_transformation(
    source: AlgebroidDescentData,
    target: AlgebroidDescentData,
    first: FunctorData,
    second: FunctorData,
    transformation: TransformationData,
    window: Optional[int] = None,
) -> CheckResult:
    """
    d_i·g_i(x) = g'_i(x)·d_i on generators of A_i and
    d_i·b_ij = b'_ij·f'_ij(d_j) on edges.
    """
    target.require_complete()
    nerve = source.nerve
    for v in range(nerve.vertices):
        transformation.unit(v)

    def vertex(s: Simplex) -> List[Violation]:
        (i,) = s
        alg_i = target.algebra(i)
        d = transformation.unit(i)
        out = _unit_violation(alg_i, d, s, "d")
        g, g2 = first.functor(i), second.functor(i)
        statuses = []
        for x in source.algebra(i).generators():
            lhs = alg_i.mul(d, apply_morphism(alg_i, g, x))
            rhs = alg_i.mul(apply_morphism(alg_i, g2, x), d)
            status = _compare(alg_i, lhs, rhs, window)
            statuses.append(status)
            if status is VerificationStatus.FALSE:
                break
        return out + _status_violation(
            VerificationStatus.combine(statuses), s, "intertwining", "d_i·g_i ≠ g'_i·d_i"
        )

    def edge(s: Simplex) -> List[Violation]:
        i, j = s
        alg_i = target.algebra(i)
        lhs = alg_i.mul(transformation.unit(i), first.correction(i, j))
        rhs = alg_i.mul(second.correction(i, j), apply_morphism(alg_i, target.morphism(i, j), transformation.unit(j)))
        return _status_violation(
            _compare(alg_i, lhs, rhs, window), s, "transformation", "d_i·b_ij ≠ b'_ij·f'_ij(d_j)"
        )

    simplices = list(nerve.simplices(0)) + list(nerve.simplices(1))

    def check(s: Simplex) -> List[Violation]:
        return vertex(s) if len(s) == 1 else edge(s)

    return _run(simplices, check, "transformation data")


# =============================================================================
# MODULE DATA
# =============================================================================

def verify_module_data(
    data: AlgebroidDescentData,
    module: ModuleData,
    window: Optional[int] = None,
) -> CheckResult:
    """f_ij(p_jk)·p_ij = a_ijk·p_ik on every triangle, p_ij units."""
    data.require_complete()
    nerve = data.nerve
    for edge in nerve.simplices(1):
        module.unit(*edge)

    def edge(s: Simplex) -> List[Violation]:
        i, _ = s
        return _unit_violation(data.algebra(i), module.unit(*s), s, "p")

    def triangle(s: Simplex) -> List[Violation]:
        i, j, k = s
        alg_i = data.algebra(i)
        lhs = alg_i.mul(apply_morphism(alg_i, data.morphism(i, j), module.unit(j, k)), module.unit(i, j))
        rhs = alg_i.mul(data.unit(i, j, k), module.unit(i, k))
        return _status_violation(
            _compare(alg_i, lhs, rhs, window), s, "module", "f_ij(p_jk)·p_ij ≠ a_ijk·p_ik"
        )

    simplices = list(nerve.simplices(1)) + list(nerve.simplices(2))

    def check(s: Simplex) -> List[Violation]:
        return edge(s) if len(s) == 2 else triangle(s)

    return _run(simplices, check, "module data")
