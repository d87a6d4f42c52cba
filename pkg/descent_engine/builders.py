"""
Builders for descent data and its companions.

Every builder returns data that the verifier accepts; the solvers return
None when no data of the requested shape exists.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple

from data_models import VerificationStatus
from descent_engine.base import AlgebraEngine
from descent_engine.chart_engine import ChartAlgebraEngine, ScaledOperator
from descent_engine.data import AlgebroidDescentData, FunctorData, ModuleData, TransformationData
from descent_engine.morphisms import (
    IDENTITY, Morphism, MorphismKind, ad, ad_element, apply_morphism, compose,
    sector_shift, shift_of,
)
from descent_engine.verifier import verify_functor_data, verify_module_data
from exceptions import CocycleError, NormalFormError
from homology.coefficients import QMODZ, RCX, CoefficientKind, RCxValue, Z
from homology.cohomology import coboundary_preimage
from homology.complexes import Cochain, coboundary, nerve_complex
from homology.nerve import CoverNerve, Simplex
from microdiff import DEFAULT_WINDOW, sector_shift_generator
from symcore import frac_part

logger = logging.getLogger(__name__)


def _require_cocycle(cochain: Cochain, what: str) -> None:
    d = coboundary(cochain)
    for label, value in zip(cochain.complex.basis(cochain.degree + 1), d.values):
        if not d.coefficient.is_zero(value):
            raise CocycleError(f"{what} is not a cocycle", label)


def _require_cochain(cochain: Cochain, kind: CoefficientKind, degree: int, what: str) -> None:
    if cochain.coefficient.kind is not kind or cochain.degree != degree:
        raise ValueError(
            f"{what} must be a degree-{degree} {kind.value} cochain, "
            f"got degree {cochain.degree} over {cochain.coefficient}"
        )


# =============================================================================
# BASIC DATA
# =============================================================================

def trivial_descent(nerve: CoverNerve, engine: AlgebraEngine) -> AlgebroidDescentData:
    """f = id, a = 1 with the same algebra on every open set."""
    return AlgebroidDescentData(
        nerve,
        tuple(engine for _ in range(nerve.vertices)),
        {e: IDENTITY for e in nerve.simplices(1)},
        {t: engine.one() for t in nerve.simplices(2)},
    )


def integer_shift_descent(nerve: CoverNerve, m: Cochain, engine: ChartAlgebraEngine) -> AlgebroidDescentData:
    """
    f_ij = ad(∂₁^{m_ij}) for an integer 1-cocycle m, a = 1.

    Raises:
        CocycleError: dm ≠ 0, reported on the first failing triangle
    """
    _require_cochain(m, CoefficientKind.Z, 1, "shift cochain")
    _require_cocycle(m, "shift cochain")
    return AlgebroidDescentData(
        nerve,
        tuple(engine for _ in range(nerve.vertices)),
        {e: sector_shift(m[e]) for e in nerve.simplices(1)},
        {t: engine.one() for t in nerve.simplices(2)},
    )


def conjugate_descent(
    data: AlgebroidDescentData,
    units: Mapping[int, Any],
) -> Tuple[AlgebroidDescentData, FunctorData]:
    """
    Transport D along g_i = ad(u_i).

    f'_ij = ad(u_i)∘f_ij∘ad(u_j)⁻¹ and a'_ijk = u_i·a_ijk·u_i⁻¹; the
    returned FunctorData (g = ad(u), b = 1) relates D to the result.
    """
    nerve = data.nerve
    morphisms = {}
    for i, j in nerve.simplices(1):
        alg_j = data.algebra(j)
        morphisms[(i, j)] = compose(
            ad(units[i]), data.morphism(i, j), ad(alg_j.inverse(units[j])), engine=data.algebra(i)
        )
    new_units = {
        (i, j, k): data.algebra(i).conjugate(units[i], data.unit(i, j, k)) for i, j, k in nerve.simplices(2)
    }
    result = AlgebroidDescentData(nerve, data.algebras, morphisms, new_units)
    functor = FunctorData(
        {v: ad(units[v]) for v in range(nerve.vertices)},
        {e: data.algebra(e[0]).one() for e in nerve.simplices(1)},
    )
    return result, functor


# =============================================================================
# SOLVERS
# =============================================================================

def solve_functor_corrections(
    source: AlgebroidDescentData,
    target: AlgebroidDescentData,
    functors: Mapping[int, Morphism],
    window: Optional[int] = None,
) -> Optional[FunctorData]:
    """
    Corrections b_ij making (g, b) a functor from D to D'.

    Works when every morphism involved is inner up to sector shifts and all
    algebras are interchangeable. b_ij = c_ij·G_i·F_ij·G_j⁻¹·F'_ij⁻¹ where
    G, F, F' are elements inducing g, f, f' and the central factors c solve
    c_ik·ρ_ijk = c_ij·c_jk by propagation from c = 1 on a spanning forest.
    """
    nerve = source.nerve
    algebras = source.algebras + target.algebras
    if not all(algebras[0].compatible(a) for a in algebras[1:]):
        logger.debug("functor corrections need interchangeable local algebras")
        return None
    alg = algebras[0]

    base: Dict[Simplex, Any] = {}
    for i, j in nerve.simplices(1):
        parts = [
            ad_element(alg, functors[i]),
            ad_element(alg, source.morphism(i, j)),
            ad_element(alg, functors[j]),
            ad_element(alg, target.morphism(i, j)),
        ]
        if any(p is None for p in parts):
            return None
        g_i, f, g_j, f2 = parts
        b0 = alg.product(g_i, f, alg.inverse(g_j), alg.inverse(f2))
        if not alg.is_unit(b0):
            logger.debug(f"correction on {[i, j]} is not a unit")
            return None
        base[(i, j)] = b0

    ratios: Dict[Simplex, Any] = {}
    for i, j, k in nerve.simplices(2):
        lhs = alg.mul(apply_morphism(alg, functors[i], source.unit(i, j, k)), base[(i, k)])
        rhs = alg.product(base[(i, j)], apply_morphism(alg, target.morphism(i, j), base[(j, k)]), target.unit(i, j, k))
        rho = alg.scalar_ratio(lhs, rhs)
        if rho is None:
            return None
        ratios[(i, j, k)] = rho

    _, tree = nerve.spanning_forest()
    known: Dict[Simplex, Any] = {tuple(sorted(e)): alg.one() for e in tree}
    progress = True
    while progress:
        progress = False
        for (i, j, k), rho in ratios.items():
            ij, jk, ik = (i, j), (j, k), (i, k)
            missing = [e for e in (ij, jk, ik) if e not in known]
            if len(missing) != 1:
                continue
            if missing[0] == ik:
                known[ik] = alg.product(known[ij], known[jk], alg.inverse(rho))
            elif missing[0] == ij:
                known[ij] = alg.product(known[ik], rho, alg.inverse(known[jk]))
            else:
                known[jk] = alg.product(alg.inverse(known[ij]), known[ik], rho)
            progress = True
    unresolved = [e for e in nerve.simplices(1) if e not in known]
    if unresolved:
        logger.debug(f"central corrections set to 1 on unconstrained edges {unresolved}")

    corrections = {e: alg.mul(known.get(e, alg.one()), base[e]) for e in nerve.simplices(1)}
    functor = FunctorData(dict(functors), corrections)
    if not verify_functor_data(source, target, functor, window).holds:
        return None
    return functor


def solve_module_units(data: AlgebroidDescentData, window: Optional[int] = None) -> Optional[ModuleData]:
    """
    Units p_ij with f_ij(p_jk)·p_ij = a_ijk·p_ik, or None when none exist.

    Trivial data gets p = 1. Otherwise the data must be in sector-shift
    normal form; with p_ij = e^{s_ij}·∂₁^{n_ij} the condition splits into
    dn = k over ℤ and ds = c over RCx.

    Raises:
        NormalFormError: data neither trivial nor in normal form
    """
    nerve = data.nerve
    if is_trivial_descent(data):
        return ModuleData({e: data.algebra(e[0]).one() for e in nerve.simplices(1)})
    form = normal_form_parts(data)
    n = coboundary_preimage(form.exponent_cochain())
    s = coboundary_preimage(form.c)
    if n is None or s is None:
        logger.info("no module units: the unit cochain is not a coboundary")
        return None
    units = {}
    for e in nerve.simplices(1):
        engine = data.algebra(e[0])
        units[e] = ScaledOperator(s[e], engine.shift_unit(n[e]).op)
    module = ModuleData(units)
    if not verify_module_data(data, module, window).holds:
        return None
    return module


def is_trivial_descent(data: AlgebroidDescentData) -> bool:
    """f = id on every edge and a = 1 on every triangle."""
    if any(m.kind is not MorphismKind.IDENTITY for m in data.morphisms.values()):
        return False
    return all(
        data.algebra(t[0]).equal(data.unit(*t), data.algebra(t[0]).one()) is VerificationStatus.TRUE
        for t in data.nerve.simplices(2)
    )


def central_transformation(
    target: AlgebroidDescentData,
    functor: FunctorData,
    units: Mapping[int, Any],
) -> Tuple[FunctorData, TransformationData]:
    """
    The functor g'_i = ad(d_i)∘g_i, b'_ij = d_i·b_ij·f'_ij(d_j)⁻¹ together
    with the transformation d from (g, b) to it.
    """
    nerve = target.nerve
    functors = {
        v: compose(ad(units[v]), functor.functor(v), engine=target.algebra(v)) for v in range(nerve.vertices)
    }
    corrections = {}
    for i, j in nerve.simplices(1):
        alg = target.algebra(i)
        moved = apply_morphism(alg, target.morphism(i, j), units[j])
        corrections[(i, j)] = alg.product(units[i], functor.correction(i, j), alg.inverse(moved))
    return FunctorData(functors, corrections), TransformationData(dict(units))


# =============================================================================
# SECTOR-SHIFT NORMAL FORM AND TWISTS
# =============================================================================

@dataclass(frozen=True)
class NormalForm:
    """
    Data f_ij = ad(∂₁^{λ̂_ij}), a_ijk = e^{c_ijk}·∂₁^{k_ijk} read off D.

    lifts are the rational λ̂, lam their classes in ℚ/ℤ, exponents the
    integers k = λ̂_ij + λ̂_jk − λ̂_ik and c the RCx scalar cochain.
    """
    nerve: CoverNerve
    lifts: Dict[Simplex, Fraction]
    exponents: Dict[Simplex, int]
    lam: Cochain
    c: Cochain

    def exponent_cochain(self) -> Cochain:
        complex = nerve_complex(self.nerve)
        return Cochain.from_mapping(complex, 2, self.exponents, Z)


def normal_form_parts(data: AlgebroidDescentData) -> NormalForm:
    """
    Raises:
        NormalFormError: a morphism is not a sector shift, a unit is not a
            scalar times a power of ∂₁, or the power misses the lift discrepancy
    """
    nerve = data.nerve
    data.require_complete()
    lifts: Dict[Simplex, Fraction] = {}
    for i, j in nerve.simplices(1):
        engine = data.algebra(i)
        if not isinstance(engine, ChartAlgebraEngine):
            raise NormalFormError("normal form needs chart algebras", (i, j))
        lam = shift_of(compose(data.morphism(i, j), engine=engine))
        if lam is None:
            raise NormalFormError("morphism is not a sector shift", (i, j))
        lifts[(i, j)] = lam
    exponents: Dict[Simplex, int] = {}
    scalars: Dict[Simplex, RCxValue] = {}
    for i, j, k in nerve.simplices(2):
        engine = data.algebra(i)
        if not isinstance(engine, ChartAlgebraEngine):
            raise NormalFormError("normal form needs chart algebras", (i, j, k))
        unit = data.unit(i, j, k)
        parts = engine.pure_shift(unit)
        expected = lifts[(i, j)] + lifts[(j, k)] - lifts[(i, k)]
        if parts is None or parts[0].denominator != 1:
            raise NormalFormError("unit is not a scalar times an integer power of ∂₁", (i, j, k))
        power, scalar = parts
        if power != expected:
            raise NormalFormError(f"unit carries ∂₁^{power}, lift discrepancy is {expected}", (i, j, k))
        exponents[(i, j, k)] = int(power)
        scalars[(i, j, k)] = scalar
    complex = nerve_complex(nerve)
    lam = Cochain.from_mapping(complex, 1, {e: frac_part(v) for e, v in lifts.items()}, QMODZ)
    c = Cochain.from_mapping(complex, 2, scalars, RCX)
    return NormalForm(nerve, lifts, exponents, lam, c)


def twist_by_lambda(
    nerve: CoverNerve,
    lam: Cochain,
    c: Cochain,
    nvars: int = 2,
    window: int = DEFAULT_WINDOW,
) -> AlgebroidDescentData:
    """
    Descent data twisted by a ℚ/ℤ 1-cocycle λ and an RCx 2-cocycle c.

    λ is lifted into [0, 1); f_ij = ad(∂₁^{λ̂_ij}) and
    a_ijk = e^{c_ijk}·∂₁^{λ̂_ij + λ̂_jk − λ̂_ik}.

    Raises:
        CocycleError: dλ ≠ 0 or dc ≠ 0, with the first failing simplex
    """
    _require_cochain(lam, CoefficientKind.QMODZ, 1, "lambda")
    _require_cochain(c, CoefficientKind.RCX, 2, "scalar cochain")
    _require_cocycle(lam, "lambda")
    _require_cocycle(c, "scalar cochain")
    engine = ChartAlgebraEngine(nvars, window)
    lifts = {e: frac_part(lam[e]) for e in nerve.simplices(1)}
    morphisms = {e: sector_shift(lifts[e]) for e in nerve.simplices(1)}
    units = {}
    for i, j, k in nerve.simplices(2):
        power = lifts[(i, j)] + lifts[(j, k)] - lifts[(i, k)]
        units[(i, j, k)] = ScaledOperator(c[(i, j, k)], sector_shift_generator(power, nvars, window))
    logger.debug(f"twist on {nerve.name or 'nerve'}: {len(morphisms)} shifts, {len(units)} units")
    return AlgebroidDescentData(nerve, tuple(engine for _ in range(nerve.vertices)), morphisms, units)


def twist_descent(data: AlgebroidDescentData, lam: Cochain, c: Cochain) -> AlgebroidDescentData:
    """Normal-form data twisted further by (λ, c); lifts are re-chosen in [0, 1)."""
    form = normal_form_parts(data)
    engine = data.algebra(0)
    return twist_by_lambda(data.nerve, form.lam + lam, form.c + c, engine.nvars, engine.window)


def normalize_lifts(data: AlgebroidDescentData) -> Tuple[AlgebroidDescentData, FunctorData]:
    """
    Move every sector shift to its lift in [0, 1).

    The integer part n_ij becomes the correction b_ij = ∂₁^{n_ij} of an
    identity functor, and units are rewritten a'_ijk = f'_ij(b_jk)⁻¹·b_ij⁻¹·a_ijk·b_ik.
    Returns the rewritten data and that functor.
    """
    nerve = data.nerve
    data.require_complete()
    morphisms: Dict[Simplex, Morphism] = {}
    corrections: Dict[Simplex, Any] = {}
    moved = 0
    for i, j in nerve.simplices(1):
        engine = data.algebra(i)
        m = compose(data.morphism(i, j), engine=engine)
        lam = shift_of(m)
        if lam is None or 0 <= lam < 1:
            morphisms[(i, j)] = m
            corrections[(i, j)] = engine.one()
            continue
        n = math.floor(lam)
        morphisms[(i, j)] = sector_shift(lam - n)
        corrections[(i, j)] = engine.shift_unit(n)
        moved += 1
    units = {}
    for i, j, k in nerve.simplices(2):
        alg = data.algebra(i)
        shifted = apply_morphism(alg, morphisms[(i, j)], corrections[(j, k)])
        units[(i, j, k)] = alg.product(
            alg.inverse(shifted), alg.inverse(corrections[(i, j)]), data.unit(i, j, k), corrections[(i, k)]
        )
    if moved:
        logger.warning(f"normalized {moved} sector-shift lifts into [0, 1)")
    functor = FunctorData({v: IDENTITY for v in range(nerve.vertices)}, corrections)
    return AlgebroidDescentData(nerve, data.algebras, morphisms, units), functor
