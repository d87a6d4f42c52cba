"""
Classification of Pic data and algebroid descent data.

Rank-one data are classified by H¹(Y; ℂ^×) and normal-form algebroid data
by H²(Y; ℂ^×), both computed on the cone model of the bundle. ℂ^× values
are RCx pairs (t, u) ↦ e^{2πit}·e^{u}.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Tuple

from classify.bundle_model import BASE, FIBER, CircleBundleModel
from data_models import CheckResult, VerificationStatus
from descent_engine.builders import is_trivial_descent, normal_form_parts
from descent_engine.chart_engine import ScaledOperator
from descent_engine.data import AlgebroidDescentData, FunctorData
from descent_engine.morphisms import sector_shift
from descent_engine.verifier import verify_functor_data
from exceptions import MonodromyMismatchError, NormalFormError
from homology.coefficients import RCX, CoefficientKind, Q, RCxValue
from homology.cohomology import cohomology, coboundary_preimage, coordinates_to_json
from homology.complexes import Cochain
from homology.products import cup_product
from homology.smith import smith_decomposition
from symcore import format_rational, frac_part, parse_rational
from twogroup.search import Constraint, ConstraintSearch

logger = logging.getLogger(__name__)

Coordinates = Tuple


# =============================================================================
# PIC DATA
# =============================================================================

@dataclass(frozen=True)
class PicDatum:
    """A rank-one local system L on Y (RCx 1-cocycle) with a shift [λ] ∈ ℚ/ℤ."""
    ell: Cochain
    shift: Fraction

    def __post_init__(self):
        if self.ell.coefficient.kind is not CoefficientKind.RCX or self.ell.degree != 1:
            raise ValueError("a Pic datum needs an RCx 1-cochain on the total space")
        object.__setattr__(self, "shift", frac_part(parse_rational(self.shift)))

    def to_dict(self) -> Dict:
        ell: Dict[str, List] = {BASE: [], FIBER: []}
        for (part, simplex), value in zip(self.ell.complex.basis(1), self.ell.values):
            if not value.is_zero():
                ell[part].append({"simplex": list(simplex), "value": value.to_json()})
        return {"kind": "pic", "ell": ell, "shift": format_rational(self.shift)}


@dataclass(frozen=True)
class PicClass:
    coordinates: Coordinates
    group: str

    def to_dict(self) -> Dict:
        return {"kind": "pic_class", "group": self.group, "coordinates": coordinates_to_json(self.coordinates)}


def fiber_monodromy(model: CircleBundleModel, ell: Cochain) -> Tuple[RCxValue, ...]:
    """The value of L around the fiber over each vertex of X."""
    return model.mu1(ell).values


def check_pic_datum(model: CircleBundleModel, datum: PicDatum) -> None:
    """
    Raises:
        MonodromyMismatchError: the ℚ/ℤ part of the fiber monodromy is not −λ
    """
    expected = frac_part(-datum.shift)
    for v, value in enumerate(fiber_monodromy(model, datum.ell)):
        if value.t != expected:
            raise MonodromyMismatchError(format_rational(value.t), format_rational(datum.shift), v)


def classify_pic(model: CircleBundleModel, datum: PicDatum) -> PicClass:
    """
    Coordinates of L in H¹(Y; RCx).

    Raises:
        MonodromyMismatchError: monodromy and shift are incompatible
        CocycleError: L is not a cocycle
    """
    check_pic_datum(model, datum)
    pres = cohomology(model.total_complex(), RCX, 1)
    coords = pres.coordinates(datum.ell)
    logger.debug(f"Pic class {coordinates_to_json(coords)} in {pres.describe()}")
    return PicClass(coords, pres.describe())


def pic_tensor(first: PicDatum, second: PicDatum) -> PicDatum:
    """L ⊗ L' with shifts added."""
    return PicDatum(first.ell + second.ell, first.shift + second.shift)


def pic_dual(datum: PicDatum) -> PicDatum:
    return PicDatum(-datum.ell, -datum.shift)


def pic_from_local_system(model: CircleBundleModel, ell: Cochain) -> PicDatum:
    """
    The datum of L with shift μ₁(L*), the minus monodromy.

    Raises:
        MonodromyMismatchError: the monodromy differs between components
    """
    values = fiber_monodromy(model, ell)
    shift = frac_part(-values[0].t) if values else Fraction(0)
    datum = PicDatum(ell, shift)
    check_pic_datum(model, datum)
    return datum


# =============================================================================
# ALGEBROID DATA
# =============================================================================

@dataclass(frozen=True)
class AlgebroidClass:
    """Class of normal-form data: base and fiber parts and the class on Y."""
    base2: Coordinates
    fiber1: Coordinates
    total: Coordinates

    def to_dict(self) -> Dict:
        return {
            "kind": "class",
            "base2": coordinates_to_json(self.base2),
            "fiber1": coordinates_to_json(self.fiber1),
            "total": coordinates_to_json(self.total),
        }


def _as_rcx(lam: Cochain) -> Cochain:
    return lam.map_values(lambda v: RCxValue(v, 0), RCX)


def _require_same_base(model: CircleBundleModel, data: AlgebroidDescentData) -> None:
    if data.nerve.simplices_by_dim != model.base.simplices_by_dim:
        raise ValueError("descent data and bundle model live on different nerves")


def twist_class(model: CircleBundleModel, lam: Cochain, c: Cochain) -> AlgebroidClass:
    """
    Class of the cochain (c, λ) on Y.

    Raises:
        NormalFormError: e⌣λ ≠ 0 on cochains, so (c, λ) is not a cocycle
    """
    lam_rcx = _as_rcx(lam)
    clash = cup_product(model.euler, lam_rcx)
    for label, value in zip(clash.complex.basis(clash.degree), clash.values):
        if not value.is_zero():
            raise NormalFormError("Euler class pairs nontrivially with the shift cochain", label)
    total = model.join(c, lam_rcx)
    return AlgebroidClass(
        cohomology(model.base_complex(), RCX, 2).coordinates(c),
        cohomology(model.base_complex(), RCX, 1).coordinates(lam_rcx),
        cohomology(model.total_complex(), RCX, 2).coordinates(total),
    )


def classify_algebroid(model: CircleBundleModel, data: AlgebroidDescentData) -> AlgebroidClass:
    """
    Class in H²(Y; RCx) of descent data in sector-shift normal form.

    Trivial data maps to the base point whatever its local algebras.

    Raises:
        NormalFormError: data not in normal form
    """
    _require_same_base(model, data)
    if is_trivial_descent(data):
        complex = model.base_complex()
        return AlgebroidClass(
            cohomology(complex, RCX, 2).zero_coordinates(),
            cohomology(complex, RCX, 1).zero_coordinates(),
            cohomology(model.total_complex(), RCX, 2).zero_coordinates(),
        )
    form = normal_form_parts(data)
    result = twist_class(model, form.lam, form.c)
    logger.info(f"algebroid class: base {coordinates_to_json(result.base2)}, fiber {coordinates_to_json(result.fiber1)}")
    return result


# =============================================================================
# EQUIVALENCE WITNESSES
# =============================================================================

@dataclass(frozen=True)
class ConeWitness:
    """(a, σ) with D(a, σ) = (c' − c, λ' − λ) on the cone; RCx values on edges and vertices."""
    a: Cochain
    sigma: Cochain

    def to_dict(self) -> Dict:
        return {"a": self.a.to_json(), "sigma": self.sigma.to_json()}


@dataclass(frozen=True)
class EquivalenceReport:
    same_class: bool
    witness: Optional[ConeWitness]
    functor: Optional[FunctorData] = None
    functor_check: Optional[CheckResult] = None
    explored: int = 0

    @property
    def agree(self) -> bool:
        """Class equality and witness existence give the same answer."""
        return self.same_class == (self.witness is not None)

    @property
    def status(self) -> VerificationStatus:
        return VerificationStatus.TRUE if self.agree else VerificationStatus.FALSE

    def to_dict(self) -> Dict:
        return {
            "kind": "equivalence",
            "same_class": self.same_class,
            "witness": self.witness.to_dict() if self.witness else None,
            "functor_verified": self.functor_check.to_dict() if self.functor_check else None,
            "agree": self.agree,
            "explored": self.explored,
        }


def _witness_modulus(model: CircleBundleModel, d_lam: Cochain, d_c: Cochain) -> int:
    """Denominator bound N with every ℚ/ℤ witness realisable in (1/N)ℤ/ℤ."""
    data = lcm(1, *(Fraction(v).denominator for v in d_lam.values), *(v.t.denominator for v in d_c.values))
    complex = model.total_complex()
    smith = smith_decomposition(complex.matrix(1), cols=complex.dim(1))
    return data * lcm(1, *smith.diagonal)


def _witness_search(
    model: CircleBundleModel,
    d_lam: Cochain,
    d_c: Cochain,
    budget: Optional[int],
) -> Tuple[ConstraintSearch, int]:
    """[σ per vertex] + [a per edge] in (1/N)ℤ/ℤ, with a = 0 on the spanning forest."""
    X = model.base
    n = _witness_modulus(model, d_lam, d_c)
    v = X.vertices
    edges = X.simplices(1)
    edge = {s: v + i for i, s in enumerate(edges)}
    _, tree = X.spanning_forest()
    tree_edges = {tuple(sorted(e)) for e in tree}
    domains: List[Tuple[int, ...]] = [tuple(range(n))] * v
    for s in edges:
        domains.append((0,) if s in tree_edges else tuple(range(n)))
    constraints = []
    for i, j in edges:
        target = int(Fraction(d_lam[(i, j)]) * n)
        constraints.append(Constraint(
            (i, j),
            lambda s, i=i, j=j, target=target: (target + s[j] - s[i]) % n == 0,
            f"edge {i}{j}",
        ))
    for i, j, k in X.simplices(2):
        ij, jk, ik = edge[(i, j)], edge[(j, k)], edge[(i, k)]
        weight = model.euler[(i, j, k)]
        target = int(d_c[(i, j, k)].t * n)
        constraints.append(Constraint(
            (ij, jk, ik, k),
            lambda s, ij=ij, jk=jk, ik=ik, k=k, weight=weight, target=target: (
                (s[jk] - s[ik] + s[ij] + weight * s[k] - target) % n == 0
            ),
            f"triangle {i}{j}{k}",
        ))
    return ConstraintSearch(domains, constraints, budget, "equivalence witness search"), n


def _functor_from_witness(
    first: AlgebroidDescentData,
    second: AlgebroidDescentData,
    witness: ConeWitness,
) -> FunctorData:
    """g_i = ad(∂₁^σ_i), b_ij = e^{−a_ij}·∂₁^{n_ij} with n_ij = σ_i − σ_j + λ̂_ij − λ̂'_ij."""
    lifts, lifts2 = normal_form_parts(first).lifts, normal_form_parts(second).lifts
    X = first.nerve
    sigma = {v: frac_part(witness.sigma[(v,)].t) for v in range(X.vertices)}
    functors = {v: sector_shift(sigma[v]) for v in range(X.vertices)}
    corrections = {}
    for i, j in X.simplices(1):
        power = sigma[i] - sigma[j] + lifts[(i, j)] - lifts2[(i, j)]
        if power.denominator != 1:
            raise NormalFormError("witness shift leaves a fractional correction", (i, j))
        engine = second.algebra(i)
        corrections[(i, j)] = ScaledOperator(-witness.a[(i, j)], engine.shift_unit(power).op)
    return FunctorData(functors, corrections)


def find_equivalence_witness(
    model: CircleBundleModel,
    first: AlgebroidDescentData,
    second: AlgebroidDescentData,
    budget: Optional[int] = None,
) -> Tuple[Optional[ConeWitness], int]:
    """
    A cone witness relating two normal-form data, or None.

    The ℚ/ℤ parts are enumerated exhaustively on (1/N)ℤ/ℤ, the ℚ part of a
    is solved exactly. Returns (witness, explored nodes).

    Raises:
        BudgetExceededError: the enumeration ran out of budget
        NormalFormError: either data is not in normal form
    """
    _require_same_base(model, first)
    _require_same_base(model, second)
    form1, form2 = normal_form_parts(first), normal_form_parts(second)
    d_lam = form2.lam - form1.lam
    d_c = form2.c - form1.c
    search, n = _witness_search(model, d_lam, d_c, budget)
    solution = search.first()
    logger.debug(f"witness search on (1/{n})Z/Z: {search.explored} nodes, {'found' if solution else 'none'}")
    if solution is None:
        return None, search.explored
    base = model.base_complex(Q)
    u_target = model.join(
        Cochain(base, 2, tuple(v.u for v in d_c.values), Q), Cochain.zero(base, 1, Q)
    )
    u_part = coboundary_preimage(u_target)
    if u_part is None:
        return None, search.explored
    a_u, sigma_u = model.split(u_part)
    v = first.nerve.vertices
    complex = model.base_complex()
    a = Cochain(complex, 1, tuple(RCxValue(Fraction(t, n), u) for t, u in zip(solution[v:], a_u.values)), RCX)
    sigma = Cochain(
        complex, 0, tuple(RCxValue(Fraction(t, n), u) for t, u in zip(solution[:v], sigma_u.values)), RCX
    )
    return ConeWitness(a, sigma), search.explored


def equivalence_classes_agree(
    model: CircleBundleModel,
    first: AlgebroidDescentData,
    second: AlgebroidDescentData,
    budget: Optional[int] = None,
) -> EquivalenceReport:
    """
    Compare class equality with the existence of a witness.

    When e⌣σ = 0 the witness becomes FunctorData (shift functors with
    scalar-times-∂₁-power corrections) and is verified.

    Raises:
        BudgetExceededError: the witness search ran out of budget
        NormalFormError: data not in normal form
    """
    same = classify_algebroid(model, first).total == classify_algebroid(model, second).total
    witness, explored = find_equivalence_witness(model, first, second, budget)
    functor, check = None, None
    if witness is not None and cup_product(model.euler, witness.sigma).is_zero():
        functor = _functor_from_witness(first, second, witness)
        check = verify_functor_data(first, second, functor)
    report = EquivalenceReport(same, witness, functor, check, explored)
    if not report.agree:
        logger.warning(f"class equality ({same}) and witness existence disagree")
    return report
