"""
Acceptance Suite.

The `selftest` subcommand: ten property and oracle checks over the whole
pipeline, each driven by one seeded `random.Random`.

═══════════════════════════════════════════════════════════════════════════
CORE CONTRACT:
═══════════════════════════════════════════════════════════════════════════

- Every criterion is exact: a case passes or fails, nothing is sampled
  with tolerance
- The same seed reproduces the same cases and the same table
- A crash inside a case counts as a failure of that case, never of the run
- `quick` shrinks sample counts and model lists, never the checks themselves
═══════════════════════════════════════════════════════════════════════════
"""

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from classify.bundle_model import CircleBundleModel
from classify.classifier import (
    PicDatum, classify_algebroid, classify_pic, pic_from_local_system, pic_tensor, twist_class,
)
from classify.sequence import five_term_sequence
from data_models import VerificationStatus
from descent_engine.builders import (
    central_transformation, conjugate_descent, integer_shift_descent, normalize_lifts,
    solve_module_units, trivial_descent, twist_by_lambda, twist_descent,
)
from descent_engine.chart_engine import ChartAlgebraEngine
from descent_engine.data import AlgebroidDescentData, FunctorData, ModuleData, TransformationData
from descent_engine.morphisms import IDENTITY, ad, sector_shift
from descent_engine.table_engine import FiniteTable, TableAlgebraEngine
from descent_engine.verifier import (
    verify_descent, verify_functor_data, verify_module_data, verify_transformation,
)
from exceptions import MicrocechError, MonodromyMismatchError
from homology.coefficients import QMODZ, RCX, CoefficientGroup, RCxValue, Z
from homology.cohomology import cohomology
from homology.complexes import Cochain, coboundary, nerve_complex
from homology.nerve import circle, projective_plane, solid_simplex, sphere, torus
from microdiff import (
    adjoint, bimodule_hom_basis, commutator, coordinate, derivation, formal_inverse,
    from_terms, identity, sector_shift_generator, symbol_of_order,
)
from models.reports import SelftestReport, SelftestRow
from services.sampling import random_cochain, random_operator, random_rational
from symcore import ONE, ZERO, monomial, symbol_product
from twogroup.cocycles import compare_with_abelian
from twogroup.groups import FiniteGroup

logger = logging.getLogger(__name__)


@dataclass
class Tally:
    """Cases run and failures seen by one criterion."""
    cases: int = 0
    failures: List[str] = field(default_factory=list)

    def check(self, ok: bool, label: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(label)

    def attempt(self, label: str, case: Callable[[], bool]) -> None:
        try:
            ok = case()
        except MicrocechError as exc:
            ok = False
            label = f"{label}: {exc.message}"
        except (ValueError, ArithmeticError) as exc:
            ok = False
            label = f"{label}: {type(exc).__name__}: {exc}"
        self.check(ok, label)


def _count(full: int, quick: bool, reduced: int) -> int:
    return reduced if quick else full


# =============================================================================
# OPERATOR CALCULUS
# =============================================================================

def leibniz_laws(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    for n in range(_count(200, quick, 20)):
        nvars = rng.randint(1, 3)
        window = rng.randint(2, 5)
        p, q, r = (random_operator(rng, nvars, window, order=random_rational(rng, 1)) for _ in range(3))
        one = identity(nvars, window)

        def case(p=p, q=q, r=r, one=one) -> bool:
            associative = (p * q) * r == p * (q * r)
            unit = one * p == p and p * one == p
            top = symbol_of_order(p * q, p.order + q.order)
            multiplicative = top == symbol_product(symbol_of_order(p, p.order), symbol_of_order(q, q.order))
            return associative and unit and multiplicative

        tally.attempt(f"triple {n}", case)
    return tally


def commutation_identity(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    x1 = coordinate(1, 1, 4)
    for _ in range(_count(20, quick, 5)):
        lam = random_rational(rng)
        expected = from_terms(1, [monomial(1, lam, (), lam - 1)], 4, lam)
        tally.attempt(f"lambda={lam}", lambda lam=lam, expected=expected: (
            commutator(sector_shift_generator(lam, nvars=1, window=4), x1) == expected
        ))
    return tally


def inverse_and_adjoint(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    for n in range(_count(100, quick, 10)):
        nvars = rng.randint(1, 2)
        p = random_operator(rng, nvars, 4, order=Fraction(rng.randint(-2, 2)), unit_leading=True)
        q = random_operator(rng, nvars, 4)

        def case(p=p, q=q, nvars=nvars) -> bool:
            inverse = formal_inverse(p)
            one = identity(nvars, 4)
            two_sided = p * inverse == one and inverse * p == one
            anti = adjoint(p * q) == adjoint(q) * adjoint(p)
            return two_sided and anti and adjoint(adjoint(p)) == p

        tally.attempt(f"pair {n}", case)
    return tally


HOM_GRID = (
    Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1),
    Fraction(4, 3), Fraction(2), Fraction(5, 2),
)


def hom_dimensions(rng: random.Random, quick: bool) -> Tally:
    """dim Hom(E^[λ], E^[μ]) is 1 for μ − λ ∈ ℤ and 0 otherwise."""
    tally = Tally()
    grid = HOM_GRID[:3] if quick else HOM_GRID
    window = 3 if quick else 5
    for lam in grid:
        for mu in grid:
            expected = 1 if (mu - lam).denominator == 1 else 0
            tally.attempt(f"({lam}, {mu})", lambda lam=lam, mu=mu, expected=expected: (
                len(bimodule_hom_basis(lam, mu, window)) == expected
            ))
    return tally


# =============================================================================
# COHOMOLOGY
# =============================================================================

def two_group_agreement(rng: random.Random, quick: bool) -> Tally:
    """H¹(X; G[i]) by enumeration against H^{1+i}(X; G) by Smith form."""
    tally = Tally()
    nerves = (circle(), sphere()) if quick else (circle(), sphere(), torus(), projective_plane())
    orders = (2, 3) if quick else (2, 3, 4)
    for nerve in nerves:
        for order in orders:
            group = FiniteGroup.cyclic(order)
            for i in (0, 1):
                tally.attempt(f"{nerve.name} Z/{order}[{i}]", lambda nerve=nerve, group=group, i=i: (
                    compare_with_abelian(nerve, group, i)
                ))
    return tally


def _models(quick: bool) -> List[Tuple[str, CircleBundleModel]]:
    bases = (circle(), sphere()) if quick else (circle(), sphere(), torus())
    signs = (1,) if quick else (1, -1)
    out = []
    for base in bases:
        out.append((f"{base.name} e=0", CircleBundleModel.trivial(base)))
        if cohomology(base, Z, 2).free_rank:
            for sign in signs:
                out.append((f"{base.name} e={sign:+d}g", CircleBundleModel.with_generator(base, sign)))
    return out


def five_term_exactness(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    moduli = (2,) if quick else (2, 4)
    for name, model in _models(quick):
        for m in moduli:
            coefficient = CoefficientGroup.zmod(m)
            tally.attempt(f"{name} Z/{m}", lambda model=model, coefficient=coefficient: (
                five_term_sequence(model, coefficient).exact
            ))
            if model.is_trivial:
                tally.attempt(f"{name} Z/{m} vs product model", lambda model=model, coefficient=coefficient: (
                    all(model.compare_with_kunneth(coefficient).values())
                ))
    return tally


def hopf_model(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    z4 = CoefficientGroup.zmod(4)

    def case() -> bool:
        seq = five_term_sequence(CircleBundleModel.with_generator(sphere()), z4)
        check = seq.check(z4)
        return check.injective["delta"] and check.surjective["delta"] and check.groups["H2(Y)"].is_trivial()

    tally.attempt("S2 e=g Z/4", case)
    return tally


# =============================================================================
# CLASSIFICATION
# =============================================================================

def _random_twist(rng: random.Random, model: CircleBundleModel) -> Tuple[Cochain, Cochain]:
    """A random normal-form twist (λ, c) on the base of a product bundle."""
    complex = nerve_complex(model.base)
    if complex.dim(2):
        lam = coboundary(random_cochain(rng, complex, 0, QMODZ))
    else:
        lam = random_cochain(rng, complex, 1, QMODZ)
    c = random_cochain(rng, complex, 2, RCX)
    return lam, c


def twist_round_trip(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    models = [CircleBundleModel.trivial(circle()), CircleBundleModel.trivial(sphere())]
    for n in range(_count(50, quick, 6)):
        model = models[n % 2]
        lam, c = _random_twist(rng, model)
        lam2, c2 = _random_twist(rng, model)

        def case(model=model, lam=lam, c=c, lam2=lam2, c2=c2) -> bool:
            data = twist_by_lambda(model.base, lam, c, window=3)
            if not verify_descent(data).holds:
                return False
            found = classify_algebroid(model, data)
            if found != twist_class(model, lam, c):
                return False
            h2 = cohomology(model.total_complex(), RCX, 2)
            moved = classify_algebroid(model, twist_descent(data, lam2, c2))
            return moved.total == h2.add_coordinates(found.total, twist_class(model, lam2, c2).total)

        tally.attempt(f"twist {n} on {model.base.name}", case)
    return tally


def _random_pic(rng: random.Random, model: CircleBundleModel) -> PicDatum:
    """Constant fiber monodromy and a random base cocycle on a product bundle."""
    base = model.base_complex(RCX)
    q = rng.choice((2, 3, 4, 6))
    fiber = RCxValue(Fraction(rng.randrange(q), q), random_rational(rng, 1))
    if base.dim(2):
        a = coboundary(random_cochain(rng, base, 0, RCX))
    else:
        a = random_cochain(rng, base, 1, RCX)
    b = Cochain(base, 0, (fiber,) * model.base.vertices, RCX)
    return pic_from_local_system(model, model.join(a, b))


def pic_group_law(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    models = [CircleBundleModel.trivial(circle()), CircleBundleModel.trivial(sphere())]
    for n in range(_count(50, quick, 6)):
        model = models[n % 2]
        first, second = _random_pic(rng, model), _random_pic(rng, model)

        def additive(model=model, first=first, second=second) -> bool:
            h1 = cohomology(model.total_complex(), RCX, 1)
            total = classify_pic(model, pic_tensor(first, second)).coordinates
            parts = h1.add_coordinates(classify_pic(model, first).coordinates, classify_pic(model, second).coordinates)
            return total == parts

        def rejects(model=model, first=first) -> bool:
            try:
                classify_pic(model, PicDatum(first.ell, first.shift + Fraction(1, 5)))
            except MonodromyMismatchError:
                return True
            return False

        tally.attempt(f"pair {n} additive", additive)
        tally.attempt(f"pair {n} mismatch", rejects)
    return tally


# =============================================================================
# DESCENT VERIFIER
# =============================================================================

def _with_unit(data: AlgebroidDescentData, simplex, value) -> AlgebroidDescentData:
    units = dict(data.units)
    units[simplex] = value
    return AlgebroidDescentData(data.nerve, data.algebras, data.morphisms, units)


def _with_morphism(data: AlgebroidDescentData, edge, morphism) -> AlgebroidDescentData:
    morphisms = dict(data.morphisms)
    morphisms[edge] = morphism
    return AlgebroidDescentData(data.nerve, data.algebras, morphisms, data.units)


def _shift_data(chart: ChartAlgebraEngine) -> AlgebroidDescentData:
    nerve = solid_simplex(2)
    phi = (0, 1, 3)
    m = Cochain.from_mapping(nerve_complex(nerve), 1, {(i, j): phi[j] - phi[i] for i, j in nerve.simplices(1)}, Z)
    return integer_shift_descent(nerve, m, chart)


def _builders(chart: ChartAlgebraEngine) -> List[Tuple[str, Callable[[], bool]]]:
    matrices = TableAlgebraEngine(FiniteTable.matrix_algebra(2))
    shifted = _shift_data(chart)
    zero_lam = Cochain.zero(nerve_complex(sphere()), 1, QMODZ)
    c = Cochain.from_mapping(nerve_complex(sphere()), 2, {(0, 1, 2): RCxValue(Fraction(1, 4))}, RCX)
    twisted = twist_by_lambda(sphere(), zero_lam, c)
    s = Cochain.from_mapping(nerve_complex(sphere()), 1, {(0, 2): RCxValue(Fraction(1, 3))}, RCX)
    bounding = twist_by_lambda(sphere(), zero_lam, coboundary(s))
    identity_functor = FunctorData({v: IDENTITY for v in range(3)}, {e: chart.one() for e in shifted.nerve.simplices(1)})

    def conjugated() -> bool:
        units = {0: chart.wrap(derivation(1, 2, 4)), 1: chart.scalar(RCxValue(Fraction(1, 3))), 2: chart.one()}
        result, functor = conjugate_descent(shifted, units)
        return verify_descent(result).holds and verify_functor_data(shifted, result, functor).holds

    def normalized() -> bool:
        result, functor = normalize_lifts(shifted)
        return verify_descent(result).holds and verify_functor_data(shifted, result, functor).holds

    def central() -> bool:
        d = {v: chart.scalar(RCxValue(Fraction(v, 6))) for v in range(3)}
        second, t = central_transformation(shifted, identity_functor, d)
        return verify_transformation(shifted, shifted, identity_functor, second, t).holds

    def module() -> bool:
        units = solve_module_units(bounding)
        return units is not None and verify_module_data(bounding, units).holds

    return [
        ("trivial chart data", lambda: verify_descent(trivial_descent(sphere(), chart)).holds),
        ("trivial table data", lambda: verify_descent(trivial_descent(solid_simplex(3), matrices)).holds),
        ("integer shifts", lambda: verify_descent(shifted).holds),
        ("twist", lambda: verify_descent(twisted).holds),
        ("conjugation", conjugated),
        ("normalised lifts", normalized),
        ("central transformation", central),
        ("module units", module),
    ]


def _broken(chart: ChartAlgebraEngine) -> List[Tuple[str, Callable[[], object], Tuple[int, ...]]]:
    """(name, check returning a CheckResult, expected first violating simplex)."""
    tetra = trivial_descent(solid_simplex(3), chart)
    triangle = trivial_descent(solid_simplex(2), chart)
    shifted = _shift_data(chart)
    scalars = TableAlgebraEngine(FiniteTable.group_algebra(FiniteGroup.cyclic(3)))
    matrices = TableAlgebraEngine(FiniteTable.matrix_algebra(2))
    nerve3 = solid_simplex(3)
    phi = (Fraction(0), Fraction(1, 2), Fraction(3, 4), Fraction(1, 3))
    lam = Cochain.from_mapping(
        nerve_complex(nerve3), 1, {(i, j): phi[j] - phi[i] for i, j in nerve3.simplices(1)}, QMODZ
    )
    twisted = twist_by_lambda(nerve3, lam, Cochain.zero(nerve_complex(nerve3), 2, RCX))
    third = chart.scalar(RCxValue(Fraction(1, 3)))
    identity_functor = FunctorData({v: IDENTITY for v in range(3)}, {e: chart.one() for e in triangle.nerve.simplices(1)})
    zero_lam = Cochain.zero(nerve_complex(sphere()), 1, QMODZ)
    s = Cochain.from_mapping(nerve_complex(sphere()), 1, {(0, 2): RCxValue(Fraction(1, 3))}, RCX)
    bounding = twist_by_lambda(sphere(), zero_lam, coboundary(s))

    def flipped_module():
        units = dict(solve_module_units(bounding).units)
        engine = bounding.algebra(0)
        units[(0, 1)] = engine.mul(engine.scalar(-1), units[(0, 1)])
        return verify_module_data(bounding, ModuleData(units))

    def non_central():
        t = TransformationData({v: chart.wrap(derivation(1, 2, 4)) for v in range(3)})
        return verify_transformation(shifted, shifted, identity_functor, identity_functor, t)

    u = (ONE, ONE, ZERO, ONE)
    return [
        ("scalar on 012", lambda: verify_descent(_with_unit(tetra, (0, 1, 2), chart.scalar(2))), (0, 1, 2, 3)),
        ("scalar on 013", lambda: verify_descent(_with_unit(tetra, (0, 1, 3), chart.scalar(2))), (0, 1, 2, 3)),
        ("shift on 02", lambda: verify_descent(_with_morphism(triangle, (0, 2), sector_shift(1))), (0, 1, 2)),
        ("shift on 01", lambda: verify_descent(_with_morphism(triangle, (0, 1), sector_shift(1))), (0, 1, 2)),
        ("non-unit on 012", lambda: verify_descent(
            _with_unit(triangle, (0, 1, 2), chart.wrap(coordinate(1, 2, 4)))), (0, 1, 2)),
        ("table scalar on 023", lambda: verify_descent(
            _with_unit(trivial_descent(nerve3, scalars), (0, 2, 3), scalars.scalar(2))), (0, 1, 2, 3)),
        ("twist unit rescaled", lambda: verify_descent(
            _with_unit(twisted, (0, 1, 2), chart.mul(third, twisted.unit(0, 1, 2)))), (0, 1, 2, 3)),
        ("shift dropped on 12", lambda: verify_descent(_with_morphism(shifted, (1, 2), IDENTITY)), (0, 1, 2)),
        ("identity functor", lambda: verify_functor_data(triangle, shifted, identity_functor), (0, 1)),
        ("module sign flip", flipped_module, (0, 1, 2)),
        ("non-central transformation", non_central, (0,)),
        ("table conjugation on 01", lambda: verify_descent(
            _with_morphism(trivial_descent(solid_simplex(2), matrices), (0, 1), ad(u))), (0, 1, 2)),
    ]


def verifier_soundness(rng: random.Random, quick: bool) -> Tally:
    tally = Tally()
    chart = ChartAlgebraEngine(2, 4)
    for name, case in _builders(chart):
        tally.attempt(f"builder {name}", case)
    for name, check, simplex in _broken(chart):
        def case(check=check, simplex=simplex) -> bool:
            result = check()
            first = result.first_violation
            return result.status is VerificationStatus.FALSE and first is not None and first.simplex == simplex

        tally.attempt(f"broken {name}", case)
    return tally


# =============================================================================
# RUNNER
# =============================================================================

CRITERIA: Tuple[Tuple[str, Callable[[random.Random, bool], Tally]], ...] = (
    ("leibniz algebra laws", leibniz_laws),
    ("commutation identity", commutation_identity),
    ("inverse and adjoint", inverse_and_adjoint),
    ("bimodule hom dimensions", hom_dimensions),
    ("2-group H1 vs abelian cohomology", two_group_agreement),
    ("five-term exactness", five_term_exactness),
    ("hopf model", hopf_model),
    ("twist-classify round trip", twist_round_trip),
    ("pic group law", pic_group_law),
    ("descent verifier soundness", verifier_soundness),
)


def run_selftest(seed: int = 0, quick: bool = False, only: Optional[List[str]] = None) -> SelftestReport:
    """Run every criterion (or those named in `only`) and tabulate the results."""
    rows = []
    for name, criterion in CRITERIA:
        if only and name not in only:
            continue
        rng = random.Random(f"{seed}:{name}")
        started = time.perf_counter()
        tally = criterion(rng, quick)
        seconds = round(time.perf_counter() - started, 3)
        failed = len(tally.failures)
        logger.info(f"selftest {name}: {tally.cases - failed}/{tally.cases} in {seconds}s")
        rows.append(SelftestRow(
            name=name,
            passed=not failed,
            cases=tally.cases,
            failures=failed,
            seconds=seconds,
            detail=tally.failures[0] if failed else None,
        ))
    return SelftestReport(quick=quick, seed=seed, rows=rows, passed=all(r.passed for r in rows))


def format_table(report: SelftestReport) -> str:
    """Fixed-width pass/fail table for stderr."""
    width = max([len(r.name) for r in report.rows] + [9])
    lines = [f"{'criterion'.ljust(width)}  result  cases  seconds"]
    for row in report.rows:
        verdict = "PASS" if row.passed else "FAIL"
        lines.append(f"{row.name.ljust(width)}  {verdict:<6}  {row.cases:>5}  {row.seconds:>7.3f}")
        if row.detail:
            lines.append(f"{''.ljust(width)}  first failure: {row.detail}")
    lines.append("ALL PASS" if report.passed else "FAILURES PRESENT")
    return "\n".join(lines)
