"""
Conversion between validated documents and domain objects.

Every reader takes the pydantic model produced by `models.parse_document`
and the JSON pointer of that model inside its file, so semantic errors
(a simplex missing from the nerve, a value outside its group) are reported
with the same kind of pointer as schema errors.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from classify.bundle_model import BASE, FIBER, CircleBundleModel
from classify.classifier import PicDatum, pic_from_local_system
from config import get_settings
from descent_engine.base import AlgebraEngine
from descent_engine.builders import normalize_lifts
from descent_engine.chart_engine import ChartAlgebraEngine
from descent_engine.data import AlgebroidDescentData, FunctorData, ModuleData, TransformationData
from descent_engine.morphisms import morphism_from_json, morphism_to_json
from descent_engine.table_engine import FiniteTable, TableAlgebraEngine
from exceptions import SchemaError
from homology.coefficients import QMODZ, RCX, CoefficientGroup, CoefficientKind, Z
from homology.complexes import Cochain, nerve_complex
from homology.nerve import MODEL_NERVES, CoverNerve
from microdiff import MicrodiffOperator
from models import parse_document, validate
from models.algebra import CrossedModuleSchema, GroupSchema, OperatorSchema, TwoGroupCocycleSchema
from models.descent import ChartAlgebraSchema, DescentSchema, FunctorSchema
from models.topology import BundleModelSchema, CochainSchema, NerveSchema, PicDatumSchema, TwistSchema
from symcore import parse_rational
from twogroup.cocycles import TwoGroupCocycle
from twogroup.crossed_module import CrossedModule
from twogroup.groups import FiniteGroup

logger = logging.getLogger(__name__)

_BAD_VALUE = (KeyError, ValueError, TypeError, IndexError, ZeroDivisionError)


# =============================================================================
# FILES
# =============================================================================

def _reject_float(text: str):
    raise SchemaError(f"floating-point number {text} found; write rationals as \"p/q\"")


def read_json(path: str) -> Any:
    """
    Raises:
        SchemaError: unreadable file, malformed JSON or a float literal
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc.msg} at line {exc.lineno}") from None


def read_document(path: str, *kinds: str):
    return parse_document(read_json(path), kinds or None)


def dumps(payload: Dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


# =============================================================================
# NERVES AND COCHAINS
# =============================================================================

def nerve_from_schema(schema: NerveSchema, at: str = "") -> CoverNerve:
    if schema.model is not None:
        return MODEL_NERVES[schema.model]()
    try:
        return CoverNerve.from_simplices(schema.vertices, schema.simplices, schema.name)
    except ValueError as exc:
        raise SchemaError(str(exc), f"{at}/simplices") from None


def nerve_to_json(nerve: CoverNerve) -> Dict:
    return {"kind": "nerve", **nerve.to_json(), "name": nerve.name}


def _simplex(nerve: CoverNerve, raw: Sequence[int], degree: int, where: str) -> Tuple[int, ...]:
    simplex = tuple(raw)
    increasing = all(a < b for a, b in zip(simplex, simplex[1:]))
    if len(simplex) != degree + 1 or not increasing or not nerve.contains(simplex):
        raise SchemaError(f"{list(simplex)} is not a {degree}-simplex of the nerve", f"{where}/simplex")
    return simplex


def _values(
    nerve: CoverNerve,
    degree: int,
    coefficient: CoefficientGroup,
    entries: Iterable[Any],
    at: str,
) -> Dict[Tuple[int, ...], Any]:
    """Simplex-keyed values of a list of {simplex, value} entries."""
    mapping: Dict[Tuple[int, ...], Any] = {}
    for n, entry in enumerate(entries):
        where = f"{at}/{n}"
        simplex = _simplex(nerve, entry.simplex, degree, where)
        if simplex in mapping:
            raise SchemaError(f"simplex {list(simplex)} listed twice", f"{where}/simplex")
        try:
            mapping[simplex] = coefficient.from_json(entry.value)
        except _BAD_VALUE as exc:
            raise SchemaError(f"not a value of {coefficient}: {exc}", f"{where}/value") from None
    return mapping


def cochain_from_entries(
    nerve: CoverNerve,
    degree: int,
    coefficient: CoefficientGroup,
    entries: Iterable[Any],
    at: str = "",
) -> Cochain:
    mapping = _values(nerve, degree, coefficient, entries, at)
    return Cochain.from_mapping(nerve_complex(nerve, coefficient), degree, mapping, coefficient)


def coefficient_from_text(text: str, at: str = "/coeff") -> CoefficientGroup:
    try:
        return CoefficientGroup.parse(text)
    except ValueError as exc:
        raise SchemaError(str(exc), at) from None


def cochain_from_schema(schema: CochainSchema, nerve: Optional[CoverNerve] = None, at: str = "") -> Cochain:
    """
    A cochain on its own nerve, or on `nerve` when the document carries none.

    Raises:
        SchemaError: no nerve, or entries outside the nerve or group
    """
    if schema.nerve is not None:
        nerve = nerve_from_schema(schema.nerve, f"{at}/nerve")
    if nerve is None:
        raise SchemaError("cochain document needs a nerve", f"{at}/nerve")
    coefficient = coefficient_from_text(schema.coeff, f"{at}/coeff")
    return cochain_from_entries(nerve, schema.degree, coefficient, schema.values, f"{at}/values")


def nonzero_entries(cochain: Cochain) -> List[Dict]:
    group = cochain.coefficient
    return [
        {"simplex": list(label), "value": group.to_json(value)}
        for label, value in zip(cochain.complex.basis(cochain.degree), cochain.values)
        if not group.is_zero(value)
    ]


def require_cochain(cochain: Cochain, degree: int, kinds: Sequence[CoefficientKind], at: str) -> None:
    if cochain.degree != degree:
        raise SchemaError(f"expected a degree-{degree} cochain, got degree {cochain.degree}", f"{at}/degree")
    if cochain.coefficient.kind not in kinds:
        names = " or ".join(k.value for k in kinds)
        raise SchemaError(f"expected {names} coefficients, got {cochain.coefficient}", f"{at}/coeff")


def as_qmodz(cochain: Cochain) -> Cochain:
    """A Q or Q/Z cochain read in Q/Z."""
    if cochain.coefficient.kind is CoefficientKind.QMODZ:
        return cochain
    return cochain.map_values(lambda v: v, QMODZ)


# =============================================================================
# OPERATORS
# =============================================================================

def operator_from_schema(schema: OperatorSchema, at: str = "") -> MicrodiffOperator:
    try:
        return MicrodiffOperator.from_json(schema.model_dump(exclude={"kind", "display"}))
    except _BAD_VALUE as exc:
        raise SchemaError(f"malformed operator: {exc}", at or "/") from None


def operator_to_json(op: MicrodiffOperator) -> Dict:
    return {"kind": "operator", **op.to_json(), "display": op.pretty()}


# =============================================================================
# GROUPS, CROSSED MODULES AND 2-GROUP COCYCLES
# =============================================================================

def group_from_schema(schema: GroupSchema) -> FiniteGroup:
    if schema.cyclic is not None:
        return FiniteGroup.cyclic(schema.cyclic)
    return FiniteGroup.from_table(schema.table, schema.labels, schema.name)


def _check_range(values: Sequence[int], bound: int, at: str) -> None:
    for n, value in enumerate(values):
        if not 0 <= value < bound:
            raise SchemaError(f"element index {value} outside 0..{bound - 1}", f"{at}/{n}")


def crossed_module_from_schema(schema: CrossedModuleSchema) -> CrossedModule:
    lower = group_from_schema(schema.lower)
    upper = group_from_schema(schema.upper)
    _check_range(schema.d, upper.order, "/d")
    for f, row in enumerate(schema.action):
        _check_range(row, lower.order, f"/action/{f}")
    return CrossedModule(lower, upper, tuple(schema.d), tuple(tuple(row) for row in schema.action), schema.name)


def _labels(group: FiniteGroup, entries, nerve: CoverNerve, degree: int, at: str) -> Dict[Tuple[int, ...], int]:
    index = {label: n for n, label in enumerate(group.labels)}
    mapping = {}
    for n, entry in enumerate(entries):
        where = f"{at}/{n}"
        simplex = _simplex(nerve, entry.simplex, degree, where)
        if entry.value not in index:
            raise SchemaError(f"unknown element {entry.value!r} of {group.name or 'group'}", f"{where}/value")
        mapping[simplex] = index[entry.value]
    return mapping


def cocycle_from_schema(schema: TwoGroupCocycleSchema, nerve: CoverNerve, xmod: CrossedModule) -> TwoGroupCocycle:
    f = _labels(xmod.upper, schema.f, nerve, 1, "/f")
    alpha = _labels(xmod.lower, schema.alpha, nerve, 2, "/alpha")
    return TwoGroupCocycle.from_mapping(nerve, f, alpha)


# =============================================================================
# DESCENT BUNDLES
# =============================================================================

@dataclass(frozen=True)
class DescentBundle:
    """Descent data with the companions a document may carry."""
    data: AlgebroidDescentData
    module: Optional[ModuleData] = None
    target: Optional[AlgebroidDescentData] = None
    functor: Optional[FunctorData] = None
    second: Optional[FunctorData] = None
    transformation: Optional[TransformationData] = None


def engine_from_schema(schema, at: str = "") -> AlgebraEngine:
    if isinstance(schema, ChartAlgebraSchema):
        return ChartAlgebraEngine(schema.nvars, schema.window)
    try:
        table = FiniteTable(
            schema.dim,
            tuple(tuple(tuple(entry) for entry in row) for row in schema.structure),
            tuple(schema.unit),
            schema.modulus,
            schema.name,
        )
    except _BAD_VALUE as exc:
        raise SchemaError(f"malformed structure constants: {exc}", at or "/") from None
    return TableAlgebraEngine(table)


def _engines(schemas: Sequence[Any], nerve: CoverNerve, at: str) -> Tuple[AlgebraEngine, ...]:
    if len(schemas) == 1:
        engine = engine_from_schema(schemas[0], f"{at}/0")
        return tuple(engine for _ in range(nerve.vertices))
    if len(schemas) != nerve.vertices:
        raise SchemaError(f"give one algebra or {nerve.vertices}, got {len(schemas)}", at)
    return tuple(engine_from_schema(s, f"{at}/{n}") for n, s in enumerate(schemas))


def _element(engine: AlgebraEngine, raw: Any, where: str) -> Any:
    if isinstance(engine, ChartAlgebraEngine) and isinstance(raw, dict):
        op = raw.get("op", raw)
        validate(OperatorSchema, op, f"{where}/op" if "op" in raw else where)
    try:
        return engine.element_from_json(raw)
    except _BAD_VALUE as exc:
        raise SchemaError(f"not an element of {engine.name}: {exc}", where) from None


def _morphism(engine: AlgebraEngine, raw: Dict, where: str):
    try:
        return morphism_from_json(engine, raw)
    except _BAD_VALUE as exc:
        raise SchemaError(f"malformed morphism: {exc}", where) from None


def _edge_elements(data_nerve: CoverNerve, engines, entries, degree: int, at: str) -> Dict:
    """Simplex-keyed elements of A_i, i the first vertex."""
    out = {}
    for n, entry in enumerate(entries):
        where = f"{at}/{n}"
        simplex = _simplex(data_nerve, entry.simplex, degree, where)
        out[simplex] = _element(engines[simplex[0]], entry.value, f"{where}/value")
    return out


def _functor_from_schema(schema: FunctorSchema, target: AlgebroidDescentData, at: str) -> FunctorData:
    nerve = target.nerve
    functors = {}
    for n, entry in enumerate(schema.functors):
        if entry.vertex >= nerve.vertices:
            raise SchemaError(f"vertex {entry.vertex} outside the nerve", f"{at}/functors/{n}/vertex")
        functors[entry.vertex] = _morphism(target.algebra(entry.vertex), entry.morphism, f"{at}/functors/{n}/morphism")
    corrections = _edge_elements(nerve, target.algebras, schema.corrections, 1, f"{at}/corrections")
    return FunctorData(functors, corrections)


def _descent_core(schema: DescentSchema, at: str) -> AlgebroidDescentData:
    nerve = nerve_from_schema(schema.nerve, f"{at}/nerve")
    engines = _engines(schema.algebras, nerve, f"{at}/algebras")
    morphisms = {}
    for n, entry in enumerate(schema.morphisms):
        where = f"{at}/morphisms/{n}"
        edge = _simplex(nerve, entry.simplex, 1, where)
        morphisms[edge] = _morphism(engines[edge[0]], entry.morphism, f"{where}/morphism")
    units = _edge_elements(nerve, engines, schema.units, 2, f"{at}/units")
    return AlgebroidDescentData(nerve, engines, morphisms, units)


def descent_from_schema(schema: DescentSchema, normalize: Optional[bool] = None) -> DescentBundle:
    """
    Descent data and companions. With `normalize` (default from settings)
    shift lifts are moved into [0, 1) on bundles without companions.

    Raises:
        SchemaError: entries outside the nerve, malformed elements or morphisms
    """
    data = _descent_core(schema, "")
    module = None
    if schema.module is not None:
        module = ModuleData(_edge_elements(data.nerve, data.algebras, schema.module, 1, "/module"))
    target = functor = second = transformation = None
    if schema.target is not None:
        if any(getattr(schema.target, name) is not None for name in ("module", "target", "functor", "transformation")):
            raise SchemaError("target descent data carries no companions", "/target")
        target = _descent_core(schema.target, "/target")
        if target.nerve.simplices_by_dim != data.nerve.simplices_by_dim:
            raise SchemaError("target lives on a different nerve", "/target/nerve")
    if schema.functor is not None:
        functor = _functor_from_schema(schema.functor, target or data, "/functor")
    if schema.transformation is not None:
        second = _functor_from_schema(schema.transformation.functor, target or data, "/transformation/functor")
        units = {}
        for n, entry in enumerate(schema.transformation.units):
            where = f"/transformation/units/{n}"
            if entry.vertex >= data.nerve.vertices:
                raise SchemaError(f"vertex {entry.vertex} outside the nerve", f"{where}/vertex")
            units[entry.vertex] = _element((target or data).algebra(entry.vertex), entry.value, f"{where}/value")
        transformation = TransformationData(units)
    if normalize is None:
        normalize = get_settings().normalize
    if normalize:
        if module is None and target is None:
            data, _ = normalize_lifts(data)
        else:
            logger.warning("normalisation skipped: companions refer to the data as given")
    return DescentBundle(data, module, target, functor, second, transformation)


def descent_to_json(data: AlgebroidDescentData) -> Dict:
    nerve = data.nerve
    first = data.algebra(0)
    shared = all(a is first for a in data.algebras)
    algebras = [first.descriptor()] if shared else [a.descriptor() for a in data.algebras]
    return {
        "kind": "descent",
        "nerve": nerve_to_json(nerve),
        "algebras": algebras,
        "morphisms": [
            {"simplex": list(e), "morphism": morphism_to_json(data.algebra(e[0]), data.morphism(*e))}
            for e in nerve.simplices(1)
        ],
        "units": [
            {"simplex": list(t), "value": data.algebra(t[0]).element_to_json(data.unit(*t))}
            for t in nerve.simplices(2)
        ],
    }


# =============================================================================
# BUNDLE MODELS, PIC DATA AND TWISTS
# =============================================================================

def bundle_model_from_schema(schema: BundleModelSchema, at: str = "") -> CircleBundleModel:
    base = nerve_from_schema(schema.base, f"{at}/base")
    if schema.generator is not None:
        try:
            return CircleBundleModel.with_generator(base, schema.generator)
        except ValueError as exc:
            raise SchemaError(str(exc), f"{at}/generator") from None
    euler = cochain_from_entries(base, 2, Z, schema.euler, f"{at}/euler")
    return CircleBundleModel(base, euler)


def pic_from_schema(schema: PicDatumSchema, model: CircleBundleModel) -> PicDatum:
    """
    A Pic datum on the total space of `model`; a missing shift is read off
    the fiber monodromy.
    """
    mapping = {}
    for part, entries, degree in ((BASE, schema.ell.base, 1), (FIBER, schema.ell.fiber, 0)):
        values = _values(model.base, degree, RCX, entries, f"/ell/{part}")
        mapping.update({(part, simplex): value for simplex, value in values.items()})
    ell = Cochain.from_mapping(model.total_complex(RCX), 1, mapping, RCX)
    if schema.shift is None:
        return pic_from_local_system(model, ell)
    return PicDatum(ell, parse_rational(schema.shift))


@dataclass(frozen=True)
class Twist:
    """A ℚ/ℤ 1-cochain λ and an RCx 2-cochain c on one nerve."""
    nerve: CoverNerve
    lam: Cochain
    c: Cochain

    def to_dict(self) -> Dict:
        return {
            "kind": "twist",
            "nerve": nerve_to_json(self.nerve),
            "lam": nonzero_entries(self.lam),
            "c": nonzero_entries(self.c),
        }


def twist_from_schema(schema: TwistSchema) -> Twist:
    nerve = nerve_from_schema(schema.nerve, "/nerve")
    lam = cochain_from_entries(nerve, 1, QMODZ, schema.lam, "/lam")
    c = cochain_from_entries(nerve, 2, RCX, schema.c, "/c")
    return Twist(nerve, lam, c)
