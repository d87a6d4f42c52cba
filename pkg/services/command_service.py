"""
Command Service Module.

Executes a parsed `CommandSpec`: loads and validates the input documents,
dispatches to the owning module and shapes the JSON answer. Used by the
CLI (main.py) and by the CLI tests.
"""

import logging
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from classify.bundle_model import CircleBundleModel
from classify.classifier import (
    classify_algebroid, classify_pic, equivalence_classes_agree, twist_class,
)
from classify.sequence import five_term_sequence
from data_models import CheckResult, CommandSpec, ExitCode, Subcommand, VerificationStatus
from descent_engine.builders import twist_by_lambda, twist_descent
from descent_engine.data import AlgebroidDescentData
from descent_engine.verifier import (
    verify_descent, verify_functor_data, verify_module_data, verify_transformation,
)
from exceptions import BudgetExceededError, MicrocechError, SchemaError
from homology.coefficients import QMODZ, RCX, CoefficientKind
from homology.cohomology import cohomology
from homology.complexes import Cochain, nerve_complex
from homology.nerve import CoverNerve
from microdiff import (
    DEFAULT_WINDOW, ad_conjugation, adjoint, bimodule_hom_basis, commutator, formal_inverse,
    is_invertible, principal_symbol, sector_shift_generator, symbol_of_order,
)
from models import parse_document
from models.algebra import CrossedModuleSchema
from models.descent import DescentSchema
from models.reports import ErrorReport
from models.topology import BundleModelSchema, PicDatumSchema, TwistSchema
from services.acceptance import format_table, run_selftest
from services.codec import (
    as_qmodz, bundle_model_from_schema, cocycle_from_schema, coefficient_from_text,
    cochain_from_schema, crossed_module_from_schema, descent_from_schema, descent_to_json,
    group_from_schema, nerve_from_schema, operator_from_schema, operator_to_json,
    pic_from_schema, read_document, read_json, require_cochain, twist_from_schema,
)
from symcore import format_rational, parse_rational
from twogroup.cocycles import compare_with_abelian, h1_pointed_set, verify_cocycle
from twogroup.crossed_module import CrossedModule

logger = logging.getLogger(__name__)

TRUE = VerificationStatus.TRUE
FALSE = VerificationStatus.FALSE

Outcome = Tuple[VerificationStatus, Dict]

_EXIT = {
    VerificationStatus.TRUE: ExitCode.SUCCESS,
    VerificationStatus.FALSE: ExitCode.FALSE,
    VerificationStatus.INDETERMINATE: ExitCode.INDETERMINATE,
}


def _inputs(spec: CommandSpec, count: int, what: str) -> Tuple[str, ...]:
    if len(spec.inputs) != count:
        raise SchemaError(f"{spec.subcommand.value} needs {what}, got {len(spec.inputs)} input(s)")
    return spec.inputs


def _option(spec: CommandSpec, name: str, default=None):
    value = spec.options.get(name)
    return default if value is None else value


def _rational_option(spec: CommandSpec, name: str) -> Fraction:
    raw = spec.options.get(name)
    if raw is None:
        raise SchemaError(f"--{name} is required", f"/options/{name}")
    try:
        return parse_rational(raw)
    except ValueError as exc:
        raise SchemaError(str(exc), f"/options/{name}") from None


# =============================================================================
# OP
# =============================================================================

BINARY = {
    "mul": lambda p, q: p * q,
    "add": lambda p, q: p + q,
    "sub": lambda p, q: p - q,
    "commutator": commutator,
    "ad": ad_conjugation,
}
UNARY = {"inv": formal_inverse, "adj": adjoint}
OP_VERBS = tuple(BINARY) + tuple(UNARY) + ("sigma", "symbol", "invertible", "hom", "shift")


def _operators(spec: CommandSpec, count: int) -> List:
    paths = spec.inputs[1:]
    if len(paths) != count:
        raise SchemaError(f"op {spec.inputs[0]} needs {count} operator file(s), got {len(paths)}")
    return [operator_from_schema(read_document(path, "operator")) for path in paths]


def run_op(spec: CommandSpec) -> Outcome:
    if not spec.inputs or spec.inputs[0] not in OP_VERBS:
        raise SchemaError(f"op verb must be one of {', '.join(OP_VERBS)}")
    verb = spec.inputs[0]
    window = spec.window or 5
    if verb in BINARY:
        p, q = _operators(spec, 2)
        return TRUE, operator_to_json(BINARY[verb](p, q))
    if verb in UNARY:
        (p,) = _operators(spec, 1)
        return TRUE, operator_to_json(UNARY[verb](p))
    if verb == "sigma":
        (p,) = _operators(spec, 1)
        degree, symbol = principal_symbol(p)
        return TRUE, {"kind": "symbol", "degree": format_rational(degree), **symbol.to_json(), "display": symbol.pretty()}
    if verb == "symbol":
        (p,) = _operators(spec, 1)
        degree = _rational_option(spec, "order")
        symbol = symbol_of_order(p, degree)
        return TRUE, {"kind": "symbol", "degree": format_rational(degree), **symbol.to_json(), "display": symbol.pretty()}
    if verb == "invertible":
        (p,) = _operators(spec, 1)
        verdict = is_invertible(p)
        return (TRUE if verdict else FALSE), {"kind": "verdict", "property": "invertible", "holds": verdict}
    if verb == "hom":
        _operators(spec, 0)
        lam, mu = _rational_option(spec, "lam"), _rational_option(spec, "mu")
        basis = bimodule_hom_basis(lam, mu, window, nvars=_option(spec, "nvars", 2))
        return TRUE, {
            "kind": "hom_basis",
            "lam": format_rational(lam),
            "mu": format_rational(mu),
            "window": window,
            "dimension": len(basis),
            "basis": [operator_to_json(op) for op in basis],
        }
    _operators(spec, 0)
    lam = _rational_option(spec, "lam")
    return TRUE, operator_to_json(sector_shift_generator(lam, _option(spec, "nvars", 2), window))


# =============================================================================
# COHOMOLOGY AND 2-GROUP H1
# =============================================================================

def run_cohomology(spec: CommandSpec) -> Outcome:
    (path,) = _inputs(spec, 1, "a nerve or bundle model")
    schema = read_document(path, "nerve", "bundle_model")
    if isinstance(schema, BundleModelSchema):
        target = bundle_model_from_schema(schema).total_complex()
    else:
        target = nerve_from_schema(schema)
    coefficient = coefficient_from_text(spec.coeff or "Z")
    if spec.deg is None or spec.deg < 0:
        raise SchemaError("--deg must be a non-negative integer", "/options/deg")
    return TRUE, cohomology(target, coefficient, spec.deg).to_json()


def _crossed_module(spec: CommandSpec, path: str) -> Tuple[CrossedModule, object]:
    """The crossed module of a document and, for a plain group, the group itself."""
    schema = read_document(path, "crossed_module", "group")
    if isinstance(schema, CrossedModuleSchema):
        return crossed_module_from_schema(schema), None
    group = group_from_schema(schema)
    shift = _option(spec, "shift", 0)
    if shift not in (0, 1):
        raise SchemaError(f"--shift must be 0 or 1, got {shift}", "/options/shift")
    return CrossedModule.from_abelian(group, shift), group


def run_h1(spec: CommandSpec) -> Outcome:
    nerve_path, xmod_path = _inputs(spec, 2, "a nerve and a crossed module or group")
    nerve = nerve_from_schema(read_document(nerve_path, "nerve"))
    xmod, group = _crossed_module(spec, xmod_path)
    classes = h1_pointed_set(nerve, xmod, spec.budget)
    payload = classes.to_json()
    status = TRUE
    cocycle_path = spec.options.get("cocycle")
    if cocycle_path:
        cocycle = cocycle_from_schema(read_document(cocycle_path, "two_group_cocycle"), nerve, xmod)
        check = verify_cocycle(nerve, xmod, cocycle)
        payload["cocycle"] = {
            "verification": check.to_dict(),
            "class": classes.class_of(cocycle) if check.holds else None,
        }
        status = check.status
    if group is not None and spec.options.get("compare"):
        agree = compare_with_abelian(nerve, group, _option(spec, "shift", 0), spec.budget)
        payload["abelian_agreement"] = agree
        status = VerificationStatus.combine([status, TRUE if agree else FALSE])
    return status, payload


# =============================================================================
# DESCENT
# =============================================================================

def run_verify(spec: CommandSpec) -> Outcome:
    (path,) = _inputs(spec, 1, "a descent bundle")
    bundle = descent_from_schema(read_document(path, "descent"))
    window = spec.window
    checks: Dict[str, CheckResult] = {"descent": verify_descent(bundle.data, window)}
    target = bundle.target or bundle.data
    if bundle.target is not None:
        checks["target"] = verify_descent(bundle.target, window)
    if bundle.module is not None:
        checks["module"] = verify_module_data(bundle.data, bundle.module, window)
    if bundle.functor is not None:
        checks["functor"] = verify_functor_data(bundle.data, target, bundle.functor, window)
    if bundle.transformation is not None:
        if bundle.functor is None:
            raise SchemaError("a transformation needs the functor it starts from", "/functor")
        checks["transformation"] = verify_transformation(
            bundle.data, target, bundle.functor, bundle.second, bundle.transformation, window
        )
    status = VerificationStatus.combine(c.status for c in checks.values())
    for name, check in checks.items():
        first = check.first_violation
        logger.info(f"verify {name}: {check.status.value}" + (f" at {list(first.simplex)}" if first else ""))
    return status, {
        "kind": "verification",
        "status": status.value,
        "checks": {name: check.to_dict() for name, check in checks.items()},
    }


def _twist_cochains(spec: CommandSpec, nerve: CoverNerve) -> Tuple[Cochain, Cochain]:
    complex = nerve_complex(nerve)
    lam = Cochain.zero(complex, 1, QMODZ)
    c = Cochain.zero(complex, 2, RCX)
    if spec.options.get("lambda"):
        raw = cochain_from_schema(read_document(spec.options["lambda"], "cochain"), nerve)
        require_cochain(raw, 1, (CoefficientKind.Q, CoefficientKind.QMODZ), "")
        lam = as_qmodz(raw)
    if spec.options.get("scalar"):
        c = cochain_from_schema(read_document(spec.options["scalar"], "cochain"), nerve)
        require_cochain(c, 2, (CoefficientKind.RCX,), "")
    return lam, c


def run_twist(spec: CommandSpec) -> Outcome:
    (path,) = _inputs(spec, 1, "a nerve or descent bundle")
    schema = read_document(path, "nerve", "descent")
    if isinstance(schema, DescentSchema):
        data = descent_from_schema(schema).data
        lam, c = _twist_cochains(spec, data.nerve)
        return TRUE, descent_to_json(twist_descent(data, lam, c))
    nerve = nerve_from_schema(schema)
    lam, c = _twist_cochains(spec, nerve)
    window = spec.window or DEFAULT_WINDOW
    return TRUE, descent_to_json(twist_by_lambda(nerve, lam, c, window=window))


# =============================================================================
# CLASSIFICATION
# =============================================================================

def _same_base(model: CircleBundleModel, nerve: CoverNerve, at: str) -> None:
    if nerve.simplices_by_dim != model.base.simplices_by_dim:
        raise SchemaError("input lives on a different nerve than the bundle model's base", at)


def _descent_of(path: str, model: CircleBundleModel) -> AlgebroidDescentData:
    """Descent data of a descent or twist document on the base of `model`."""
    schema = read_document(path, "descent", "twist")
    if isinstance(schema, TwistSchema):
        twist = twist_from_schema(schema)
        _same_base(model, twist.nerve, "/nerve")
        return twist_by_lambda(twist.nerve, twist.lam, twist.c)
    data = descent_from_schema(schema).data
    _same_base(model, data.nerve, "/nerve")
    return data


def run_classify(spec: CommandSpec) -> Outcome:
    (path,) = _inputs(spec, 1, "a descent, twist or pic document")
    model_path = spec.options.get("model")
    if not model_path:
        raise SchemaError("--model is required", "/options/model")
    model = bundle_model_from_schema(read_document(model_path, "bundle_model"))
    against = spec.options.get("against")
    if against:
        report = equivalence_classes_agree(model, _descent_of(path, model), _descent_of(against, model), spec.budget)
        return report.status, report.to_dict()
    schema = parse_document(read_json(path), ("descent", "twist", "pic"))
    if isinstance(schema, PicDatumSchema):
        return TRUE, classify_pic(model, pic_from_schema(schema, model)).to_dict()
    if isinstance(schema, TwistSchema):
        twist = twist_from_schema(schema)
        _same_base(model, twist.nerve, "/nerve")
        return TRUE, twist_class(model, twist.lam, twist.c).to_dict()
    data = descent_from_schema(schema).data
    _same_base(model, data.nerve, "/nerve")
    return TRUE, classify_algebroid(model, data).to_dict()


def run_sequence(spec: CommandSpec) -> Outcome:
    (path,) = _inputs(spec, 1, "a bundle model")
    model = bundle_model_from_schema(read_document(path, "bundle_model"))
    coefficient = coefficient_from_text(spec.coeff or "Z/2")
    try:
        sequence = five_term_sequence(model, coefficient)
    except ValueError as exc:
        raise SchemaError(str(exc), "/options/coeff") from None
    return sequence.status, sequence.to_dict()


def run_selftest_command(spec: CommandSpec) -> Outcome:
    report = run_selftest(spec.seed, quick=bool(spec.options.get("quick")))
    print(format_table(report), file=sys.stderr)
    return (TRUE if report.passed else FALSE), report.model_dump()


HANDLERS: Dict[Subcommand, Callable[[CommandSpec], Outcome]] = {
    Subcommand.OP: run_op,
    Subcommand.COHOMOLOGY: run_cohomology,
    Subcommand.H1: run_h1,
    Subcommand.VERIFY: run_verify,
    Subcommand.TWIST: run_twist,
    Subcommand.CLASSIFY: run_classify,
    Subcommand.SEQUENCE: run_sequence,
    Subcommand.SELFTEST: run_selftest_command,
}


def _error(exc: Exception, path=None) -> Dict:
    message = exc.message if isinstance(exc, MicrocechError) else str(exc)
    return ErrorReport(error=type(exc).__name__, message=message, path=path).model_dump()


def run(spec: CommandSpec) -> Tuple[ExitCode, Dict]:
    """
    Execute one command.

    Returns:
        (exit code, JSON payload). Errors are reported as an `error`
        document rather than raised.
    """
    try:
        status, payload = HANDLERS[spec.subcommand](spec)
    except SchemaError as exc:
        logger.error(f"input error: {exc.message}")
        return ExitCode.USAGE, _error(exc, exc.path or None)
    except BudgetExceededError as exc:
        logger.warning(f"search budget exhausted: {exc.message}")
        return ExitCode.INDETERMINATE, _error(exc)
    except (MicrocechError, ValueError, OSError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return ExitCode.USAGE, _error(exc)
    return _EXIT[status], payload
